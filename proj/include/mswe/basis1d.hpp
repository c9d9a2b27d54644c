#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mswe/int_matrix.hpp"

namespace mswe {

/// Legendre polynomial L_n(x) and its derivative, by three-term recurrence.
std::pair<double, double> legendre(int n, double x);

/// The p+1 roots of (1 - x^2) L_p'(x) on [-1, 1], ascending, endpoints exactly +-1.
std::vector<double> gll_nodes(int p);

struct QuadRule {
  std::vector<double> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
  /// Sum of w_i f(x_i).
  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * f(points[i]);
    return s;
  }
};

/// n-point Gauss-Lobatto-Legendre rule; exact for polynomials of degree 2n-3.
QuadRule gll_quadrature(int n);

/// p x (p+1) one-dimensional incidence (difference) matrix.
IntMatrix incidence_1d(int p);

/// Nodal (Lagrange) and histopolant (edge) polynomials on the GLL nodes of
/// degree p. Nodal index i runs over 0..p, edge index i over 1..p; edge
/// polynomial i histopolates the sub-interval [nodes[i-1], nodes[i]].
class Basis1D {
 public:
  explicit Basis1D(int p);

  int degree() const { return p_; }
  std::span<const double> nodes() const { return nodes_; }

  double lagrange(int i, double xi) const;
  double lagrange_deriv(int i, double xi) const;
  double edge(int i, double xi) const;

  /// All p+1 nodal values at xi.
  void lagrange_all(double xi, std::span<double> out) const;
  /// All p edge values at xi; out[i-1] holds e_i.
  void edge_all(double xi, std::span<double> out) const;

 private:
  void check_node_index(int i) const;

  int p_;
  std::vector<double> nodes_;
};

}  // namespace mswe
