#include "mswe/basis1d.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mswe/error.hpp"

namespace mswe {

std::pair<double, double> legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double l_prev = 1.0, l = x;
  double d_prev = 0.0, d = 1.0;
  for (int k = 1; k < n; ++k) {
    const double l_next = ((2 * k + 1) * x * l - k * l_prev) / (k + 1);
    const double d_next = d_prev + (2 * k + 1) * l;
    l_prev = l;
    l = l_next;
    d_prev = d;
    d = d_next;
  }
  return {l, d};
}

std::vector<double> gll_nodes(int p) {
  if (p < 1) throw InvalidArgument("gll_nodes: degree must be >= 1, got " + std::to_string(p));
  constexpr int kMaxIter = 100;
  constexpr double kTol = 1e-15;

  std::vector<double> x(p + 1);
  x.front() = -1.0;
  x.back() = 1.0;
  const double pp1 = static_cast<double>(p) * (p + 1);
  for (int i = 1; i < p; ++i) {
    // Newton on L_p', with L_p'' from the Legendre ODE.
    double xi = -std::cos(std::numbers::pi * i / p);
    bool converged = false;
    for (int it = 0; it < kMaxIter; ++it) {
      const auto [l, dl] = legendre(p, xi);
      const double d2l = (2.0 * xi * dl - pp1 * l) / (1.0 - xi * xi);
      const double step = dl / d2l;
      xi -= step;
      if (std::abs(step) <= kTol) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw NumericalFailure("gll_nodes: Newton iteration did not converge for p=" + std::to_string(p));
    x[i] = xi;
  }
  for (int i = 1; i < p; ++i) {
    const double s = 0.5 * (x[i] - x[p - i]);
    x[i] = s;
    x[p - i] = -s;
  }
  if (p % 2 == 0) x[p / 2] = 0.0;
  return x;
}

QuadRule gll_quadrature(int n) {
  if (n < 2) throw InvalidArgument("gll_quadrature: need at least 2 points, got " + std::to_string(n));
  QuadRule rule;
  rule.points = gll_nodes(n - 1);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double l = legendre(n - 1, rule.points[i]).first;
    rule.weights[i] = 2.0 / (static_cast<double>(n) * (n - 1) * l * l);
  }
  return rule;
}

IntMatrix incidence_1d(int p) {
  if (p < 1) throw InvalidArgument("incidence_1d: degree must be >= 1, got " + std::to_string(p));
  IntMatrix e(p, p + 1);
  for (int i = 0; i < p; ++i) {
    e(i, i) = -1;
    e(i, i + 1) = 1;
  }
  return e;
}

Basis1D::Basis1D(int p) : p_(p), nodes_(gll_nodes(p)) {}

void Basis1D::check_node_index(int i) const {
  if (i < 0 || i > p_)
    throw InvalidArgument("Basis1D: nodal index " + std::to_string(i) + " outside 0.." + std::to_string(p_));
}

double Basis1D::lagrange(int i, double xi) const {
  check_node_index(i);
  double v = 1.0;
  for (int k = 0; k <= p_; ++k)
    if (k != i) v *= (xi - nodes_[k]) / (nodes_[i] - nodes_[k]);
  return v;
}

double Basis1D::lagrange_deriv(int i, double xi) const {
  check_node_index(i);
  double sum = 0.0;
  for (int m = 0; m <= p_; ++m) {
    if (m == i) continue;
    double term = 1.0 / (nodes_[i] - nodes_[m]);
    for (int k = 0; k <= p_; ++k)
      if (k != i && k != m) term *= (xi - nodes_[k]) / (nodes_[i] - nodes_[k]);
    sum += term;
  }
  return sum;
}

double Basis1D::edge(int i, double xi) const {
  if (i < 1 || i > p_)
    throw InvalidArgument("Basis1D: edge index " + std::to_string(i) + " outside 1.." + std::to_string(p_));
  double v = 0.0;
  for (int k = 0; k < i; ++k) v -= lagrange_deriv(k, xi);
  return v;
}

void Basis1D::lagrange_all(double xi, std::span<double> out) const {
  for (int i = 0; i <= p_; ++i) {
    double v = 1.0;
    for (int k = 0; k <= p_; ++k)
      if (k != i) v *= (xi - nodes_[k]) / (nodes_[i] - nodes_[k]);
    out[i] = v;
  }
}

void Basis1D::edge_all(double xi, std::span<double> out) const {
  double acc = 0.0;
  for (int i = 1; i <= p_; ++i) {
    acc -= lagrange_deriv(i - 1, xi);
    out[i - 1] = acc;
  }
}

}  // namespace mswe
