#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "mswe/basis1d.hpp"
#include "mswe/field.hpp"
#include "mswe/parallel.hpp"
#include "mswe/sparse.hpp"
#include "mswe/topology.hpp"

namespace mswe {

enum class QuadMode { exact, inexact };

/// GLL points per direction: ceil((3p+3)/2) in exact mode, p+1 in inexact mode.
int quadrature_points(QuadMode mode, int p);

/// Quadrature, basis tabulation on the physical (affine) element and the
/// sparsity patterns of every operator pair. Immutable once built.
///
/// Physical transforms: W functions map unchanged, U functions use the
/// contravariant (flux-preserving) scaling and Q functions the inverse
/// Jacobian, so DOFs remain metric-free and the incidence matrices act on
/// them exactly.
class AssemblyContext {
 public:
  AssemblyContext(const Mesh& mesh, QuadMode mode, Exec exec = Exec::parallel, int points_per_dir = 0);

  const Mesh& mesh() const { return mesh_; }
  const DofMap& dofs() const { return dofs_; }
  const Basis1D& basis() const { return basis_; }
  QuadMode mode() const { return mode_; }
  const QuadRule& rule() const { return rule_; }
  Exec exec() const { return exec_; }
  void set_exec(Exec e) { exec_ = e; }

  int points_per_dir() const { return rule_.size(); }
  int n_qp() const { return rule_.size() * rule_.size(); }
  double jacobian() const { return jac_; }
  /// Quadrature weights times the Jacobian, qp index a * n + b (a along x).
  std::span<const double> weights() const { return weights_; }

  // Tabulated physical basis values, one row of n_qp() per local function.
  std::span<const double> w_row(int k) const { return row(w_tab_, k); }
  std::span<const double> ux_row(int k) const { return row(ux_tab_, k); }  // x-flux functions, x component
  std::span<const double> uy_row(int k) const { return row(uy_tab_, k); }  // y-flux functions, y component
  std::span<const double> q_row(int k) const { return row(q_tab_, k); }
  std::span<const double> w_table() const { return w_tab_; }
  std::span<const double> ux_table() const { return ux_tab_; }
  std::span<const double> uy_table() const { return uy_tab_; }
  std::span<const double> q_table() const { return q_tab_; }

  const SparsityPattern& pattern(Space rows, Space cols) const;

  std::array<double, 2> qp_coords(int e, int qp) const;
  /// Values of a W or Q field at the quadrature points of element e.
  void eval_scalar(const Field& f, int e, std::span<double> out) const;
  /// Components of a U field at the quadrature points of element e.
  void eval_vector(const Field& f, int e, std::span<double> vx, std::span<double> vy) const;

 private:
  std::span<const double> row(const std::vector<double>& t, int k) const {
    return {t.data() + static_cast<std::size_t>(k) * n_qp(), static_cast<std::size_t>(n_qp())};
  }

  Mesh mesh_;
  DofMap dofs_;
  Basis1D basis_;
  QuadMode mode_;
  QuadRule rule_;
  Exec exec_;
  double jac_;
  std::vector<double> weights_;
  std::vector<double> w_tab_, ux_tab_, uy_tab_, q_tab_;
  std::vector<SparsityPattern> patterns_;  // indexed 3 * row + col
};

/// Gram matrix of one space on the mesh.
SparseOperator assemble_mass(Space space, const AssemblyContext& ctx);

enum class Coupling {
  Uq,  // <q x e_j, e_i>, skew, coefficient in W
  Uh,  // <h e_j, e_i>, symmetric, coefficient in Q
  Uu,  // <u . e_j^U, e_i^Q>, dQ x dU, coefficient in U
  Wh,  // <h e_j^W, e_i^W>, symmetric, coefficient in Q
  Wq,  // <e_i^W, q e_j^Q>, dW x dQ, coefficient in W
  Qw,  // <e_j^W, e_i^Q>, dQ x dW, no coefficient
  Uf,  // <f x e_j, e_i>, skew, coefficient in W
};

const char* coupling_name(Coupling kind);
Space coupling_coefficient_space(Coupling kind);

SparseOperator assemble_coupling(Coupling kind, const AssemblyContext& ctx, const Field& coeff);
/// Coefficient-free kinds (Qw).
SparseOperator assemble_coupling(Coupling kind, const AssemblyContext& ctx);

/// Load vector b_i = sum_e sum_qp w * s_e(qp) * phi_i(qp) for phi in W (the
/// only space that needs one). integrand(e, out) fills s_e at the quadrature
/// points of element e.
std::vector<double> assemble_w_load(const AssemblyContext& ctx,
                                    const std::function<void(int, std::span<double>)>& integrand);

using ScalarFunction = std::function<double(double, double)>;
using VectorFunction = std::function<std::array<double, 2>(double, double)>;

/// Canonical DOFs of an analytic function: point values (W) or sub-cell
/// integrals (Q).
Field project_mimetic(Space space, const ScalarFunction& fn, const AssemblyContext& ctx);
/// Edge-flux DOFs (U) of an analytic vector field.
Field project_mimetic(Space space, const VectorFunction& fn, const AssemblyContext& ctx);

/// Element index and reference coordinates of a physical point (periodic).
struct ReferencePoint {
  int element;
  double xi;
  double eta;
};
ReferencePoint locate(const Mesh& mesh, double x, double y);

double evaluate_scalar(const Field& f, const AssemblyContext& ctx, const ReferencePoint& at);
std::array<double, 2> evaluate_vector(const Field& f, const AssemblyContext& ctx, const ReferencePoint& at);
double evaluate_scalar(const Field& f, const AssemblyContext& ctx, double x, double y);
std::array<double, 2> evaluate_vector(const Field& f, const AssemblyContext& ctx, double x, double y);

}  // namespace mswe
