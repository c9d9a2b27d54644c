#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mswe/assembly.hpp"
#include "mswe/field.hpp"
#include "mswe/linear_solve.hpp"
#include "mswe/sparse.hpp"
#include "mswe/topology.hpp"

namespace mswe {

struct Physics {
  Field coriolis;  // f_h in W
  double gravity = 1.0;
  double mean_depth = 1.0;
  std::optional<Field> orography;  // b_h in Q
  double apv_tau = 0.0;
  /// A step aborts when the depth at any quadrature point falls below this.
  double depth_floor = 0.0;

  void validate(const DofMap& dofs) const;
};

/// Prognostic pair plus time. A value type passed between steps.
struct SimState {
  Field u;  // U
  Field h;  // Q
  double t = 0.0;
};

struct Tendency {
  std::vector<double> du;
  std::vector<double> dh;
};

/// Discrete rotating shallow water operators on one mesh. The constant mass
/// matrices and incidence matrices are built once; state-dependent coupling
/// matrices are reassembled on every tendency evaluation.
class ShallowWaterSolver {
 public:
  ShallowWaterSolver(AssemblyContext ctx, Physics physics);

  const AssemblyContext& context() const { return ctx_; }
  const Physics& physics() const { return phys_; }
  const DofMap& dofs() const { return ctx_.dofs(); }
  const IncidenceMatrices& incidence() const { return inc_; }
  const SparseOperator& mass(Space s) const;
  /// Serial reference or OpenMP kernels, for assembly and solves alike.
  void set_exec(Exec e);
  Exec exec() const { return ctx_.exec(); }

  std::vector<double> solve_mass(Space s, std::span<const double> rhs) const;

  /// W^h q = -E10^T U u + W f
  Field diagnose_q(const Field& u, const Field& h) const;
  /// U F = U^h u
  Field diagnose_F(const Field& u, const Field& h) const;
  /// Q K = 1/2 U^u u
  Field diagnose_K(const Field& u) const;
  /// W w = -E10^T U u
  Field diagnose_vorticity(const Field& u) const;
  /// W qhat = W q - tau <u x rot q, .>
  Field anticipated_pv(const Field& q, const Field& u, double tau) const;

  Tendency tendency(const SimState& s) const;
  /// Midpoint RK2; `step` only labels failures.
  SimState rk2_step(const SimState& s, double dt, long step = 0) const;

  /// U du = -U^f u + g E21^T Q h, dh = -H E21 u
  Tendency linearized_tendency(const SimState& s) const;
  SimState linear_rk2_step(const SimState& s, double dt, long step = 0) const;

  /// Smallest depth at the quadrature points.
  double min_depth(const Field& h) const;

 private:
  using TendencyFn = std::function<Tendency(const SimState&)>;
  SimState rk2(const SimState& s, double dt, long step, const TendencyFn& fn, bool check_depth) const;
  CgOptions cg() const { return {1e-12, 0, ctx_.exec()}; }

  AssemblyContext ctx_;
  Physics phys_;
  IncidenceMatrices inc_;
  SparseOperator w_mass_, u_mass_, q_mass_;
  ElementBlockSolver q_solver_;
  mutable std::optional<SparseOperator> uf_;  // linearized Coriolis, built on first use
};

}  // namespace mswe
