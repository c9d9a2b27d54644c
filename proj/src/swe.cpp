#include "mswe/swe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mswe/error.hpp"

namespace mswe {

void Physics::validate(const DofMap& dofs) const {
  require_space(coriolis, Space::W, "Physics::coriolis");
  if (coriolis.size() != dofs.dW) throw InvalidArgument("Physics: coriolis field has the wrong size");
  if (!(gravity > 0.0)) throw InvalidArgument("Physics: gravity must be positive");
  if (!(mean_depth > 0.0)) throw InvalidArgument("Physics: mean depth must be positive");
  if (!(apv_tau >= 0.0)) throw InvalidArgument("Physics: apv time scale must be non-negative");
  if (orography) {
    require_space(*orography, Space::Q, "Physics::orography");
    if (orography->size() != dofs.dQ) throw InvalidArgument("Physics: orography field has the wrong size");
  }
}

ShallowWaterSolver::ShallowWaterSolver(AssemblyContext ctx, Physics physics)
    : ctx_(std::move(ctx)), phys_(std::move(physics)), inc_(build_incidence(ctx_.mesh(), ctx_.dofs())) {
  phys_.validate(ctx_.dofs());
  w_mass_ = assemble_mass(Space::W, ctx_);
  u_mass_ = assemble_mass(Space::U, ctx_);
  q_mass_ = assemble_mass(Space::Q, ctx_);
  q_solver_ = ElementBlockSolver(q_mass_, ctx_.dofs().q, ctx_.dofs().local_size(Space::Q), ctx_.exec());
}

const SparseOperator& ShallowWaterSolver::mass(Space s) const {
  switch (s) {
    case Space::W: return w_mass_;
    case Space::U: return u_mass_;
    case Space::Q: return q_mass_;
  }
  throw InvalidArgument("mass: unknown space");
}

void ShallowWaterSolver::set_exec(Exec e) { ctx_.set_exec(e); }

std::vector<double> ShallowWaterSolver::solve_mass(Space s, std::span<const double> rhs) const {
  if (s == Space::Q) return q_solver_.solve(rhs);
  return solve_spd(mass(s), rhs, cg());
}

namespace {

void check_state(const Field& u, const Field& h, const DofMap& d) {
  require_space(u, Space::U, "state velocity");
  require_space(h, Space::Q, "state depth");
  if (u.size() != d.dU || h.size() != d.dQ) throw InvalidArgument("state does not match the mesh");
}

}  // namespace

Field ShallowWaterSolver::diagnose_q(const Field& u, const Field& h) const {
  check_state(u, h, dofs());
  const auto uu = u_mass_.apply(u.coeffs, exec());
  std::vector<double> rhs = w_mass_.apply(phys_.coriolis.coeffs, exec());
  std::vector<double> rot(rhs.size());
  inc_.e10_t.apply(uu, rot);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= rot[i];
  const SparseOperator wh = assemble_coupling(Coupling::Wh, ctx_, h);
  try {
    return {Space::W, solve_spd(wh, rhs, cg())};
  } catch (const NumericalFailure& e) {
    throw NumericalFailure(std::string("diagnose_q: depth-weighted W matrix is singular (") + e.what() + ")");
  }
}

Field ShallowWaterSolver::diagnose_F(const Field& u, const Field& h) const {
  check_state(u, h, dofs());
  const SparseOperator uh = assemble_coupling(Coupling::Uh, ctx_, h);
  return {Space::U, solve_spd(u_mass_, uh.apply(u.coeffs, exec()), cg())};
}

Field ShallowWaterSolver::diagnose_K(const Field& u) const {
  require_space(u, Space::U, "diagnose_K");
  const SparseOperator uu = assemble_coupling(Coupling::Uu, ctx_, u);
  std::vector<double> rhs = uu.apply(u.coeffs, exec());
  for (double& v : rhs) v *= 0.5;
  return {Space::Q, q_solver_.solve(rhs)};
}

Field ShallowWaterSolver::diagnose_vorticity(const Field& u) const {
  require_space(u, Space::U, "diagnose_vorticity");
  std::vector<double> rhs = inc_.e10_t.apply(u_mass_.apply(u.coeffs, exec()));
  for (double& v : rhs) v = -v;
  return {Space::W, solve_spd(w_mass_, rhs, cg())};
}

Field ShallowWaterSolver::anticipated_pv(const Field& q, const Field& u, double tau) const {
  require_space(q, Space::W, "anticipated_pv");
  require_space(u, Space::U, "anticipated_pv");
  if (tau < 0.0) throw InvalidArgument("anticipated_pv: time scale must be non-negative");
  if (tau == 0.0) return q;
  const Field grad{Space::U, inc_.e10.apply(q.coeffs)};
  const int nqp = ctx_.n_qp();
  // u x rot(q) = u . grad(q)
  const auto r = assemble_w_load(ctx_, [&](int e, std::span<double> s) {
    std::vector<double> ux(nqp), uy(nqp), gx(nqp), gy(nqp);
    ctx_.eval_vector(u, e, ux, uy);
    ctx_.eval_vector(grad, e, gx, gy);
    for (int k = 0; k < nqp; ++k) s[k] = ux[k] * gy[k] - uy[k] * gx[k];
  });
  const auto corr = solve_spd(w_mass_, r, cg());
  Field qhat = q;
  for (std::size_t i = 0; i < corr.size(); ++i) qhat.coeffs[i] -= tau * corr[i];
  return qhat;
}

Tendency ShallowWaterSolver::tendency(const SimState& s) const {
  const Field q = diagnose_q(s.u, s.h);
  const Field F = diagnose_F(s.u, s.h);
  const Field K = diagnose_K(s.u);
  const Field qhat = anticipated_pv(q, s.u, phys_.apv_tau);

  const double g = phys_.gravity;
  std::vector<double> bern(K.coeffs.size());
  for (std::size_t i = 0; i < bern.size(); ++i) bern[i] = K.coeffs[i] + g * s.h.coeffs[i];
  if (phys_.orography)
    for (std::size_t i = 0; i < bern.size(); ++i) bern[i] += g * phys_.orography->coeffs[i];
  std::vector<double> rhs = inc_.e21_t.apply(q_mass_.apply(bern, exec()));
  const SparseOperator uq = assemble_coupling(Coupling::Uq, ctx_, qhat);
  const auto rot = uq.apply(F.coeffs, exec());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= rot[i];

  Tendency t;
  t.du = solve_spd(u_mass_, rhs, cg());
  t.dh = inc_.e21.apply(F.coeffs);
  for (double& v : t.dh) v = -v;
  return t;
}

Tendency ShallowWaterSolver::linearized_tendency(const SimState& s) const {
  check_state(s.u, s.h, dofs());
  if (!uf_) uf_ = assemble_coupling(Coupling::Uf, ctx_, phys_.coriolis);
  const double g = phys_.gravity;
  std::vector<double> rhs = inc_.e21_t.apply(q_mass_.apply(s.h.coeffs, exec()));
  const auto cor = uf_->apply(s.u.coeffs, exec());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = g * rhs[i] - cor[i];
  Tendency t;
  t.du = solve_spd(u_mass_, rhs, cg());
  t.dh = inc_.e21.apply(s.u.coeffs);
  for (double& v : t.dh) v *= -phys_.mean_depth;
  return t;
}

double ShallowWaterSolver::min_depth(const Field& h) const {
  require_space(h, Space::Q, "min_depth");
  const int ne = ctx_.mesh().elements();
  const int nqp = ctx_.n_qp();
  std::vector<double> mins(ne);
  for_each_index(ne, exec(), [&](int e) {
    std::vector<double> v(nqp);
    ctx_.eval_scalar(h, e, v);
    mins[e] = *std::min_element(v.begin(), v.end());
  });
  return *std::min_element(mins.begin(), mins.end());
}

SimState ShallowWaterSolver::rk2(const SimState& s, double dt, long step, const TendencyFn& fn,
                                 bool check_depth) const {
  if (!(dt > 0.0)) throw InvalidArgument("rk2_step: time step must be positive");
  check_state(s.u, s.h, dofs());
  auto advance = [&](const SimState& base, const Tendency& t, double h) {
    SimState out = base;
    kernels::axpy(h, t.du, out.u.coeffs, exec());
    kernels::axpy(h, t.dh, out.h.coeffs, exec());
    return out;
  };
  SimState out;
  try {
    const SimState mid = advance(s, fn(s), 0.5 * dt);
    out = advance(s, fn(mid), dt);
  } catch (const BlowUp&) {
    throw;
  } catch (const NumericalFailure& e) {
    throw BlowUp("step " + std::to_string(step) + ": " + e.what(), step);
  }
  out.t = s.t + dt;
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(out.u.coeffs) || !finite(out.h.coeffs))
    throw BlowUp("step " + std::to_string(step) + ": non-finite state at t = " + std::to_string(out.t), step);
  if (check_depth) {
    const double hmin = min_depth(out.h);
    if (hmin < phys_.depth_floor)
      throw BlowUp("step " + std::to_string(step) + ": depth " + std::to_string(hmin) + " below floor " +
                       std::to_string(phys_.depth_floor) + " at t = " + std::to_string(out.t),
                   step);
  }
  return out;
}

SimState ShallowWaterSolver::rk2_step(const SimState& s, double dt, long step) const {
  return rk2(s, dt, step, [this](const SimState& x) { return tendency(x); }, true);
}

SimState ShallowWaterSolver::linear_rk2_step(const SimState& s, double dt, long step) const {
  return rk2(s, dt, step, [this](const SimState& x) { return linearized_tendency(x); }, false);
}

}  // namespace mswe
