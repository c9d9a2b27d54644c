#include "mswe/diagnostics.hpp"

#include <cmath>

#include "mswe/error.hpp"

namespace mswe {

ConservationRecord measure_conservation(const SimState& s, const ShallowWaterSolver& solver, long step) {
  const AssemblyContext& ctx = solver.context();
  const Physics& ph = solver.physics();
  const Exec ex = solver.exec();
  ConservationRecord r;
  r.step = step;
  r.time = s.t;
  r.mass = kernels::sum(s.h.coeffs, ex);

  const auto rot = solver.incidence().e10_t.apply(solver.mass(Space::U).apply(s.u.coeffs, ex));
  r.vorticity = -kernels::sum(rot, ex);

  const SparseOperator uu = assemble_coupling(Coupling::Uu, ctx, s.u);
  const auto uuu = uu.apply(s.u.coeffs, ex);
  const auto qh = solver.mass(Space::Q).apply(s.h.coeffs, ex);
  r.energy = 0.5 * kernels::dot(s.h.coeffs, uuu, ex) + 0.5 * ph.gravity * kernels::dot(s.h.coeffs, qh, ex);
  if (ph.orography) r.energy += ph.gravity * kernels::dot(ph.orography->coeffs, qh, ex);

  const Field q = solver.diagnose_q(s.u, s.h);
  const SparseOperator wh = assemble_coupling(Coupling::Wh, ctx, s.h);
  r.enstrophy = kernels::dot(q.coeffs, wh.apply(q.coeffs, ex), ex);
  return r;
}

double vorticity_scale(const SimState& s, const ShallowWaterSolver& solver) {
  const Field w = solver.diagnose_vorticity(s.u);
  const double ww = kernels::dot(w.coeffs, solver.mass(Space::W).apply(w.coeffs, solver.exec()), solver.exec());
  return std::sqrt(solver.context().mesh().area() * ww);
}

ConservationRecord normalized_drift(const ConservationRecord& r, const ConservationRecord& r0, double vort_scale) {
  auto rel = [](double a, double a0) { return a0 != 0.0 ? (a - a0) / std::abs(a0) : a - a0; };
  ConservationRecord d = r;
  d.mass = rel(r.mass, r0.mass);
  d.vorticity = vort_scale > 0.0 ? (r.vorticity - r0.vorticity) / vort_scale : r.vorticity - r0.vorticity;
  d.energy = rel(r.energy, r0.energy);
  d.enstrophy = rel(r.enstrophy, r0.enstrophy);
  return d;
}

DriftSummary max_drift(std::span<const ConservationRecord> series, double vort_scale) {
  DriftSummary m;
  if (series.empty()) return m;
  for (const auto& r : series) {
    const auto d = normalized_drift(r, series.front(), vort_scale);
    m.mass = std::max(m.mass, std::abs(d.mass));
    m.vorticity = std::max(m.vorticity, std::abs(d.vorticity));
    m.energy = std::max(m.energy, std::abs(d.energy));
    m.enstrophy = std::max(m.enstrophy, std::abs(d.enstrophy));
  }
  return m;
}

namespace {

template <class PointError>
double l2_impl(const AssemblyContext& ctx, PointError&& err2) {
  const Mesh& m = ctx.mesh();
  const QuadRule r = gll_quadrature(quadrature_points(QuadMode::exact, m.p));
  const int ne = m.elements();
  std::vector<double> per(ne, 0.0);
  for_each_index(ne, ctx.exec(), [&](int e) {
    const int ex = e % m.nx;
    const int ey = e / m.nx;
    double s = 0.0;
    for (int a = 0; a < r.size(); ++a)
      for (int b = 0; b < r.size(); ++b) {
        const ReferencePoint at{e, r.points[a], r.points[b]};
        const double x = m.x0 + (ex + 0.5 * (r.points[a] + 1.0)) * m.dx();
        const double y = m.y0 + (ey + 0.5 * (r.points[b] + 1.0)) * m.dy();
        s += r.weights[a] * r.weights[b] * err2(at, x, y);
      }
    per[e] = s * ctx.jacobian();
  });
  double total = 0.0;
  for (double v : per) total += v;
  return std::sqrt(total);
}

}  // namespace

double l2_error(const Field& f, const ScalarFunction& exact, const AssemblyContext& ctx) {
  if (f.space == Space::U) throw SpaceMismatch("l2_error: U fields need a vector-valued reference");
  return l2_impl(ctx, [&](const ReferencePoint& at, double x, double y) {
    const double d = evaluate_scalar(f, ctx, at) - exact(x, y);
    return d * d;
  });
}

double l2_error(const Field& f, const VectorFunction& exact, const AssemblyContext& ctx) {
  require_space(f, Space::U, "l2_error");
  return l2_impl(ctx, [&](const ReferencePoint& at, double x, double y) {
    const auto v = evaluate_vector(f, ctx, at);
    const auto w = exact(x, y);
    return (v[0] - w[0]) * (v[0] - w[0]) + (v[1] - w[1]) * (v[1] - w[1]);
  });
}

std::vector<Sample> sample_field(const Field& f, const AssemblyContext& ctx, int resolution) {
  if (resolution < 2) throw InvalidArgument("sample_field: resolution must be at least 2");
  if (f.space == Space::U) throw SpaceMismatch("sample_field: only scalar fields can be sampled");
  const Mesh& m = ctx.mesh();
  std::vector<Sample> out(static_cast<std::size_t>(resolution) * resolution);
  for_each_index(resolution * resolution, ctx.exec(), [&](int k) {
    const int iy = k / resolution;
    const int ix = k % resolution;
    const double x = m.x0 + m.lx * ix / (resolution - 1);
    const double y = m.y0 + m.ly * iy / (resolution - 1);
    out[k] = {x, y, evaluate_scalar(f, ctx, x, y)};
  });
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("loglog_slope: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("loglog_slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw InvalidArgument("loglog_slope: abscissae are all equal");
  return (n * sxy - sx * sy) / den;
}

}  // namespace mswe
