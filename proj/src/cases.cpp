#include "mswe/cases.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>

#include "json.hpp"
#include "mswe/error.hpp"

namespace mswe {

namespace {
constexpr double kPi = std::numbers::pi;
}

StreamFunction cosine_stream_function() {
  StreamFunction s;
  s.psi = [](double x, double y) { return 0.1 * std::cos(x - kPi) * std::cos(y - kPi); };
  s.psi_x = [](double x, double y) { return -0.1 * std::sin(x - kPi) * std::cos(y - kPi); };
  s.psi_y = [](double x, double y) { return -0.1 * std::cos(x - kPi) * std::sin(y - kPi); };
  s.laplacian = [](double x, double y) { return -0.2 * std::cos(x - kPi) * std::cos(y - kPi); };
  return s;
}

StreamFunction vortex_pair_stream_function() {
  struct Bump {
    double cx, cy;
    double value(double x, double y) const {
      return std::exp(-2.5 * ((x - cx) * (x - cx) + (y - cy) * (y - cy)));
    }
  };
  const Bump a{kPi, 2.0 * kPi / 3.0}, b{kPi, 4.0 * kPi / 3.0};
  StreamFunction s;
  s.psi = [=](double x, double y) { return a.value(x, y) + b.value(x, y); };
  s.psi_x = [=](double x, double y) { return -5.0 * ((x - a.cx) * a.value(x, y) + (x - b.cx) * b.value(x, y)); };
  s.psi_y = [=](double x, double y) { return -5.0 * ((y - a.cy) * a.value(x, y) + (y - b.cy) * b.value(x, y)); };
  s.laplacian = [=](double x, double y) {
    double l = 0.0;
    for (const Bump& v : {a, b}) {
      const double r2 = (x - v.cx) * (x - v.cx) + (y - v.cy) * (y - v.cy);
      l += (25.0 * r2 - 10.0) * v.value(x, y);
    }
    return l;
  };
  return s;
}

StreamFunction shear_stream_function() {
  StreamFunction s;
  s.psi = [](double, double y) { return 0.1 * std::tanh(0.5 * (1.0 - y * y)); };
  s.psi_x = [](double, double) { return 0.0; };
  s.psi_y = [](double, double y) {
    const double t = std::tanh(0.5 * (1.0 - y * y));
    return -0.1 * y * (1.0 - t * t);
  };
  s.laplacian = [](double, double y) {
    const double t = std::tanh(0.5 * (1.0 - y * y));
    const double sech2 = 1.0 - t * t;
    return -0.1 * sech2 - 0.2 * y * y * t * sech2;
  };
  return s;
}

ScalarFunction seamount(double length) {
  return [length](double x, double y) {
    if (std::abs(x) > 0.25 * length || std::abs(y) > 0.25 * length) return 0.0;
    return 0.0125 * (std::cos(4.0 * kPi * x / length) + 1.0) * (std::cos(4.0 * kPi * y / length) + 1.0);
  };
}

Field rotational_velocity(const StreamFunction& s, const AssemblyContext& ctx) {
  const Field psi = project_mimetic(Space::W, s.psi, ctx);
  return {Space::U, build_incidence(ctx.mesh(), ctx.dofs()).e10.apply(psi.coeffs)};
}

Field geostrophic_depth(const StreamFunction& s, double f, double g, double H, const AssemblyContext& ctx) {
  const ScalarFunction psi = s.psi;
  return project_mimetic(Space::Q, ScalarFunction([=](double x, double y) { return H + f / g * psi(x, y); }), ctx);
}

Physics make_physics(const RunConfig& c, const AssemblyContext& ctx) {
  Physics ph;
  ph.coriolis = Field::constant(Space::W, ctx.dofs(), c.f);
  ph.gravity = c.g;
  ph.mean_depth = c.H;
  ph.apv_tau = c.apv_tau;
  ph.depth_floor = c.depth_floor;
  if (c.kind == CaseKind::orography) ph.orography = project_mimetic(Space::Q, seamount(c.lx), ctx);
  return ph;
}

SimState initial_state(const RunConfig& c, const AssemblyContext& ctx) {
  SimState s;
  switch (c.kind) {
    case CaseKind::vortex_pair: {
      const auto sf = vortex_pair_stream_function();
      s.u = rotational_velocity(sf, ctx);
      s.h = geostrophic_depth(sf, c.f, c.g, c.H, ctx);
      break;
    }
    case CaseKind::orography: {
      // h = H + psi and u = (-dh/dy, 0) = rot psi
      const auto sf = shear_stream_function();
      s.u = rotational_velocity(sf, ctx);
      s.h = geostrophic_depth(sf, 1.0, 1.0, c.H, ctx);
      break;
    }
    case CaseKind::balance:
    case CaseKind::custom:
    case CaseKind::convergence: {
      const auto sf = cosine_stream_function();
      s.u = rotational_velocity(sf, ctx);
      s.h = geostrophic_depth(sf, c.f, c.g, c.H, ctx);
      break;
    }
  }
  return s;
}

ConvergenceRow diagnostic_errors(const RunConfig& c, int p, int nx, Exec exec) {
  const Mesh m{nx, nx, c.lx, c.ly, c.x0, c.y0, p};
  m.validate();
  AssemblyContext ctx(m, c.quadrature, exec);
  RunConfig cc = c;
  cc.kind = CaseKind::convergence;
  const ShallowWaterSolver solver(ctx, make_physics(cc, ctx));
  const SimState s = initial_state(cc, ctx);
  const auto sf = cosine_stream_function();
  const double f = c.f, g = c.g, H = c.H;
  auto depth = [=](double x, double y) { return H + f / g * sf.psi(x, y); };

  ConvergenceRow r;
  r.p = p;
  r.nx = nx;
  r.h_mesh = c.lx / nx;
  r.err_q = l2_error(solver.diagnose_q(s.u, s.h),
                     ScalarFunction([=](double x, double y) { return (sf.laplacian(x, y) + f) / depth(x, y); }), ctx);
  r.err_F = l2_error(solver.diagnose_F(s.u, s.h), VectorFunction([=](double x, double y) {
                       const double h = depth(x, y);
                       return std::array<double, 2>{-sf.psi_y(x, y) * h, sf.psi_x(x, y) * h};
                     }),
                     ctx);
  r.err_K = l2_error(solver.diagnose_K(s.u), ScalarFunction([=](double x, double y) {
                       const double a = sf.psi_x(x, y), b = sf.psi_y(x, y);
                       return 0.5 * (a * a + b * b);
                     }),
                     ctx);
  return r;
}

std::vector<BalanceRecord> run_balance(const RunConfig& c, int nx, Exec exec) {
  const Mesh m{nx, nx, c.lx, c.ly, c.x0, c.y0, c.p};
  m.validate();
  AssemblyContext ctx(m, c.quadrature, exec);
  RunConfig cc = c;
  cc.kind = CaseKind::balance;
  const ShallowWaterSolver solver(ctx, make_physics(cc, ctx));
  SimState s = initial_state(cc, ctx);
  const auto sf = cosine_stream_function();
  const double f = c.f, g = c.g, H = c.H;
  const VectorFunction u_exact = [=](double x, double y) {
    return std::array<double, 2>{-sf.psi_y(x, y), sf.psi_x(x, y)};
  };
  const ScalarFunction h_exact = [=](double x, double y) { return H + f / g * sf.psi(x, y); };
  const double dt = c.dt > 0.0 ? c.dt : 0.02 / nx;
  const long steps = std::llround(c.t_final / dt);

  std::vector<BalanceRecord> out;
  auto record = [&](long k) { out.push_back({k, s.t, l2_error(s.u, u_exact, ctx), l2_error(s.h, h_exact, ctx)}); };
  record(0);
  for (long k = 1; k <= steps; ++k) {
    s = solver.linear_rk2_step(s, dt, k);
    if (k == 1 || k == steps || k % c.record_interval == 0) record(k);
  }
  return out;
}

std::string snapshot_name(const std::string& field, double time) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_t%04lld.csv", field.c_str(), std::llround(time * 100.0));
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Field snapshot_field(const std::string& name, const SimState& s, const ShallowWaterSolver& solver) {
  if (name == "h") return s.h;
  if (name == "vorticity") return solver.diagnose_vorticity(s.u);
  if (name == "q") return solver.diagnose_q(s.u, s.h);
  if (name == "K") return solver.diagnose_K(s.u);
  throw InvalidArgument("unknown snapshot field '" + name + "'");
}

std::vector<std::string> snapshot_fields(CaseKind k) {
  if (k == CaseKind::orography) return {"h", "vorticity", "K"};
  return {"h"};
}

}  // namespace

void write_timeseries_csv(const std::filesystem::path& path, const std::vector<ConservationRecord>& records) {
  auto out = open_out(path);
  out << "step,time,mass,vorticity,energy,enstrophy\n";
  for (const auto& r : records)
    out << r.step << ',' << g17(r.time) << ',' << g17(r.mass) << ',' << g17(r.vorticity) << ',' << g17(r.energy)
        << ',' << g17(r.enstrophy) << '\n';
}

void write_samples_csv(const std::filesystem::path& path, const std::vector<Sample>& samples) {
  auto out = open_out(path);
  out << "x,y,value\n";
  for (const auto& s : samples) out << g17(s.x) << ',' << g17(s.y) << ',' << g17(s.value) << '\n';
}

void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows) {
  auto out = open_out(path);
  out << "h_mesh,err_q,err_F,err_K\n";
  for (const auto& r : rows) out << g17(r.h_mesh) << ',' << g17(r.err_q) << ',' << g17(r.err_F) << ',' << g17(r.err_K) << '\n';
}

TimeSeries simulate(const RunConfig& c, const std::filesystem::path* out_dir, Exec exec) {
  AssemblyContext ctx(c.mesh(), c.quadrature, exec);
  const ShallowWaterSolver solver(ctx, make_physics(c, ctx));
  SimState s = initial_state(c, ctx);
  const long steps = c.steps();

  // snapshot step -> time label
  std::map<long, double> snaps;
  auto add_snap = [&](double t) {
    const long k = std::llround(t / c.dt);
    if (k >= 0 && k <= steps) snaps.emplace(k, t);
  };
  for (double t : c.snapshot_times) add_snap(t);
  if (c.snapshot_interval > 0.0)
    for (double t = 0.0; t <= c.t_final + 0.5 * c.dt; t += c.snapshot_interval) add_snap(t);
  auto write_snaps = [&](long k) {
    if (!out_dir) return;
    const auto it = snaps.find(k);
    if (it == snaps.end()) return;
    for (const auto& name : snapshot_fields(c.kind))
      write_samples_csv(*out_dir / snapshot_name(name, it->second),
                        sample_field(snapshot_field(name, s, solver), solver.context(), c.sample_resolution));
  };

  TimeSeries ts;
  ts.vort_scale = vorticity_scale(s, solver);
  ts.records.push_back(measure_conservation(s, solver, 0));
  write_snaps(0);
  try {
    for (long k = 1; k <= steps; ++k) {
      s = solver.rk2_step(s, c.dt, k);
      ts.steps_done = k;
      if (k % c.record_interval == 0 || k == steps) ts.records.push_back(measure_conservation(s, solver, k));
      write_snaps(k);
    }
  } catch (const NumericalFailure& e) {
    ts.failure = e.what();
  }
  ts.drift = max_drift(ts.records, ts.vort_scale);
  return ts;
}

namespace {

using nlohmann::json;

json drift_json(const DriftSummary& d) {
  return {{"mass", d.mass}, {"vorticity", d.vorticity}, {"energy", d.energy}, {"enstrophy", d.enstrophy}};
}

json config_json(const RunConfig& c) {
  return {{"case", case_name(c.kind)},
          {"p", c.p},
          {"nx", c.nx},
          {"ny", c.ny > 0 ? c.ny : c.nx},
          {"lx", c.lx},
          {"ly", c.ly},
          {"f", c.f},
          {"g", c.g},
          {"H", c.H},
          {"dt", c.dt},
          {"tf", c.t_final},
          {"quadrature", c.quadrature == QuadMode::exact ? "exact" : "inexact"},
          {"apv_tau", c.apv_tau}};
}

/// L_d = sqrt(gH)/f over the mean nodal spacing.
double deformation_ratio(const RunConfig& c) {
  return std::sqrt(c.g * c.H) / std::abs(c.f) / (c.lx / c.nx / c.p);
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

int run_convergence(const RunConfig& c, std::ostream& log, json& summary) {
  json slopes = json::object();
  for (int p : c.p_list) {
    std::vector<ConvergenceRow> rows;
    for (int nx : c.nx_list) rows.push_back(diagnostic_errors(c, p, nx));
    write_convergence_csv(c.output_dir / ("convergence_p" + std::to_string(p) + ".csv"), rows);
    if (rows.size() >= 2) {
      std::vector<double> h, eq, eF, eK;
      for (const auto& r : rows) {
        h.push_back(r.h_mesh);
        eq.push_back(r.err_q);
        eF.push_back(r.err_F);
        eK.push_back(r.err_K);
      }
      const json s = {{"q", loglog_slope(h, eq)}, {"F", loglog_slope(h, eF)}, {"K", loglog_slope(h, eK)}};
      slopes[std::to_string(p)] = s;
      log << "p=" << p << " slopes: q " << s["q"].get<double>() << "  F " << s["F"].get<double>() << "  K "
          << s["K"].get<double>() << '\n';
    }
  }
  summary["slopes"] = slopes;

  if (!c.spectral_p_list.empty()) {
    auto out = open_out(c.output_dir / "spectral.csv");
    out << "p,err_q,err_F,err_K\n";
    json spec = json::array();
    for (int p : c.spectral_p_list) {
      const auto r = diagnostic_errors(c, p, c.nx);
      out << p << ',' << g17(r.err_q) << ',' << g17(r.err_F) << ',' << g17(r.err_K) << '\n';
      spec.push_back({{"p", p}, {"err_q", r.err_q}, {"err_F", r.err_F}, {"err_K", r.err_K}});
      log << "spectral p=" << p << ": q " << r.err_q << "  F " << r.err_F << "  K " << r.err_K << '\n';
    }
    summary["spectral"] = spec;
  }
  return 0;
}

int run_balance_case(const RunConfig& c, std::ostream& log, json& summary) {
  json per = json::array();
  std::vector<double> hs, finals;
  for (int nx : c.nx_list) {
    const auto recs = run_balance(c, nx);
    auto out = open_out(c.output_dir / ("balance_nx" + std::to_string(nx) + ".csv"));
    out << "step,time,err_u,err_h\n";
    for (const auto& r : recs) out << r.step << ',' << g17(r.time) << ',' << g17(r.err_u) << ',' << g17(r.err_h) << '\n';
    const double first = recs.size() > 1 ? recs[1].err_u : recs.front().err_u;
    const double last = recs.back().err_u;
    per.push_back({{"nx", nx}, {"first_step_err_u", first}, {"final_err_u", last}, {"ratio", last / first}});
    hs.push_back(c.lx / nx);
    finals.push_back(last);
    log << "nx=" << nx << ": err_u first step " << first << ", final " << last << '\n';
  }
  summary["balance"] = per;
  if (hs.size() >= 2) summary["slope_err_u"] = loglog_slope(hs, finals);
  return 0;
}

int run_timeseries(const RunConfig& c, std::ostream& log, json& summary) {
  summary["deformation_ratio"] = deformation_ratio(c);
  log << "deformation radius / nodal spacing = " << deformation_ratio(c) << '\n';
  std::vector<double> dts = c.dt_sweep.empty() ? std::vector<double>{c.dt} : c.dt_sweep;
  json runs = json::array();
  std::vector<double> energy, enstrophy;
  int code = 0;
  for (double dt : dts) {
    RunConfig rc = c;
    rc.dt = dt;
    rc.validate();
    const std::filesystem::path dir =
        c.dt_sweep.empty() ? c.output_dir : c.output_dir / ("dt_" + g17(dt));
    std::filesystem::create_directories(dir);
    const TimeSeries ts = simulate(rc, &dir);
    write_timeseries_csv(dir / "timeseries.csv", ts.records);
    json r = {{"dt", dt}, {"steps", ts.steps_done}, {"vorticity_scale", ts.vort_scale}, {"max_drift", drift_json(ts.drift)}};
    if (ts.failure) {
      r["failure"] = *ts.failure;
      log << "numerical failure: " << *ts.failure << '\n';
      code = 2;
    }
    log << "dt=" << dt << ": max drift mass " << ts.drift.mass << "  vorticity " << ts.drift.vorticity << "  energy "
        << ts.drift.energy << "  enstrophy " << ts.drift.enstrophy << '\n';
    runs.push_back(r);
    energy.push_back(ts.drift.energy);
    enstrophy.push_back(ts.drift.enstrophy);
  }
  summary["runs"] = runs;
  if (dts.size() >= 2 && code == 0) {
    try {
      summary["slope_energy"] = loglog_slope(dts, energy);
      summary["slope_enstrophy"] = loglog_slope(dts, enstrophy);
    } catch (const InvalidArgument&) {
      // zero drift somewhere; no slope to report
    }
  }
  return code;
}

}  // namespace

int run_case(const RunConfig& c, std::ostream& log) {
  c.validate();
  std::filesystem::create_directories(c.output_dir);
  json summary = {{"config", config_json(c)}};
  int code = 0;
  try {
    switch (c.kind) {
      case CaseKind::convergence: code = run_convergence(c, log, summary); break;
      case CaseKind::balance: code = run_balance_case(c, log, summary); break;
      case CaseKind::vortex_pair:
      case CaseKind::orography:
      case CaseKind::custom: code = run_timeseries(c, log, summary); break;
    }
  } catch (const NumericalFailure& e) {
    summary["failure"] = e.what();
    log << "numerical failure: " << e.what() << '\n';
    code = 2;
  }
  summary["status"] = code == 0 ? "ok" : "numerical_failure";
  write_json(c.output_dir / "summary.json", summary);
  return code;
}

}  // namespace mswe
