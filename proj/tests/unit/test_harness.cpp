#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "../oracle.hpp"
#include "mswe/cases.hpp"
#include "mswe/checks.hpp"
#include "mswe/config.hpp"
#include "mswe/diagnostics.hpp"
#include "mswe/error.hpp"

using namespace mswe;
namespace fs = std::filesystem;

namespace {

Mesh square(int n, int p) {
  Mesh m;
  m.nx = m.ny = n;
  m.lx = m.ly = 2.0 * M_PI;
  m.p = p;
  return m;
}

ShallowWaterSolver make_solver(const Mesh& m, QuadMode mode, double f, double g, double H) {
  AssemblyContext ctx(m, mode);
  Physics ph;
  ph.coriolis = Field::constant(Space::W, ctx.dofs(), f);
  ph.gravity = g;
  ph.mean_depth = H;
  return ShallowWaterSolver(std::move(ctx), std::move(ph));
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string l;
  std::getline(in, l);
  return l;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mswe_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("conservation measures of the rest state") {
  const auto s = make_solver(square(3, 3), QuadMode::exact, 8.0, 8.0, 0.2);
  const SimState st{Field::zeros(Space::U, s.dofs()),
                    project_mimetic(Space::Q, ScalarFunction([](double, double) { return 0.2; }), s.context()), 0.0};
  const auto r = measure_conservation(st, s, 5);
  const double area = 4.0 * M_PI * M_PI;
  CHECK(r.step == 5);
  CHECK(r.mass == doctest::Approx(0.2 * area).epsilon(1e-13));
  CHECK(r.energy == doctest::Approx(0.5 * 8.0 * 0.04 * area).epsilon(1e-13));
  CHECK(r.vorticity == 0.0);
  CHECK(r.enstrophy == doctest::Approx(40.0 * 40.0 * 0.2 * area).epsilon(1e-12));
}

TEST_CASE("enstrophy matches a brute-force integral of h q^2") {
  const auto s = make_solver(square(4, 3), QuadMode::exact, 8.0, 8.0, 8.0);
  RunConfig c = RunConfig::defaults(CaseKind::vortex_pair);
  c.nx = 4;
  c.p = 3;
  const SimState st = initial_state(c, s.context());
  const Field q = s.diagnose_q(st.u, st.h);
  const auto g = oracle::gauss_legendre(12);
  const Mesh& m = s.context().mesh();
  double integral = 0.0;
  for (int e = 0; e < m.elements(); ++e)
    for (std::size_t a = 0; a < g.x.size(); ++a)
      for (std::size_t b = 0; b < g.x.size(); ++b) {
        const ReferencePoint at{e, g.x[a], g.x[b]};
        const double qv = evaluate_scalar(q, s.context(), at);
        integral += g.w[a] * g.w[b] * m.dx() * m.dy() / 4.0 * evaluate_scalar(st.h, s.context(), at) * qv * qv;
      }
  CHECK(measure_conservation(st, s).enstrophy == doctest::Approx(integral).epsilon(1e-11));
}

TEST_CASE("drift summaries") {
  std::vector<ConservationRecord> rs{{0, 0.0, 2.0, 0.0, 4.0, 8.0}, {1, 0.1, 2.0, 1e-3, 3.0, 9.0}, {2, 0.2, 2.2, -2e-3, 4.0, 8.0}};
  const auto d = max_drift(rs, 0.5);
  CHECK(d.mass == doctest::Approx(0.1));
  CHECK(d.vorticity == doctest::Approx(4e-3));
  CHECK(d.energy == doctest::Approx(0.25));
  CHECK(d.enstrophy == doctest::Approx(0.125));
  const auto n = normalized_drift(rs[1], rs[0], 0.5);
  CHECK(n.energy == doctest::Approx(-0.25));
  CHECK(n.vorticity == doctest::Approx(2e-3));
}

TEST_CASE("l2 error") {
  const AssemblyContext ctx(square(2, 3), QuadMode::exact);
  const Field zero = Field::zeros(Space::W, ctx.dofs());
  CHECK(l2_error(zero, ScalarFunction([](double, double) { return 1.0; }), ctx) == doctest::Approx(2.0 * M_PI));
  const ScalarFunction bump = [](double x, double y) { return std::sin(x) * std::cos(y); };
  const double e4 = l2_error(project_mimetic(Space::W, bump, ctx), bump, ctx);
  const AssemblyContext fine(square(4, 3), QuadMode::exact);
  const double e8 = l2_error(project_mimetic(Space::W, bump, fine), bump, fine);
  CHECK(e8 < e4 / 10.0);
  const VectorFunction v = [](double, double) { return std::array<double, 2>{1.0, -2.0}; };
  CHECK(l2_error(project_mimetic(Space::U, v, ctx), v, ctx) < 1e-12);
  CHECK_THROWS_AS(l2_error(Field::zeros(Space::U, ctx.dofs()), bump, ctx), SpaceMismatch);
}

TEST_CASE("sample_field") {
  const AssemblyContext ctx(square(2, 2), QuadMode::exact);
  const Field c = Field::constant(Space::W, ctx.dofs(), 3.0);
  const auto s = sample_field(c, ctx, 5);
  REQUIRE(s.size() == 25);
  for (const auto& v : s) CHECK(v.value == doctest::Approx(3.0));
  CHECK(s.front().x == 0.0);
  CHECK(s.back().x == doctest::Approx(2.0 * M_PI));
  CHECK(s[1].x > s[0].x);  // x varies fastest
  CHECK(s[1].y == s[0].y);
  const ScalarFunction f = [](double x, double y) { return std::cos(x) + std::sin(y); };
  const Field w = project_mimetic(Space::W, f, ctx);
  const auto corners = sample_field(w, ctx, 2);
  for (const auto& v : corners) CHECK(v.value == doctest::Approx(1.0));
  CHECK_THROWS_AS(sample_field(c, ctx, 1), InvalidArgument);
}

TEST_CASE("loglog slope") {
  const std::vector<double> x{1.0, 2.0, 4.0, 8.0};
  const std::vector<double> y{3.0, 3.0 / 8.0, 3.0 / 64.0, 3.0 / 512.0};
  CHECK(loglog_slope(x, y) == doctest::Approx(-3.0));
  CHECK_THROWS_AS(loglog_slope(std::vector<double>{1.0}, std::vector<double>{1.0}), InvalidArgument);
  CHECK_THROWS_AS(loglog_slope(x, std::vector<double>{1.0, 0.0, 1.0, 1.0}), InvalidArgument);
}

TEST_CASE("configuration") {
  SUBCASE("case defaults") {
    const auto v = RunConfig::defaults(CaseKind::vortex_pair);
    CHECK(v.nx == 20);
    CHECK(v.p == 3);
    CHECK(v.f == 8.0);
    CHECK(v.dt == 0.0052);
    const auto o = RunConfig::defaults(CaseKind::orography);
    CHECK(o.nx == 24);
    CHECK(o.lx == 10.0);
    CHECK(o.x0 == -5.0);
    CHECK(o.t_final == 44.0);
  }
  SUBCASE("text parsing") {
    const auto kv = parse_config_text("# comment\n p = 4  # trailing\n\nnx=8\nnx = 16\n");
    CHECK(kv.size() == 2);
    CHECK(kv.at("p") == "4");
    CHECK(kv.at("nx") == "16");
    CHECK_THROWS_AS(parse_config_text("p 4\n"), UsageError);
    CHECK_THROWS_AS(parse_config_text(" = 4\n"), UsageError);
  }
  SUBCASE("precedence and validation") {
    const auto c = build_config(CaseKind::custom, {{"case", "vortex_pair"}, {"nx", "6"}}, {{"nx", "5"}, {"quadrature", "inexact"}});
    CHECK(c.kind == CaseKind::vortex_pair);
    CHECK(c.nx == 5);
    CHECK(c.quadrature == QuadMode::inexact);
    CHECK(c.mesh().ny == 5);
    CHECK(c.steps() == 385);
    CHECK_THROWS_AS(build_config(CaseKind::custom, {}, {{"bogus", "1"}}), UsageError);
    CHECK_THROWS_AS(build_config(CaseKind::custom, {}, {{"p", "three"}}), UsageError);
    CHECK_THROWS_AS(build_config(CaseKind::custom, {}, {{"p", "0"}}), UsageError);
    CHECK_THROWS_AS(build_config(CaseKind::custom, {}, {{"H", "-1"}}), UsageError);
    CHECK_THROWS_AS(build_config(CaseKind::custom, {}, {{"dt", "nan"}}), UsageError);
    CHECK_THROWS_AS(build_config(CaseKind::custom, {}, {{"quadrature", "gauss"}}), UsageError);
    CHECK_THROWS_AS(build_config(CaseKind::custom, {}, {{"tf", "0.001"}}), UsageError);
    CHECK_THROWS_AS(parse_case("sphere"), UsageError);
    CHECK_THROWS_AS(read_config_file("/nonexistent/cfg"), UsageError);
  }
  SUBCASE("lists") {
    RunConfig c;
    c.set("nx_list", "2, 4,8");
    c.set("snapshot_times", "0,0.5");
    CHECK(c.nx_list == std::vector<int>{2, 4, 8});
    CHECK(c.snapshot_times == std::vector<double>{0.0, 0.5});
    CHECK_THROWS_AS(c.set("nx_list", "2,,4"), UsageError);
  }
}

TEST_CASE("csv writers") {
  const fs::path d = scratch("csv");
  fs::create_directories(d);
  write_timeseries_csv(d / "t.csv", {{0, 0.0, 1.0, 0.0, 2.0, 3.0}, {1, 0.5, 1.0, 1e-17, 2.0, 3.0}});
  CHECK(first_line(d / "t.csv") == "step,time,mass,vorticity,energy,enstrophy");
  CHECK(read(d / "t.csv").find("1,0.5,1,1.0000000000000001e-17,2,3") != std::string::npos);
  write_samples_csv(d / "s.csv", {{0.0, 1.0, 2.0}});
  CHECK(first_line(d / "s.csv") == "x,y,value");
  write_convergence_csv(d / "c.csv", {{3, 4, 1.5, 0.1, 0.2, 0.3}});
  CHECK(first_line(d / "c.csv") == "h_mesh,err_q,err_F,err_K");
  CHECK(snapshot_name("h", 0.5) == "h_t0050.csv");
  CHECK(snapshot_name("vorticity", 44.0) == "vorticity_t4400.csv");
  fs::remove_all(d);
}

TEST_CASE("timeseries runs are deterministic and write their outputs") {
  RunConfig c = build_config(CaseKind::vortex_pair, {}, {{"nx", "3"}, {"tf", "0.052"}, {"snapshot_times", "0,0.052"},
                                                         {"sample_resolution", "8"}, {"record_interval", "2"}});
  std::string first;
  for (int rep = 0; rep < 2; ++rep) {
    c.output_dir = scratch("det" + std::to_string(rep));
    std::ostringstream log;
    CHECK(run_case(c, log) == 0);
    CHECK(fs::exists(c.output_dir / "summary.json"));
    CHECK(fs::exists(c.output_dir / "h_t0000.csv"));
    CHECK(fs::exists(c.output_dir / "h_t0005.csv"));
    const auto j = nlohmann::json::parse(read(c.output_dir / "summary.json"));
    CHECK(j["status"] == "ok");
    CHECK(j["runs"][0]["steps"] == 10);
    const std::string ts = read(c.output_dir / "timeseries.csv");
    if (rep == 0) first = ts;
    else CHECK(ts == first);
  }
  // step 0, every second step and the final one
  std::istringstream in(first);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1 + 6);
  fs::remove_all(scratch("det0"));
  fs::remove_all(scratch("det1"));
}

TEST_CASE("serial and parallel simulations agree bitwise") {
  RunConfig c = build_config(CaseKind::vortex_pair, {}, {{"nx", "3"}, {"tf", "0.0208"}});
  const auto a = simulate(c, nullptr, Exec::serial);
  const auto b = simulate(c, nullptr, Exec::parallel);
  REQUIRE(a.records.size() == b.records.size());
  CHECK(a.records.back().energy == b.records.back().energy);
  CHECK(a.records.back().enstrophy == b.records.back().enstrophy);
}

TEST_CASE("convergence and balance runs write their tables") {
  RunConfig c = build_config(CaseKind::convergence, {}, {{"nx_list", "2,4"}, {"p_list", "2"}, {"spectral_p_list", "2,3"}});
  c.output_dir = scratch("conv");
  std::ostringstream log;
  CHECK(run_case(c, log) == 0);
  CHECK(first_line(c.output_dir / "convergence_p2.csv") == "h_mesh,err_q,err_F,err_K");
  CHECK(first_line(c.output_dir / "spectral.csv") == "p,err_q,err_F,err_K");
  const auto j = nlohmann::json::parse(read(c.output_dir / "summary.json"));
  CHECK(j.contains("slopes"));
  fs::remove_all(c.output_dir);

  RunConfig b = build_config(CaseKind::balance, {}, {{"nx_list", "2"}, {"p", "2"}, {"tf", "0.05"}});
  b.output_dir = scratch("bal");
  CHECK(run_case(b, log) == 0);
  CHECK(first_line(b.output_dir / "balance_nx2.csv") == "step,time,err_u,err_h");
  fs::remove_all(b.output_dir);
}

TEST_CASE("invariant suite passes") {
  for (const auto& r : topology_checks(3, 3)) CHECK_MESSAGE(r.passed, r.name << ": " << r.detail);
  for (const auto& r : symmetry_checks(42, 4)) CHECK_MESSAGE(r.passed, r.name << ": " << r.detail);
}

TEST_CASE("command line exit codes") {
  const fs::path out = scratch("cli");
  const std::string exe = MSWE_CLI_PATH;
  auto run = [&](const std::string& args) {
    const int s = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(run("check") == 0);
  CHECK(run("run --case custom --nx 2 --p 2 --out " + out.string()) == 0);
  CHECK(run("run --case custom --bogus 1") == 1);
  CHECK(run("run --case custom --p 0 --out " + out.string()) == 1);
  CHECK(run("conserve --case orography") == 1);
  CHECK(run("run --case custom --nx 2 --p 2 --depth-floor 100 --out " + out.string()) == 2);
  CHECK(run("") == 1);
  fs::remove_all(out);
}
