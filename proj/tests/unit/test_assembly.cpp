#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "../oracle_assembly.hpp"
#include "mswe/assembly.hpp"
#include "mswe/error.hpp"

using namespace mswe;

namespace {

Mesh square(int n, int p, double l = 2.0 * M_PI) {
  Mesh m;
  m.nx = m.ny = n;
  m.lx = m.ly = l;
  m.p = p;
  return m;
}

Eigen::MatrixXd dense(const SparseOperator& a) {
  const auto v = a.to_dense();
  Eigen::MatrixXd d(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) d(r, c) = v[static_cast<std::size_t>(r) * a.cols() + c];
  return d;
}

Field random_field(Space s, const DofMap& d, std::mt19937& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Field f = Field::zeros(s, d);
  for (double& v : f.coeffs) v = u(rng);
  return f;
}

double min_eig(const Eigen::MatrixXd& a) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("quadrature point counts") {
  CHECK(quadrature_points(QuadMode::exact, 1) == 3);
  CHECK(quadrature_points(QuadMode::exact, 2) == 5);
  CHECK(quadrature_points(QuadMode::exact, 3) == 6);
  CHECK(quadrature_points(QuadMode::inexact, 3) == 4);
}

TEST_CASE("mass matrices are SPD on a 2x2 p=2 mesh") {
  const AssemblyContext ctx(square(2, 2), QuadMode::exact);
  for (Space s : {Space::W, Space::U, Space::Q}) {
    const auto m = assemble_mass(s, ctx);
    CHECK(m.symmetry() == Symmetry::symmetric);
    CHECK(m.verify_symmetry(1e-14));
    CHECK(min_eig(dense(m)) > 0.0);
  }
}

TEST_CASE("inexact W mass is diagonal with the GLL weights") {
  const Mesh m = square(3, 3);
  const AssemblyContext ctx(m, QuadMode::inexact);
  const auto w = dense(assemble_mass(Space::W, ctx));
  const auto q = gll_quadrature(4);
  const double jac = m.dx() * m.dy() / 4.0;
  for (int r = 0; r < w.rows(); ++r)
    for (int c = 0; c < w.cols(); ++c)
      if (r != c) CHECK(w(r, c) == 0.0);
  // an interior node of element 0 carries w_1 * w_1 * J
  const int g = ctx.dofs().w_of(0)[LocalLayout{3}.w(1, 1)];
  CHECK(w(g, g) == doctest::Approx(q.weights[1] * q.weights[1] * jac).epsilon(1e-14));
}

TEST_CASE("integral of the unit Q field is the domain area") {
  for (int n : {1, 2, 3}) {
    const AssemblyContext ctx(square(n, 3), QuadMode::exact);
    const Field one = project_mimetic(Space::Q, ScalarFunction([](double, double) { return 1.0; }), ctx);
    const auto qm = assemble_mass(Space::Q, ctx);
    const auto qh = qm.apply(one.coeffs);
    double s = 0.0;
    for (std::size_t i = 0; i < qh.size(); ++i) s += one.coeffs[i] * qh[i];
    CHECK(s == doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-13));
  }
}

TEST_CASE("every operator matches the brute-force oracle in exact mode") {
  std::mt19937 rng(5);
  for (auto [n, p] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{1, 1}}) {
    Mesh m = square(n, p);
    m.ly = 5.0;  // non-square elements
    m.x0 = 0.4;
    const AssemblyContext ctx(m, QuadMode::exact);
    const auto nodes = gll_nodes(p);
    const oracle::BruteForce bf(m, ctx.dofs(), std::vector<double>(nodes.begin(), nodes.end()), 12);
    CHECK(rel(dense(assemble_mass(Space::W, ctx)), bf.matrix(oracle::Kind::W)) < 1e-12);
    CHECK(rel(dense(assemble_mass(Space::U, ctx)), bf.matrix(oracle::Kind::U)) < 1e-12);
    CHECK(rel(dense(assemble_mass(Space::Q, ctx)), bf.matrix(oracle::Kind::Q)) < 1e-12);
    const Field w = random_field(Space::W, ctx.dofs(), rng);
    const Field q = random_field(Space::Q, ctx.dofs(), rng, 0.5, 1.5);
    const Field u = random_field(Space::U, ctx.dofs(), rng);
    CHECK(rel(dense(assemble_coupling(Coupling::Uq, ctx, w)), bf.matrix(oracle::Kind::Uq, w.coeffs)) < 1e-12);
    CHECK(rel(dense(assemble_coupling(Coupling::Uf, ctx, w)), bf.matrix(oracle::Kind::Uf, w.coeffs)) < 1e-12);
    CHECK(rel(dense(assemble_coupling(Coupling::Uh, ctx, q)), bf.matrix(oracle::Kind::Uh, q.coeffs)) < 1e-12);
    CHECK(rel(dense(assemble_coupling(Coupling::Wh, ctx, q)), bf.matrix(oracle::Kind::Wh, q.coeffs)) < 1e-12);
    CHECK(rel(dense(assemble_coupling(Coupling::Wq, ctx, w)), bf.matrix(oracle::Kind::Wq, w.coeffs)) < 1e-12);
    CHECK(rel(dense(assemble_coupling(Coupling::Uu, ctx, u)), bf.matrix(oracle::Kind::Uu, u.coeffs)) < 1e-12);
    CHECK(rel(dense(assemble_coupling(Coupling::Qw, ctx)), bf.matrix(oracle::Kind::Qw)) < 1e-12);
  }
}

TEST_CASE("exact mode does not change with two extra points") {
  std::mt19937 rng(9);
  const Mesh m = square(2, 3);
  const AssemblyContext a(m, QuadMode::exact);
  const AssemblyContext b(m, QuadMode::exact, Exec::parallel, quadrature_points(QuadMode::exact, 3) + 2);
  const Field w = random_field(Space::W, a.dofs(), rng);
  const Field q = random_field(Space::Q, a.dofs(), rng);
  const Field u = random_field(Space::U, a.dofs(), rng);
  for (Space s : {Space::W, Space::U, Space::Q})
    CHECK(rel(dense(assemble_mass(s, a)), dense(assemble_mass(s, b))) < 1e-13);
  CHECK(rel(dense(assemble_coupling(Coupling::Uq, a, w)), dense(assemble_coupling(Coupling::Uq, b, w))) < 1e-13);
  CHECK(rel(dense(assemble_coupling(Coupling::Uh, a, q)), dense(assemble_coupling(Coupling::Uh, b, q))) < 1e-13);
  CHECK(rel(dense(assemble_coupling(Coupling::Uu, a, u)), dense(assemble_coupling(Coupling::Uu, b, u))) < 1e-13);
  CHECK(rel(dense(assemble_coupling(Coupling::Wh, a, q)), dense(assemble_coupling(Coupling::Wh, b, q))) < 1e-13);
}

TEST_CASE("coupling identities") {
  std::mt19937 rng(21);
  for (QuadMode mode : {QuadMode::exact, QuadMode::inexact}) {
    const AssemblyContext ctx(square(3, 2), mode);
    const auto& d = ctx.dofs();
    SUBCASE("U^q with q = 0 vanishes, and is skew otherwise") {
      const auto z = assemble_coupling(Coupling::Uq, ctx, Field::zeros(Space::W, d));
      CHECK(z.max_abs() == 0.0);
      const auto uq = assemble_coupling(Coupling::Uq, ctx, random_field(Space::W, d, rng));
      CHECK(uq.symmetry() == Symmetry::skew);
      CHECK(uq.symmetry_defect(Symmetry::skew) < 1e-14);
    }
    SUBCASE("U^h with h = 1 is the U mass") {
      const Field one = project_mimetic(Space::Q, ScalarFunction([](double, double) { return 1.0; }), ctx);
      CHECK(rel(dense(assemble_coupling(Coupling::Uh, ctx, one)), dense(assemble_mass(Space::U, ctx))) < 1e-13);
      CHECK(rel(dense(assemble_coupling(Coupling::Wh, ctx, one)), dense(assemble_mass(Space::W, ctx))) < 1e-13);
    }
    SUBCASE("W^q h = W^h q") {
      const Field q = random_field(Space::W, d, rng);
      const Field h = random_field(Space::Q, d, rng);
      const auto a = assemble_coupling(Coupling::Wq, ctx, q).apply(h.coeffs);
      const auto b = assemble_coupling(Coupling::Wh, ctx, h).apply(q.coeffs);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-13);
    }
    SUBCASE("Q^W is the transpose pattern of W^q with q = 1") {
      const auto qw = dense(assemble_coupling(Coupling::Qw, ctx));
      const auto wq = dense(assemble_coupling(Coupling::Wq, ctx, Field::constant(Space::W, d, 1.0)));
      CHECK(rel(qw.transpose(), wq) < 1e-13);
    }
  }
}

TEST_CASE("divergence and rot adjoint identities") {
  // <div u_h, s_h> = s^T Q E21 u and <rot z_h, u_h> = (E10 z)^T U u, with the
  // left sides integrated directly from basis derivatives.
  std::mt19937 rng(33);
  const Mesh m = square(2, 3);
  const AssemblyContext ctx(m, QuadMode::exact);
  const auto& d = ctx.dofs();
  const auto inc = build_incidence(m, d);
  const Field u = random_field(Space::U, d, rng);
  const Field s = random_field(Space::Q, d, rng);
  const Field z = random_field(Space::W, d, rng);
  const Basis1D& b = ctx.basis();
  const int p = m.p;
  const LocalLayout L{p};
  const auto& r = ctx.rule();
  const int n = r.size();
  double lhs_div = 0.0, lhs_rot = 0.0;
  std::vector<double> sv(ctx.n_qp()), vx(ctx.n_qp()), vy(ctx.n_qp());
  for (int e = 0; e < m.elements(); ++e) {
    ctx.eval_scalar(s, e, sv);
    ctx.eval_vector(u, e, vx, vy);
    const auto um = d.u_of(e);
    const auto wm = d.w_of(e);
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        const double xi = r.points[a], eta = r.points[c];
        double div = 0.0;
        for (int i = 0; i <= p; ++i)
          for (int j = 1; j <= p; ++j) {
            div += u.coeffs[um[L.ux(i, j)]] * b.lagrange_deriv(i, xi) * b.edge(j, eta) * 4.0 / (m.dx() * m.dy());
            div += u.coeffs[um[L.uy(j, i)]] * b.edge(j, xi) * b.lagrange_deriv(i, eta) * 4.0 / (m.dx() * m.dy());
          }
        double zx = 0.0, zy = 0.0;
        for (int i = 0; i <= p; ++i)
          for (int j = 0; j <= p; ++j) {
            zx += z.coeffs[wm[L.w(i, j)]] * b.lagrange_deriv(i, xi) * b.lagrange(j, eta) * 2.0 / m.dx();
            zy += z.coeffs[wm[L.w(i, j)]] * b.lagrange(i, xi) * b.lagrange_deriv(j, eta) * 2.0 / m.dy();
          }
        const double w = ctx.weights()[a * n + c];
        lhs_div += w * div * sv[a * n + c];
        lhs_rot += w * (-zy * vx[a * n + c] + zx * vy[a * n + c]);
      }
  }
  const auto qd = assemble_mass(Space::Q, ctx).apply(inc.e21.apply(u.coeffs));
  const auto ez = inc.e10.apply(z.coeffs);
  const auto uu = assemble_mass(Space::U, ctx).apply(u.coeffs);
  double rhs_div = 0.0, rhs_rot = 0.0;
  for (int i = 0; i < d.dQ; ++i) rhs_div += s.coeffs[i] * qd[i];
  for (int i = 0; i < d.dU; ++i) rhs_rot += ez[i] * uu[i];
  CHECK(lhs_div == doctest::Approx(rhs_div).epsilon(1e-11));
  CHECK(lhs_rot == doctest::Approx(rhs_rot).epsilon(1e-11));
}

TEST_CASE("projection") {
  const AssemblyContext ctx(square(3, 3), QuadMode::exact);
  const auto& d = ctx.dofs();
  SUBCASE("constants") {
    const Field w = project_mimetic(Space::W, ScalarFunction([](double, double) { return 2.5; }), ctx);
    for (double v : w.coeffs) CHECK(v == doctest::Approx(2.5));
    const Field q = project_mimetic(Space::Q, ScalarFunction([](double, double) { return 1.0; }), ctx);
    double s = 0.0;
    for (double v : q.coeffs) s += v;
    CHECK(s == doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-13));
  }
  SUBCASE("rot commutes with projection") {
    auto psi = [](double x, double y) { return std::sin(x) * std::cos(2.0 * y) + 0.3 * std::cos(x + y); };
    auto rot = [](double x, double y) -> std::array<double, 2> {
      return {2.0 * std::sin(x) * std::sin(2.0 * y) + 0.3 * std::sin(x + y),
              std::cos(x) * std::cos(2.0 * y) - 0.3 * std::sin(x + y)};
    };
    const Field pw = project_mimetic(Space::W, ScalarFunction(psi), ctx);
    const Field pu = project_mimetic(Space::U, VectorFunction(rot), ctx);
    const auto e = build_incidence(ctx.mesh(), d).e10.apply(pw.coeffs);
    for (int i = 0; i < d.dU; ++i) CHECK(std::abs(e[i] - pu.coeffs[i]) < 1e-12);
  }
  SUBCASE("fields inside every space reproduce themselves") {
    // products of periodic tent functions with kinks on element boundaries
    // are continuous and lie in W, U (both components) and Q for p >= 2
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Mesh& m = ctx.mesh();
    auto tent = [&](const std::vector<double>& v, double t, double h) {
      const double s = t / h;
      const int k = static_cast<int>(std::floor(s));
      const double r = s - k;
      const int n = static_cast<int>(v.size());
      return (1.0 - r) * v[((k % n) + n) % n] + r * v[(((k + 1) % n) + n) % n];
    };
    std::vector<double> ax(m.nx), ay(m.ny), bx(m.nx), by(m.ny);
    for (auto* v : {&ax, &ay, &bx, &by})
      for (double& c : *v) c = u(rng);
    auto f = [&](double x, double y) { return tent(ax, x, m.dx()) * tent(ay, y, m.dy()); };
    auto g = [&](double x, double y) -> std::array<double, 2> {
      return {f(x, y), tent(bx, x, m.dx()) * tent(by, y, m.dy())};
    };
    for (Space s : {Space::W, Space::Q}) {
      const Field a = project_mimetic(s, ScalarFunction(f), ctx);
      const Field b = project_mimetic(s, ScalarFunction([&](double x, double y) { return evaluate_scalar(a, ctx, x, y); }), ctx);
      for (int i = 0; i < a.size(); ++i) CHECK(std::abs(a.coeffs[i] - b.coeffs[i]) < 1e-12);
    }
    const Field a = project_mimetic(Space::U, VectorFunction(g), ctx);
    const Field b = project_mimetic(Space::U, VectorFunction([&](double x, double y) { return evaluate_vector(a, ctx, x, y); }), ctx);
    for (int i = 0; i < a.size(); ++i) CHECK(std::abs(a.coeffs[i] - b.coeffs[i]) < 1e-12);
  }
  SUBCASE("wrong space") {
    CHECK_THROWS_AS(project_mimetic(Space::U, ScalarFunction([](double, double) { return 0.0; }), ctx), SpaceMismatch);
    CHECK_THROWS_AS(project_mimetic(Space::W, VectorFunction([](double, double) { return std::array<double, 2>{}; }), ctx),
                    SpaceMismatch);
    CHECK_THROWS_AS(assemble_coupling(Coupling::Uq, ctx, Field::zeros(Space::Q, d)), SpaceMismatch);
    CHECK_THROWS_AS(evaluate_vector(Field::zeros(Space::W, d), ctx, 0.0, 0.0), SpaceMismatch);
  }
}

TEST_CASE("locate wraps periodically") {
  Mesh m = square(4, 2, 8.0);
  m.x0 = -4.0;
  m.y0 = -4.0;
  const auto a = locate(m, -4.0, -4.0);
  CHECK(a.element == 0);
  CHECK(a.xi == doctest::Approx(-1.0));
  const auto b = locate(m, 4.0 + 1.0, -1.0);  // x wraps to -3
  CHECK(b.element == m.element(0, 1));
  CHECK(b.xi == doctest::Approx(0.0));
  CHECK(b.eta == doctest::Approx(0.0));
}

TEST_CASE("serial and parallel assembly are bitwise equal") {
  std::mt19937 rng(4);
  AssemblyContext ctx(square(4, 3), QuadMode::exact);
  const Field w = random_field(Space::W, ctx.dofs(), rng);
  ctx.set_exec(Exec::serial);
  const auto a = assemble_coupling(Coupling::Uq, ctx, w);
  const auto ma = assemble_mass(Space::U, ctx);
  ctx.set_exec(Exec::parallel);
  const auto b = assemble_coupling(Coupling::Uq, ctx, w);
  const auto mb = assemble_mass(Space::U, ctx);
  CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  CHECK(std::equal(ma.values().begin(), ma.values().end(), mb.values().begin()));
}
