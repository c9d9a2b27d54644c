#include "mswe/checks.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mswe/assembly.hpp"
#include "mswe/swe.hpp"
#include "mswe/topology.hpp"

namespace mswe {

std::vector<CheckResult> topology_checks(int max_p, int max_n) {
  bool complex_ok = true, telescoping_ok = true, kernel_ok = true;
  std::ostringstream bad;
  int meshes = 0;
  for (int p = 1; p <= max_p; ++p)
    for (int nx = 1; nx <= max_n; ++nx)
      for (int ny = 1; ny <= max_n; ++ny) {
        const Mesh m{nx, ny, 1.0, 1.0, 0.0, 0.0, p};
        const DofMap d = build_dof_map(m);
        const IncidenceMatrices inc = build_incidence(m, d);
        ++meshes;
        if (!(inc.e21 * inc.e10).is_zero()) {
          complex_ok = false;
          bad << " E21*E10!=0 at p=" << p << " " << nx << "x" << ny << ";";
        }
        const auto cols = inc.e21.column_sums();
        if (std::any_of(cols.begin(), cols.end(), [](long long v) { return v != 0; })) {
          telescoping_ok = false;
          bad << " 1^T E21!=0 at p=" << p << " " << nx << "x" << ny << ";";
        }
        const auto rows = inc.e10.row_sums();
        if (std::any_of(rows.begin(), rows.end(), [](long long v) { return v != 0; })) {
          kernel_ok = false;
          bad << " E10 1!=0 at p=" << p << " " << nx << "x" << ny << ";";
        }
      }
  const std::string where = std::to_string(meshes) + " meshes" + bad.str();
  return {{"E21 E10 = 0", complex_ok, where},
          {"1^T E21 = 0", telescoping_ok, where},
          {"E10 1 = 0", kernel_ok, where}};
}

namespace {

double min_eigenvalue(const SparseOperator& a) {
  const int n = a.rows();
  const auto d = a.to_dense();
  Eigen::MatrixXd m = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(d.data(), n, n);
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

std::vector<CheckResult> symmetry_checks(std::uint64_t seed, int n_states) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double tol = 1e-12;

  struct Tally {
    std::string name;
    bool ok = true;
    double worst = 0.0;
  };
  Tally uq{"U^q skew-symmetric"}, uf{"U^f skew-symmetric"}, uh{"U^h symmetric positive definite"},
      wh{"W^h symmetric positive definite"}, mass{"U, Q, W symmetric positive definite"},
      energy{"F^T U^q F = 0"};

  for (int k = 0; k < n_states; ++k) {
    const QuadMode mode = k % 2 == 0 ? QuadMode::exact : QuadMode::inexact;
    const Mesh m{2 + k % 2, 2, 1.0 + 0.1 * k, 1.0, 0.0, 0.0, 2 + k % 3};
    const AssemblyContext ctx(m, mode);
    const DofMap& d = ctx.dofs();
    auto random_field = [&](Space s, double base, double amp) {
      Field f = Field::zeros(s, d);
      for (double& v : f.coeffs) v = base + amp * unif(rng);
      return f;
    };
    const Field q = random_field(Space::W, 0.0, 1.0);
    const Field f = random_field(Space::W, 1.0, 0.5);
    // smooth positive depth with random phases
    const double a = 2.0 + unif(rng), b = 3.0 * unif(rng), c = 2.0 + unif(rng), e = 3.0 * unif(rng);
    const Field h = project_mimetic(
        Space::Q, ScalarFunction([=](double x, double y) { return 1.0 + 0.3 * std::sin(a * x + b) * std::cos(c * y + e); }),
        ctx);

    const SparseOperator a_uq = assemble_coupling(Coupling::Uq, ctx, q);
    const SparseOperator a_uf = assemble_coupling(Coupling::Uf, ctx, f);
    const SparseOperator a_uh = assemble_coupling(Coupling::Uh, ctx, h);
    const SparseOperator a_wh = assemble_coupling(Coupling::Wh, ctx, h);

    auto skew = [&](Tally& t, const SparseOperator& a) {
      const double defect = a.symmetry_defect(Symmetry::skew);
      t.worst = std::max(t.worst, defect);
      t.ok = t.ok && defect < tol;
    };
    auto spd = [&](Tally& t, const SparseOperator& a) {
      const double defect = a.symmetry_defect(Symmetry::symmetric);
      const double lmin = min_eigenvalue(a);
      t.worst = std::max(t.worst, defect);
      t.ok = t.ok && defect < tol && lmin > 0.0;
    };
    skew(uq, a_uq);
    skew(uf, a_uf);
    spd(uh, a_uh);
    spd(wh, a_wh);
    for (Space s : {Space::U, Space::Q, Space::W}) spd(mass, assemble_mass(s, ctx));

    // F^T U^q F with F a random flux
    const Field F = random_field(Space::U, 0.0, 1.0);
    const auto uqf = a_uq.apply(F.coeffs);
    double dot = 0.0, ff = 0.0;
    for (std::size_t i = 0; i < uqf.size(); ++i) {
      dot += F.coeffs[i] * uqf[i];
      ff += F.coeffs[i] * F.coeffs[i];
    }
    const double rel = std::abs(dot) / (ff * a_uq.max_abs());
    energy.worst = std::max(energy.worst, rel);
    energy.ok = energy.ok && rel < tol;
  }

  std::vector<CheckResult> out;
  for (const Tally* t : {&uq, &uf, &uh, &wh, &mass, &energy}) {
    std::ostringstream s;
    s << n_states << " states, worst relative defect " << t->worst;
    out.push_back({t->name, t->ok, s.str()});
  }
  return out;
}

std::vector<CheckResult> invariant_suite(std::uint64_t seed) {
  auto out = topology_checks();
  const auto sym = symmetry_checks(seed);
  out.insert(out.end(), sym.begin(), sym.end());
  return out;
}

}  // namespace mswe
