#include "mswe/assembly.hpp"

#include <cmath>
#include <string>

#include "mswe/error.hpp"

namespace mswe {

void require_space(const Field& f, Space expected, const char* what) {
  if (f.space != expected)
    throw SpaceMismatch(std::string(what) + ": expected a field in " + space_name(expected) + ", got " +
                        space_name(f.space));
}

int quadrature_points(QuadMode mode, int p) {
  if (p < 1) throw InvalidArgument("quadrature_points: degree must be >= 1");
  return mode == QuadMode::exact ? (3 * p + 4) / 2 : p + 1;
}

namespace {

int pattern_index(Space r, Space c) { return 3 * static_cast<int>(r) + static_cast<int>(c); }

// Points per direction for projecting analytic functions onto edge/cell DOFs.
constexpr int kProjectionPoints = 16;

}  // namespace

AssemblyContext::AssemblyContext(const Mesh& mesh, QuadMode mode, Exec exec, int points_per_dir)
    : mesh_(mesh),
      dofs_(build_dof_map(mesh)),
      basis_(mesh.p),
      mode_(mode),
      rule_(gll_quadrature(points_per_dir > 0 ? points_per_dir : quadrature_points(mode, mesh.p))),
      exec_(exec),
      jac_(0.25 * mesh.dx() * mesh.dy()) {
  const int p = mesh_.p;
  const int n = rule_.size();
  const int nqp = n * n;
  const LocalLayout l{p};

  weights_.resize(nqp);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) weights_[a * n + b] = rule_.weights[a] * rule_.weights[b] * jac_;

  std::vector<double> lag(static_cast<std::size_t>(p + 1) * n), edg(static_cast<std::size_t>(p) * n);
  for (int a = 0; a < n; ++a) {
    std::vector<double> tmp(p + 1);
    basis_.lagrange_all(rule_.points[a], tmp);
    for (int i = 0; i <= p; ++i) lag[i * n + a] = tmp[i];
    basis_.edge_all(rule_.points[a], std::span<double>(tmp.data(), p));
    for (int i = 0; i < p; ++i) edg[i * n + a] = tmp[i];
  }
  auto L = [&](int i, int a) { return lag[i * n + a]; };
  auto E = [&](int i, int a) { return edg[(i - 1) * n + a]; };

  const double sx = 2.0 / mesh_.dy();  // x-flux functions carry 1/(dy/2)
  const double sy = 2.0 / mesh_.dx();
  const double sq = 1.0 / jac_;
  w_tab_.assign(static_cast<std::size_t>(l.nw()) * nqp, 0.0);
  ux_tab_.assign(static_cast<std::size_t>(l.nux()) * nqp, 0.0);
  uy_tab_.assign(static_cast<std::size_t>(l.nux()) * nqp, 0.0);
  q_tab_.assign(static_cast<std::size_t>(l.nq()) * nqp, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int qp = a * n + b;
      for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= p; ++j) w_tab_[l.w(i, j) * nqp + qp] = L(i, a) * L(j, b);
      for (int i = 0; i <= p; ++i)
        for (int j = 1; j <= p; ++j) ux_tab_[l.ux(i, j) * nqp + qp] = sx * L(i, a) * E(j, b);
      for (int i = 1; i <= p; ++i)
        for (int j = 0; j <= p; ++j) uy_tab_[(l.uy(i, j) - l.nux()) * nqp + qp] = sy * E(i, a) * L(j, b);
      for (int i = 1; i <= p; ++i)
        for (int j = 1; j <= p; ++j) q_tab_[l.q(i, j) * nqp + qp] = sq * E(i, a) * E(j, b);
    }

  patterns_.resize(9);
  const int ne = mesh_.elements();
  auto build = [&](Space r, Space c) {
    patterns_[pattern_index(r, c)] =
        SparsityPattern::build(dofs_.global_size(r), dofs_.global_size(c), r == Space::W ? dofs_.w : r == Space::U ? dofs_.u : dofs_.q,
                               dofs_.local_size(r), c == Space::W ? dofs_.w : c == Space::U ? dofs_.u : dofs_.q,
                               dofs_.local_size(c), ne);
  };
  build(Space::W, Space::W);
  build(Space::U, Space::U);
  build(Space::Q, Space::Q);
  build(Space::Q, Space::U);
  build(Space::W, Space::Q);
  build(Space::Q, Space::W);
}

const SparsityPattern& AssemblyContext::pattern(Space rows, Space cols) const {
  const auto& pat = patterns_[pattern_index(rows, cols)];
  if (pat.row_ptr.empty())
    throw InvalidArgument(std::string("no sparsity pattern for ") + space_name(rows) + "x" + space_name(cols));
  return pat;
}

std::array<double, 2> AssemblyContext::qp_coords(int e, int qp) const {
  const int n = rule_.size();
  const int ex = e % mesh_.nx;
  const int ey = e / mesh_.nx;
  const double xi = rule_.points[qp / n];
  const double eta = rule_.points[qp % n];
  return {mesh_.x0 + (ex + 0.5 * (xi + 1.0)) * mesh_.dx(), mesh_.y0 + (ey + 0.5 * (eta + 1.0)) * mesh_.dy()};
}

void AssemblyContext::eval_scalar(const Field& f, int e, std::span<double> out) const {
  if (f.space == Space::U) throw SpaceMismatch("eval_scalar: U fields are vector valued");
  const auto& tab = f.space == Space::W ? w_tab_ : q_tab_;
  const auto g = dofs_.of(f.space, e);
  const int nqp = n_qp();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double c = f.coeffs[g[k]];
    const double* r = tab.data() + k * nqp;
    for (int q = 0; q < nqp; ++q) out[q] += c * r[q];
  }
}

void AssemblyContext::eval_vector(const Field& f, int e, std::span<double> vx, std::span<double> vy) const {
  require_space(f, Space::U, "eval_vector");
  const auto g = dofs_.u_of(e);
  const int nqp = n_qp();
  const int nux = LocalLayout{mesh_.p}.nux();
  std::fill(vx.begin(), vx.end(), 0.0);
  std::fill(vy.begin(), vy.end(), 0.0);
  for (int k = 0; k < nux; ++k) {
    const double cx = f.coeffs[g[k]];
    const double cy = f.coeffs[g[nux + k]];
    const double* rx = ux_tab_.data() + static_cast<std::size_t>(k) * nqp;
    const double* ry = uy_tab_.data() + static_cast<std::size_t>(k) * nqp;
    for (int q = 0; q < nqp; ++q) {
      vx[q] += cx * rx[q];
      vy[q] += cy * ry[q];
    }
  }
}

namespace {

// out[(r0 + i) * ld + c0 + j] += sign * sum_q wt[q] a_i[q] b_j[q]
void gram(std::span<const double> a, int na, std::span<const double> b, int nb, std::span<const double> wt,
          double sign, std::span<double> out, int ld, int r0, int c0) {
  const int nqp = static_cast<int>(wt.size());
  std::vector<double> aw(static_cast<std::size_t>(na) * nqp);
  for (int i = 0; i < na; ++i)
    for (int q = 0; q < nqp; ++q) aw[i * nqp + q] = sign * wt[q] * a[static_cast<std::size_t>(i) * nqp + q];
  for (int i = 0; i < na; ++i) {
    const double* ai = aw.data() + static_cast<std::size_t>(i) * nqp;
    for (int j = 0; j < nb; ++j) {
      const double* bj = b.data() + static_cast<std::size_t>(j) * nqp;
      double s = 0.0;
      for (int q = 0; q < nqp; ++q) s += ai[q] * bj[q];
      out[static_cast<std::size_t>(r0 + i) * ld + c0 + j] += s;
    }
  }
}

std::vector<double> scaled_weights(const AssemblyContext& ctx, std::span<const double> c) {
  std::vector<double> w(ctx.weights().begin(), ctx.weights().end());
  for (std::size_t q = 0; q < w.size(); ++q) w[q] *= c[q];
  return w;
}

// Local U x U matrix of <c e_j, e_i>.
void u_weighted(const AssemblyContext& ctx, std::span<const double> wt, std::span<double> out) {
  const LocalLayout l{ctx.mesh().p};
  std::fill(out.begin(), out.end(), 0.0);
  gram(ctx.ux_table(), l.nux(), ctx.ux_table(), l.nux(), wt, 1.0, out, l.nu(), 0, 0);
  gram(ctx.uy_table(), l.nux(), ctx.uy_table(), l.nux(), wt, 1.0, out, l.nu(), l.nux(), l.nux());
}

// Local U x U matrix of <c k x e_j, e_i>; k x (a, b) = (-b, a).
void u_rotational(const AssemblyContext& ctx, std::span<const double> wt, std::span<double> out) {
  const LocalLayout l{ctx.mesh().p};
  std::fill(out.begin(), out.end(), 0.0);
  gram(ctx.ux_table(), l.nux(), ctx.uy_table(), l.nux(), wt, -1.0, out, l.nu(), 0, l.nux());
  gram(ctx.uy_table(), l.nux(), ctx.ux_table(), l.nux(), wt, 1.0, out, l.nu(), l.nux(), 0);
}

}  // namespace

SparseOperator assemble_mass(Space space, const AssemblyContext& ctx) {
  const auto& pat = ctx.pattern(space, space);
  const LocalLayout l{ctx.mesh().p};
  const auto wt = ctx.weights();
  return assemble(pat, Symmetry::symmetric, ctx.exec(), [&](int, std::span<double> out) {
    switch (space) {
      case Space::W:
        std::fill(out.begin(), out.end(), 0.0);
        gram(ctx.w_table(), l.nw(), ctx.w_table(), l.nw(), wt, 1.0, out, l.nw(), 0, 0);
        break;
      case Space::U:
        u_weighted(ctx, wt, out);
        break;
      case Space::Q:
        std::fill(out.begin(), out.end(), 0.0);
        gram(ctx.q_table(), l.nq(), ctx.q_table(), l.nq(), wt, 1.0, out, l.nq(), 0, 0);
        break;
    }
  });
}

const char* coupling_name(Coupling kind) {
  switch (kind) {
    case Coupling::Uq: return "Uq";
    case Coupling::Uh: return "Uh";
    case Coupling::Uu: return "Uu";
    case Coupling::Wh: return "Wh";
    case Coupling::Wq: return "Wq";
    case Coupling::Qw: return "Qw";
    case Coupling::Uf: return "Uf";
  }
  return "?";
}

Space coupling_coefficient_space(Coupling kind) {
  switch (kind) {
    case Coupling::Uq:
    case Coupling::Uf:
    case Coupling::Wq: return Space::W;
    case Coupling::Uh:
    case Coupling::Wh: return Space::Q;
    case Coupling::Uu: return Space::U;
    case Coupling::Qw: break;
  }
  throw InvalidArgument("coupling Qw has no coefficient field");
}

SparseOperator assemble_coupling(Coupling kind, const AssemblyContext& ctx, const Field& coeff) {
  if (kind == Coupling::Qw) return assemble_coupling(kind, ctx);
  require_space(coeff, coupling_coefficient_space(kind), coupling_name(kind));
  const LocalLayout l{ctx.mesh().p};
  const int nqp = ctx.n_qp();

  switch (kind) {
    case Coupling::Uq:
    case Coupling::Uf:
      return assemble(ctx.pattern(Space::U, Space::U), Symmetry::skew, ctx.exec(), [&](int e, std::span<double> out) {
        std::vector<double> c(nqp);
        ctx.eval_scalar(coeff, e, c);
        u_rotational(ctx, scaled_weights(ctx, c), out);
      });
    case Coupling::Uh:
      return assemble(ctx.pattern(Space::U, Space::U), Symmetry::symmetric, ctx.exec(),
                      [&](int e, std::span<double> out) {
                        std::vector<double> c(nqp);
                        ctx.eval_scalar(coeff, e, c);
                        u_weighted(ctx, scaled_weights(ctx, c), out);
                      });
    case Coupling::Wh:
      return assemble(ctx.pattern(Space::W, Space::W), Symmetry::symmetric, ctx.exec(),
                      [&](int e, std::span<double> out) {
                        std::vector<double> c(nqp);
                        ctx.eval_scalar(coeff, e, c);
                        std::fill(out.begin(), out.end(), 0.0);
                        gram(ctx.w_table(), l.nw(), ctx.w_table(), l.nw(), scaled_weights(ctx, c), 1.0, out, l.nw(), 0, 0);
                      });
    case Coupling::Wq:
      return assemble(ctx.pattern(Space::W, Space::Q), Symmetry::none, ctx.exec(), [&](int e, std::span<double> out) {
        std::vector<double> c(nqp);
        ctx.eval_scalar(coeff, e, c);
        std::fill(out.begin(), out.end(), 0.0);
        gram(ctx.w_table(), l.nw(), ctx.q_table(), l.nq(), scaled_weights(ctx, c), 1.0, out, l.nq(), 0, 0);
      });
    case Coupling::Uu:
      return assemble(ctx.pattern(Space::Q, Space::U), Symmetry::none, ctx.exec(), [&](int e, std::span<double> out) {
        std::vector<double> vx(nqp), vy(nqp);
        ctx.eval_vector(coeff, e, vx, vy);
        std::fill(out.begin(), out.end(), 0.0);
        gram(ctx.q_table(), l.nq(), ctx.ux_table(), l.nux(), scaled_weights(ctx, vx), 1.0, out, l.nu(), 0, 0);
        gram(ctx.q_table(), l.nq(), ctx.uy_table(), l.nux(), scaled_weights(ctx, vy), 1.0, out, l.nu(), 0, l.nux());
      });
    case Coupling::Qw: break;
  }
  throw InvalidArgument("assemble_coupling: unknown kind");
}

SparseOperator assemble_coupling(Coupling kind, const AssemblyContext& ctx) {
  if (kind != Coupling::Qw)
    throw SpaceMismatch(std::string("assemble_coupling: ") + coupling_name(kind) + " needs a coefficient field");
  const LocalLayout l{ctx.mesh().p};
  return assemble(ctx.pattern(Space::Q, Space::W), Symmetry::none, ctx.exec(), [&](int, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    gram(ctx.q_table(), l.nq(), ctx.w_table(), l.nw(), ctx.weights(), 1.0, out, l.nw(), 0, 0);
  });
}

std::vector<double> assemble_w_load(const AssemblyContext& ctx,
                                    const std::function<void(int, std::span<double>)>& integrand) {
  const LocalLayout l{ctx.mesh().p};
  const int ne = ctx.mesh().elements();
  const int nqp = ctx.n_qp();
  const int nw = l.nw();
  const auto wt = ctx.weights();
  const auto tab = ctx.w_table();
  std::vector<double> local(static_cast<std::size_t>(ne) * nw);
  for_each_index(ne, ctx.exec(), [&](int e) {
    std::vector<double> s(nqp);
    integrand(e, s);
    for (int q = 0; q < nqp; ++q) s[q] *= wt[q];
    for (int i = 0; i < nw; ++i) {
      double acc = 0.0;
      for (int q = 0; q < nqp; ++q) acc += tab[static_cast<std::size_t>(i) * nqp + q] * s[q];
      local[static_cast<std::size_t>(e) * nw + i] = acc;
    }
  });
  std::vector<double> b(ctx.dofs().dW, 0.0);
  for (int e = 0; e < ne; ++e) {
    const auto g = ctx.dofs().w_of(e);
    for (int i = 0; i < nw; ++i) b[g[i]] += local[static_cast<std::size_t>(e) * nw + i];
  }
  return b;
}

Field project_mimetic(Space space, const ScalarFunction& fn, const AssemblyContext& ctx) {
  if (space == Space::U) throw SpaceMismatch("project_mimetic: U needs a vector-valued function");
  const Mesh& m = ctx.mesh();
  const DofMap& d = ctx.dofs();
  const auto nodes = ctx.basis().nodes();
  const LocalLayout l{m.p};
  Field f = Field::zeros(space, d);
  auto x_of = [&](int ex, double xi) { return m.x0 + (ex + 0.5 * (xi + 1.0)) * m.dx(); };
  auto y_of = [&](int ey, double eta) { return m.y0 + (ey + 0.5 * (eta + 1.0)) * m.dy(); };

  if (space == Space::W) {
    for (int ey = 0; ey < m.ny; ++ey)
      for (int ex = 0; ex < m.nx; ++ex) {
        const auto g = d.w_of(m.element(ex, ey));
        for (int i = 0; i < m.p; ++i)
          for (int j = 0; j < m.p; ++j) f.coeffs[g[l.w(i, j)]] = fn(x_of(ex, nodes[i]), y_of(ey, nodes[j]));
      }
    return f;
  }

  const QuadRule r = gll_quadrature(kProjectionPoints);
  const int ne = m.elements();
  for_each_index(ne, ctx.exec(), [&](int e) {
    const int ex = e % m.nx;
    const int ey = e / m.nx;
    const auto g = d.q_of(e);
    for (int i = 1; i <= m.p; ++i)
      for (int j = 1; j <= m.p; ++j) {
        const double xa = x_of(ex, nodes[i - 1]), xb = x_of(ex, nodes[i]);
        const double ya = y_of(ey, nodes[j - 1]), yb = y_of(ey, nodes[j]);
        double s = 0.0;
        for (int a = 0; a < r.size(); ++a)
          for (int b = 0; b < r.size(); ++b) {
            const double x = 0.5 * (xa + xb) + 0.5 * (xb - xa) * r.points[a];
            const double y = 0.5 * (ya + yb) + 0.5 * (yb - ya) * r.points[b];
            s += r.weights[a] * r.weights[b] * fn(x, y);
          }
        f.coeffs[g[l.q(i, j)]] = s * 0.25 * (xb - xa) * (yb - ya);
      }
  });
  return f;
}

Field project_mimetic(Space space, const VectorFunction& fn, const AssemblyContext& ctx) {
  if (space != Space::U) throw SpaceMismatch("project_mimetic: vector-valued functions project onto U only");
  const Mesh& m = ctx.mesh();
  const DofMap& d = ctx.dofs();
  const auto nodes = ctx.basis().nodes();
  const LocalLayout l{m.p};
  const QuadRule r = gll_quadrature(kProjectionPoints);
  Field f = Field::zeros(Space::U, d);
  auto x_of = [&](int ex, double xi) { return m.x0 + (ex + 0.5 * (xi + 1.0)) * m.dx(); };
  auto y_of = [&](int ey, double eta) { return m.y0 + (ey + 0.5 * (eta + 1.0)) * m.dy(); };
  for_each_index(m.elements(), ctx.exec(), [&](int e) {
    const int ex = e % m.nx;
    const int ey = e / m.nx;
    const auto g = d.u_of(e);
    // owned edges only: x-flux on lines i < p, y-flux on lines j < p
    for (int i = 0; i < m.p; ++i)
      for (int j = 1; j <= m.p; ++j) {
        const double x = x_of(ex, nodes[i]);
        const double ya = y_of(ey, nodes[j - 1]), yb = y_of(ey, nodes[j]);
        const double s = r.integrate([&](double t) { return fn(x, 0.5 * (ya + yb) + 0.5 * (yb - ya) * t)[0]; });
        f.coeffs[g[l.ux(i, j)]] = 0.5 * (yb - ya) * s;
      }
    for (int i = 1; i <= m.p; ++i)
      for (int j = 0; j < m.p; ++j) {
        const double y = y_of(ey, nodes[j]);
        const double xa = x_of(ex, nodes[i - 1]), xb = x_of(ex, nodes[i]);
        const double s = r.integrate([&](double t) { return fn(0.5 * (xa + xb) + 0.5 * (xb - xa) * t, y)[1]; });
        f.coeffs[g[l.uy(i, j)]] = 0.5 * (xb - xa) * s;
      }
  });
  return f;
}

ReferencePoint locate(const Mesh& m, double x, double y) {
  const double sx = (x - m.x0) / m.dx();
  const double sy = (y - m.y0) / m.dy();
  const double fx = std::floor(sx);
  const double fy = std::floor(sy);
  const int ex = ((static_cast<int>(fx) % m.nx) + m.nx) % m.nx;
  const int ey = ((static_cast<int>(fy) % m.ny) + m.ny) % m.ny;
  return {m.element(ex, ey), 2.0 * (sx - fx) - 1.0, 2.0 * (sy - fy) - 1.0};
}

double evaluate_scalar(const Field& f, const AssemblyContext& ctx, const ReferencePoint& at) {
  const Mesh& m = ctx.mesh();
  const LocalLayout l{m.p};
  const auto g = ctx.dofs().of(f.space, at.element);
  double v = 0.0;
  if (f.space == Space::W) {
    std::vector<double> lx(m.p + 1), ly(m.p + 1);
    ctx.basis().lagrange_all(at.xi, lx);
    ctx.basis().lagrange_all(at.eta, ly);
    for (int i = 0; i <= m.p; ++i)
      for (int j = 0; j <= m.p; ++j) v += f.coeffs[g[l.w(i, j)]] * lx[i] * ly[j];
  } else if (f.space == Space::Q) {
    std::vector<double> ex(m.p), ey(m.p);
    ctx.basis().edge_all(at.xi, ex);
    ctx.basis().edge_all(at.eta, ey);
    for (int i = 1; i <= m.p; ++i)
      for (int j = 1; j <= m.p; ++j) v += f.coeffs[g[l.q(i, j)]] * ex[i - 1] * ey[j - 1];
    v /= ctx.jacobian();
  } else {
    throw SpaceMismatch("evaluate_scalar: U fields are vector valued");
  }
  return v;
}

std::array<double, 2> evaluate_vector(const Field& f, const AssemblyContext& ctx, const ReferencePoint& at) {
  require_space(f, Space::U, "evaluate_vector");
  const Mesh& m = ctx.mesh();
  const LocalLayout l{m.p};
  const auto g = ctx.dofs().u_of(at.element);
  std::vector<double> lx(m.p + 1), ly(m.p + 1), ex(m.p), ey(m.p);
  ctx.basis().lagrange_all(at.xi, lx);
  ctx.basis().lagrange_all(at.eta, ly);
  ctx.basis().edge_all(at.xi, ex);
  ctx.basis().edge_all(at.eta, ey);
  double vx = 0.0, vy = 0.0;
  for (int i = 0; i <= m.p; ++i)
    for (int j = 1; j <= m.p; ++j) vx += f.coeffs[g[l.ux(i, j)]] * lx[i] * ey[j - 1];
  for (int i = 1; i <= m.p; ++i)
    for (int j = 0; j <= m.p; ++j) vy += f.coeffs[g[l.uy(i, j)]] * ex[i - 1] * ly[j];
  return {vx * 2.0 / m.dy(), vy * 2.0 / m.dx()};
}

double evaluate_scalar(const Field& f, const AssemblyContext& ctx, double x, double y) {
  return evaluate_scalar(f, ctx, locate(ctx.mesh(), x, y));
}

std::array<double, 2> evaluate_vector(const Field& f, const AssemblyContext& ctx, double x, double y) {
  return evaluate_vector(f, ctx, locate(ctx.mesh(), x, y));
}

}  // namespace mswe
