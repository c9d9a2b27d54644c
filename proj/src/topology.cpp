#include "mswe/topology.hpp"

#include <string>

#include "mswe/error.hpp"

namespace mswe {

const char* space_name(Space s) {
  switch (s) {
    case Space::W: return "W";
    case Space::U: return "U";
    case Space::Q: return "Q";
  }
  return "?";
}

void Mesh::validate() const {
  if (nx < 1 || ny < 1)
    throw InvalidArgument("mesh: element counts must be >= 1 (nx=" + std::to_string(nx) +
                          ", ny=" + std::to_string(ny) + ")");
  if (!(lx > 0.0) || !(ly > 0.0)) throw InvalidArgument("mesh: domain lengths must be positive");
  if (p < 1) throw InvalidArgument("mesh: degree must be >= 1, got " + std::to_string(p));
}

std::span<const int> DofMap::w_of(int e) const {
  const int n = (p + 1) * (p + 1);
  return {w.data() + static_cast<std::size_t>(e) * n, static_cast<std::size_t>(n)};
}
std::span<const int> DofMap::u_of(int e) const {
  const int n = 2 * p * (p + 1);
  return {u.data() + static_cast<std::size_t>(e) * n, static_cast<std::size_t>(n)};
}
std::span<const int> DofMap::q_of(int e) const {
  const int n = p * p;
  return {q.data() + static_cast<std::size_t>(e) * n, static_cast<std::size_t>(n)};
}
std::span<const int> DofMap::of(Space s, int e) const {
  switch (s) {
    case Space::W: return w_of(e);
    case Space::U: return u_of(e);
    case Space::Q: return q_of(e);
  }
  return {};
}
int DofMap::local_size(Space s) const {
  const LocalLayout l{p};
  return s == Space::W ? l.nw() : s == Space::U ? l.nu() : l.nq();
}
int DofMap::global_size(Space s) const { return s == Space::W ? dW : s == Space::U ? dU : dQ; }

namespace {

int wrap(int v, int n) { return ((v % n) + n) % n; }

struct GlobalNumbering {
  const Mesh& m;
  int p2;
  int w(int ex, int ey, int i, int j) const {
    const int gx = wrap(ex * m.p + i, m.nx * m.p);
    const int gy = wrap(ey * m.p + j, m.ny * m.p);
    return m.element(gx / m.p, gy / m.p) * p2 + (gx % m.p) * m.p + (gy % m.p);
  }
  // xi-normal edge on the line x_i, segment j (1..p)
  int ux(int ex, int ey, int i, int j) const {
    const int gx = wrap(ex * m.p + i, m.nx * m.p);
    return m.element(gx / m.p, wrap(ey, m.ny)) * p2 + (gx % m.p) * m.p + (j - 1);
  }
  // eta-normal edge on the line y_j, segment i (1..p)
  int uy(int ex, int ey, int i, int j) const {
    const int gy = wrap(ey * m.p + j, m.ny * m.p);
    return m.elements() * p2 + m.element(wrap(ex, m.nx), gy / m.p) * p2 + (i - 1) * m.p + (gy % m.p);
  }
  int q(int ex, int ey, int i, int j) const { return m.element(ex, ey) * p2 + (i - 1) * m.p + (j - 1); }
};

}  // namespace

DofMap build_dof_map(const Mesh& mesh) {
  mesh.validate();
  const int p = mesh.p;
  const LocalLayout l{p};
  const int n = mesh.elements();
  DofMap d;
  d.p = p;
  d.n_elements = n;
  d.dW = n * p * p;
  d.dU = 2 * n * p * p;
  d.dQ = n * p * p;
  d.w.resize(static_cast<std::size_t>(n) * l.nw());
  d.u.resize(static_cast<std::size_t>(n) * l.nu());
  d.q.resize(static_cast<std::size_t>(n) * l.nq());
  const GlobalNumbering g{mesh, p * p};
  for (int ey = 0; ey < mesh.ny; ++ey)
    for (int ex = 0; ex < mesh.nx; ++ex) {
      const int e = mesh.element(ex, ey);
      int* w = d.w.data() + static_cast<std::size_t>(e) * l.nw();
      int* u = d.u.data() + static_cast<std::size_t>(e) * l.nu();
      int* q = d.q.data() + static_cast<std::size_t>(e) * l.nq();
      for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= p; ++j) w[l.w(i, j)] = g.w(ex, ey, i, j);
      for (int i = 0; i <= p; ++i)
        for (int j = 1; j <= p; ++j) u[l.ux(i, j)] = g.ux(ex, ey, i, j);
      for (int i = 1; i <= p; ++i)
        for (int j = 0; j <= p; ++j) u[l.uy(i, j)] = g.uy(ex, ey, i, j);
      for (int i = 1; i <= p; ++i)
        for (int j = 1; j <= p; ++j) q[l.q(i, j)] = g.q(ex, ey, i, j);
    }
  return d;
}

LocalPatterns local_patterns(int p) {
  if (p < 1) throw InvalidArgument("local_patterns: degree must be >= 1");
  const LocalLayout l{p};
  LocalPatterns pat{IntMatrix(l.nu(), l.nw()), IntMatrix(l.nq(), l.nu())};
  // rot: xi-normal flux = w(i, j-1) - w(i, j); eta-normal flux = w(i, j) - w(i-1, j)
  for (int i = 0; i <= p; ++i)
    for (int j = 1; j <= p; ++j) {
      pat.e10(l.ux(i, j), l.w(i, j - 1)) = 1;
      pat.e10(l.ux(i, j), l.w(i, j)) = -1;
    }
  for (int i = 1; i <= p; ++i)
    for (int j = 0; j <= p; ++j) {
      pat.e10(l.uy(i, j), l.w(i, j)) = 1;
      pat.e10(l.uy(i, j), l.w(i - 1, j)) = -1;
    }
  // div: outflow through the four sides of cell (i, j)
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j <= p; ++j) {
      const int r = l.q(i, j);
      pat.e21(r, l.ux(i, j)) = 1;
      pat.e21(r, l.ux(i - 1, j)) = -1;
      pat.e21(r, l.uy(i, j)) = 1;
      pat.e21(r, l.uy(i, j - 1)) = -1;
    }
  return pat;
}

IncidenceMatrices build_incidence(const Mesh& mesh, const DofMap& dofs) {
  const int p = mesh.p;
  const LocalLayout l{p};
  const LocalPatterns pat = local_patterns(p);
  std::vector<IntTriplet> t10, t21;
  t10.reserve(static_cast<std::size_t>(dofs.dU) * 2);
  t21.reserve(static_cast<std::size_t>(dofs.dQ) * 4);
  for (int e = 0; e < mesh.elements(); ++e) {
    const auto w = dofs.w_of(e);
    const auto u = dofs.u_of(e);
    const auto q = dofs.q_of(e);
    // Only the rows this element owns, so shared edges are not counted twice.
    auto add_e10_row = [&](int r) {
      for (int c = 0; c < l.nw(); ++c)
        if (pat.e10(r, c) != 0) t10.push_back({u[r], w[c], pat.e10(r, c)});
    };
    for (int i = 0; i < p; ++i)
      for (int j = 1; j <= p; ++j) add_e10_row(l.ux(i, j));
    for (int i = 1; i <= p; ++i)
      for (int j = 0; j < p; ++j) add_e10_row(l.uy(i, j));
    for (int r = 0; r < l.nq(); ++r)
      for (int c = 0; c < l.nu(); ++c)
        if (pat.e21(r, c) != 0) t21.push_back({q[r], u[c], pat.e21(r, c)});
  }
  IncidenceMatrices inc;
  inc.e10 = IntCsr::from_triplets(dofs.dU, dofs.dW, std::move(t10));
  inc.e21 = IntCsr::from_triplets(dofs.dQ, dofs.dU, std::move(t21));
  inc.e10_t = inc.e10.transpose();
  inc.e21_t = inc.e21.transpose();
  return inc;
}

DofPermutation translation_permutation(const Mesh& mesh, const DofMap& dofs, int sx, int sy) {
  DofPermutation perm;
  perm.w.assign(dofs.dW, -1);
  perm.u.assign(dofs.dU, -1);
  perm.q.assign(dofs.dQ, -1);
  for (int ey = 0; ey < mesh.ny; ++ey)
    for (int ex = 0; ex < mesh.nx; ++ex) {
      const int from = mesh.element(ex, ey);
      const int to = mesh.element(wrap(ex + sx, mesh.nx), wrap(ey + sy, mesh.ny));
      for (Space s : {Space::W, Space::U, Space::Q}) {
        auto a = dofs.of(s, from);
        auto b = dofs.of(s, to);
        auto& target = s == Space::W ? perm.w : s == Space::U ? perm.u : perm.q;
        for (std::size_t k = 0; k < a.size(); ++k) target[a[k]] = b[k];
      }
    }
  return perm;
}

}  // namespace mswe
