#pragma once

#include <span>
#include <vector>

#include "mswe/int_matrix.hpp"

namespace mswe {

/// The three discrete spaces: W (nodal, point values), U (edge fluxes),
/// Q (cell integrals).
enum class Space { W, U, Q };

const char* space_name(Space s);

/// Doubly periodic mesh of nx x ny uniform axis-aligned rectangles.
struct Mesh {
  int nx = 1;
  int ny = 1;
  double lx = 1.0;
  double ly = 1.0;
  double x0 = 0.0;
  double y0 = 0.0;
  int p = 1;

  void validate() const;
  int elements() const { return nx * ny; }
  double dx() const { return lx / nx; }
  double dy() const { return ly / ny; }
  double area() const { return lx * ly; }
  int element(int ex, int ey) const { return ey * nx + ex; }
};

/// Per-element DOF counts and local numbering. Indices are zero-based
/// versions of the tensor-product orderings: W (i, j) -> i(p+1)+j; the
/// xi-normal U block (i = 0..p, j = 1..p) precedes the eta-normal block
/// (i = 1..p, j = 0..p); Q (i, j = 1..p) -> (i-1)p+(j-1).
struct LocalLayout {
  int p;
  int nw() const { return (p + 1) * (p + 1); }
  int nux() const { return p * (p + 1); }
  int nu() const { return 2 * p * (p + 1); }
  int nq() const { return p * p; }
  int w(int i, int j) const { return i * (p + 1) + j; }
  int ux(int i, int j) const { return i * p + (j - 1); }
  int uy(int i, int j) const { return p * (p + 1) + (i - 1) * (p + 1) + j; }
  int q(int i, int j) const { return (i - 1) * p + (j - 1); }
};

/// Local-to-global maps, element-major. Every element owns the p^2 W nodes,
/// p^2 xi-normal edges, p^2 eta-normal edges and p^2 cells at its lower-left;
/// all xi-normal U DOFs are numbered before all eta-normal ones.
struct DofMap {
  int p = 1;
  int n_elements = 0;
  int dW = 0;
  int dU = 0;
  int dQ = 0;
  std::vector<int> w;
  std::vector<int> u;
  std::vector<int> q;

  LocalLayout layout() const { return {p}; }
  std::span<const int> w_of(int e) const;
  std::span<const int> u_of(int e) const;
  std::span<const int> q_of(int e) const;
  std::span<const int> of(Space s, int e) const;
  int local_size(Space s) const;
  int global_size(Space s) const;
};

DofMap build_dof_map(const Mesh& mesh);

struct LocalPatterns {
  IntMatrix e10;  // 2p(p+1) x (p+1)^2
  IntMatrix e21;  // p^2 x 2p(p+1)
};

LocalPatterns local_patterns(int p);

struct IncidenceMatrices {
  IntCsr e10;    // dU x dW, rot
  IntCsr e21;    // dQ x dU, divergence
  IntCsr e10_t;  // transposes kept for the adjoint products
  IntCsr e21_t;
};

IncidenceMatrices build_incidence(const Mesh& mesh, const DofMap& dofs);

/// Permutations induced by shifting the mesh by (sx, sy) elements.
struct DofPermutation {
  std::vector<int> w, u, q;
};
DofPermutation translation_permutation(const Mesh& mesh, const DofMap& dofs, int sx, int sy);

}  // namespace mswe
