#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mswe/parallel.hpp"
#include "mswe/sparse.hpp"

namespace mswe {

struct CgOptions {
  double rel_tol = 1e-12;
  int max_iterations = 0;  // 0 -> 10 * dim
  Exec exec = Exec::parallel;
};

struct CgReport {
  int iterations = 0;
  double residual = 0.0;  // true relative residual on exit
};

/// Jacobi-preconditioned conjugate gradients. x holds the initial guess on
/// entry. Throws NonConvergence when the cap is exceeded.
CgReport conjugate_gradient(const SparseOperator& a, std::span<const double> b, std::span<double> x,
                            const CgOptions& opt = {});

std::vector<double> solve_spd(const SparseOperator& a, std::span<const double> b, const CgOptions& opt = {});

/// Cholesky factors of the element blocks of a block-diagonal SPD operator,
/// e.g. the Q mass matrix. Block e covers the rows listed by map[e].
class ElementBlockSolver {
 public:
  ElementBlockSolver() = default;
  ElementBlockSolver(const SparseOperator& a, std::span<const int> map, int block, Exec exec = Exec::parallel);

  std::vector<double> solve(std::span<const double> b) const;
  int size() const { return n_; }

 private:
  struct Factors;
  std::shared_ptr<const Factors> f_;  // immutable, shared between copies
  int n_ = 0;
};

}  // namespace mswe
