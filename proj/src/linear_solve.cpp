#include "mswe/linear_solve.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <string>

#include "mswe/error.hpp"

namespace mswe {

CgReport conjugate_gradient(const SparseOperator& a, std::span<const double> b, std::span<double> x,
                            const CgOptions& opt) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n || static_cast<int>(x.size()) != n)
    throw InvalidArgument("conjugate_gradient: dimension mismatch");
  const Exec ex = opt.exec;
  const int cap = opt.max_iterations > 0 ? opt.max_iterations : 10 * std::max(n, 1);

  const double bnorm = std::sqrt(kernels::dot(b, b, ex));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {};
  }
  std::vector<double> inv_diag = a.diagonal();
  for (double& d : inv_diag) {
    if (!(d > 0.0)) throw NumericalFailure("conjugate_gradient: non-positive diagonal entry");
    d = 1.0 / d;
  }

  std::vector<double> r(n), z(n), p(n), ap(n);
  const double target = opt.rel_tol * bnorm;
  int it = 0;
  double rnorm = 0.0;
  // The recursive residual drifts from the true one; restart from the
  // current iterate until the true residual meets the target.
  while (true) {
    a.apply(x, r, ex);
    for_each_index(n, ex, [&](int i) { r[i] = b[i] - r[i]; });
    rnorm = std::sqrt(kernels::dot(r, r, ex));
    if (rnorm <= target) return {it, rnorm / bnorm};
    if (it >= cap) break;

    for_each_index(n, ex, [&](int i) { z[i] = inv_diag[i] * r[i]; });
    p = z;
    double rz = kernels::dot(r, z, ex);
    while (it < cap) {
      ++it;
      a.apply(p, ap, ex);
      const double pap = kernels::dot(p, ap, ex);
      if (!(pap > 0.0)) throw NumericalFailure("conjugate_gradient: operator is not positive definite");
      const double alpha = rz / pap;
      kernels::axpy(alpha, p, x, ex);
      kernels::axpy(-alpha, ap, r, ex);
      if (std::sqrt(kernels::dot(r, r, ex)) <= 0.5 * target) break;
      for_each_index(n, ex, [&](int i) { z[i] = inv_diag[i] * r[i]; });
      const double rz_new = kernels::dot(r, z, ex);
      kernels::xpby(z, rz_new / rz, p, ex);
      rz = rz_new;
    }
  }
  throw NonConvergence("conjugate_gradient: no convergence after " + std::to_string(it) +
                           " iterations, relative residual " + std::to_string(rnorm / bnorm),
                       it, rnorm / bnorm);
}

std::vector<double> solve_spd(const SparseOperator& a, std::span<const double> b, const CgOptions& opt) {
  std::vector<double> x(b.size(), 0.0);
  conjugate_gradient(a, b, x, opt);
  return x;
}

struct ElementBlockSolver::Factors {
  int block = 0;
  std::vector<int> map;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> llt;
  Exec exec = Exec::parallel;
};

ElementBlockSolver::ElementBlockSolver(const SparseOperator& a, std::span<const int> map, int block, Exec exec)
    : n_(a.rows()) {
  if (block <= 0 || map.size() % block != 0) throw InvalidArgument("ElementBlockSolver: bad block size");
  const int ne = static_cast<int>(map.size()) / block;
  auto f = std::make_shared<Factors>();
  f->block = block;
  f->map.assign(map.begin(), map.end());
  f->llt.resize(ne);
  f->exec = exec;
  for_each_index(ne, exec, [&](int e) {
    Eigen::MatrixXd m(block, block);
    for (int i = 0; i < block; ++i)
      for (int j = 0; j < block; ++j) m(i, j) = a.at(map[e * block + i], map[e * block + j]);
    f->llt[e].compute(m);
  });
  for (const auto& l : f->llt)
    if (l.info() != Eigen::Success) throw NumericalFailure("ElementBlockSolver: block is not positive definite");
  f_ = std::move(f);
}

std::vector<double> ElementBlockSolver::solve(std::span<const double> b) const {
  if (!f_ || static_cast<int>(b.size()) != n_) throw InvalidArgument("ElementBlockSolver::solve: dimension mismatch");
  std::vector<double> x(n_, 0.0);
  const int blk = f_->block;
  const int ne = static_cast<int>(f_->llt.size());
  for_each_index(ne, f_->exec, [&](int e) {
    Eigen::VectorXd v(blk);
    for (int i = 0; i < blk; ++i) v[i] = b[f_->map[e * blk + i]];
    v = f_->llt[e].solve(v);
    for (int i = 0; i < blk; ++i) x[f_->map[e * blk + i]] = v[i];
  });
  return x;
}

}  // namespace mswe
