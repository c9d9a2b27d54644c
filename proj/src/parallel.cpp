#include "mswe/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <omp.h>

namespace mswe {

int max_threads() { return omp_get_max_threads(); }

namespace kernels {
namespace {

template <class Term>
double blocked_sum(std::size_t n, Exec exec, Term term) {
  // the serial path walks the same blocks so both modes round identically
  const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
    const std::size_t lo = b * kReduceBlock;
    const std::size_t hi = std::min(n, lo + kReduceBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[b] = s;
  }
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b, Exec exec) {
  return blocked_sum(a.size(), exec, [&](std::size_t i) { return a[i] * b[i]; });
}

double sum(std::span<const double> a, Exec exec) {
  return blocked_sum(a.size(), exec, [&](std::size_t i) { return a[i]; });
}

void axpy(double alpha, std::span<const double> x, std::span<double> y, Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(y.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += alpha * x[i];
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += alpha * x[i];
  }
}

void xpby(std::span<const double> x, double beta, std::span<double> y, Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(y.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
  }
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace kernels
}  // namespace mswe
