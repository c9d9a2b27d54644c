#pragma once

#include <cstddef>
#include <span>

namespace mswe {

/// Execution policy for the data-parallel kernels. `serial` is the plain
/// reference loop kept for testing; `parallel` uses OpenMP.
enum class Exec { serial, parallel };

int max_threads();

/// Runs body(i) for i in [0, n). Iterations must be independent.
template <class Body>
void for_each_index(int n, Exec exec, Body&& body) {
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) body(i);
  } else {
    for (int i = 0; i < n; ++i) body(i);
  }
}

namespace kernels {

// Partial sums are formed over fixed-size blocks and combined in block order,
// so the parallel result does not depend on the thread count.
inline constexpr std::size_t kReduceBlock = 2048;

double dot(std::span<const double> a, std::span<const double> b, Exec exec);
double sum(std::span<const double> a, Exec exec);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y, Exec exec);
/// y = x + beta * y
void xpby(std::span<const double> x, double beta, std::span<double> y, Exec exec);
double max_abs(std::span<const double> a);

}  // namespace kernels
}  // namespace mswe
