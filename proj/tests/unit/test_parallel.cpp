#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "mswe/parallel.hpp"

using namespace mswe;

TEST_CASE("blocked reductions are bitwise identical across execution modes") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{2047}, std::size_t{2048}, std::size_t{10001}}) {
    std::vector<double> a(n), b(n);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    CHECK(kernels::dot(a, b, Exec::serial) == kernels::dot(a, b, Exec::parallel));
    CHECK(kernels::sum(a, Exec::serial) == kernels::sum(a, Exec::parallel));
    long double ref = 0.0L;
    for (std::size_t i = 0; i < n; ++i) ref += static_cast<long double>(a[i]) * b[i];
    CHECK(std::abs(kernels::dot(a, b, Exec::parallel) - static_cast<double>(ref)) < 1e-12);
  }
}

TEST_CASE("axpy, xpby and max_abs") {
  std::vector<double> x{1.0, -2.0, 3.0}, y{0.5, 0.5, 0.5};
  for (Exec e : {Exec::serial, Exec::parallel}) {
    auto z = y;
    kernels::axpy(2.0, x, z, e);
    CHECK(z == std::vector<double>{2.5, -3.5, 6.5});
    z = y;
    kernels::xpby(x, -1.0, z, e);
    CHECK(z == std::vector<double>{0.5, -2.5, 2.5});
  }
  CHECK(kernels::max_abs(x) == 3.0);
  CHECK(kernels::max_abs(std::vector<double>{}) == 0.0);
}

TEST_CASE("for_each_index visits every index once") {
  for (Exec e : {Exec::serial, Exec::parallel}) {
    std::vector<int> hits(1000, 0);
    for_each_index(1000, e, [&](int i) { hits[i] += 1; });
    CHECK(std::accumulate(hits.begin(), hits.end(), 0) == 1000);
    CHECK(*std::min_element(hits.begin(), hits.end()) == 1);
  }
  CHECK(max_threads() >= 1);
}
