// Serial reference against OpenMP kernels. Arg 0 selects Exec::serial, 1 Exec::parallel.
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "mswe/cases.hpp"

using namespace mswe;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) == 0 ? Exec::serial : Exec::parallel; }

AssemblyContext& context() {
  static AssemblyContext ctx(Mesh{20, 20, 2.0 * M_PI, 2.0 * M_PI, 0.0, 0.0, 3}, QuadMode::exact);
  return ctx;
}

Field random_field(Space s, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  Field f = Field::zeros(s, context().dofs());
  for (double& v : f.coeffs) v = u(rng);
  return f;
}

void BM_AssembleUq(benchmark::State& state) {
  AssemblyContext ctx = context();
  ctx.set_exec(exec_of(state));
  const Field q = random_field(Space::W, 1);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_coupling(Coupling::Uq, ctx, q));
}

void BM_AssembleUh(benchmark::State& state) {
  AssemblyContext ctx = context();
  ctx.set_exec(exec_of(state));
  const Field h = random_field(Space::Q, 2);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_coupling(Coupling::Uh, ctx, h));
}

void BM_MatvecUMass(benchmark::State& state) {
  const auto m = assemble_mass(Space::U, context());
  const Field x = random_field(Space::U, 3);
  std::vector<double> y(x.coeffs.size());
  for (auto _ : state) {
    m.apply(x.coeffs, y, exec_of(state));
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_Dot(benchmark::State& state) {
  const Field a = random_field(Space::U, 4), b = random_field(Space::U, 5);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dot(a.coeffs, b.coeffs, exec_of(state)));
}

void BM_Tendency(benchmark::State& state) {
  RunConfig c = RunConfig::defaults(CaseKind::vortex_pair);
  AssemblyContext ctx(c.mesh(), c.quadrature, exec_of(state));
  const ShallowWaterSolver solver(ctx, make_physics(c, ctx));
  const SimState s = initial_state(c, ctx);
  for (auto _ : state) benchmark::DoNotOptimize(solver.tendency(s));
}

}  // namespace

BENCHMARK(BM_AssembleUq)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleUh)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatvecUMass)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Dot)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Tendency)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
