#include <benchmark/benchmark.h>

#include <memory>

#include "nlheat/kernel.hpp"
#include "nlheat/lattice.hpp"
#include "nlheat/nonlocal_op.hpp"
#include "nlheat/spectral.hpp"

namespace {

using namespace nlheat;

std::shared_ptr<const Grid> square(int across) {
  return std::make_shared<const Grid>(
      build_grid(Domain::rectangle({0.0, 0.0}, {1.0, 1.0}), 1.0 / across, 3.0));
}

void BM_Assemble2D(benchmark::State& state) {
  const auto g = square(static_cast<int>(state.range(0)));
  const auto K = make_fractional_kernel(2, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(g, K));
  state.counters["nodes"] = static_cast<double>(g->num_interior());
}
BENCHMARK(BM_Assemble2D)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ApplyLk2D(benchmark::State& state) {
  const auto g = square(static_cast<int>(state.range(0)));
  const OperatorMatrix mat = assemble(g, make_fractional_kernel(2, 0.5));
  const TimeGrid t(0.25, 0.25);
  const SpaceTimeField u = sample_field(g, t, [](const Point& x, double) { return x[0] * (1.0 - x[1]); },
                                        [](double) { return ExteriorRule::constant(0.5); });
  for (auto _ : state) benchmark::DoNotOptimize(apply_Lk(*mat.op, u, 1));
}
BENCHMARK(BM_ApplyLk2D)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Eigenproblem1D(benchmark::State& state) {
  const auto g = std::make_shared<const Grid>(
      build_grid(Domain::interval(0.0, 1.0), 1.0 / static_cast<double>(state.range(0)), 2.0));
  const OperatorMatrix mat = assemble(g, make_fractional_kernel(1, 0.5));
  for (auto _ : state) benchmark::DoNotOptimize(solve_eigenproblem(mat, g->num_interior()));
}
BENCHMARK(BM_Eigenproblem1D)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
