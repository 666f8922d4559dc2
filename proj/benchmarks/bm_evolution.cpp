#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "nlheat/evolution.hpp"
#include "nlheat/kernel.hpp"
#include "nlheat/nonlocal_op.hpp"
#include "nlheat/spectral.hpp"

namespace {

using namespace nlheat;

void BM_MonotoneSolve1D(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const auto g = std::make_shared<const Grid>(build_grid(Domain::interval(-1.0, 1.0), h, 4.0));
  const OperatorMatrix mat = assemble(g, make_fractional_kernel(1, 0.5));
  const TimeGrid t(0.5, h);
  const SpaceTimeField gf = sample_field(g, t, [](const Point& x, double tt) { return std::cos(x[0] + tt); },
                                         [](double) { return ExteriorRule::constant(1.0); });
  const Eigen::VectorXd h0 = gf.interior(0);
  for (auto _ : state) benchmark::DoNotOptimize(monotone_solve(mat, gf, nullptr, h0));
  state.counters["steps"] = static_cast<double>(t.size() - 1);
}
BENCHMARK(BM_MonotoneSolve1D)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_GalerkinSolve1D(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const auto g = std::make_shared<const Grid>(build_grid(Domain::interval(-1.0, 1.0), h, 4.0));
  const OperatorMatrix mat = assemble(g, make_fractional_kernel(1, 0.5));
  const SpectralBasis basis = solve_eigenproblem(mat, g->num_interior());
  const TimeGrid t(0.5, h);
  const Eigen::VectorXd h0 = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(g->num_interior()));
  for (auto _ : state) benchmark::DoNotOptimize(galerkin_solve(basis, nullptr, h0, t));
}
BENCHMARK(BM_GalerkinSolve1D)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
