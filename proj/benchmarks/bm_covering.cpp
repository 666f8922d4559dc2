#include <benchmark/benchmark.h>

#include <random>

#include "nlheat/covering.hpp"

namespace {

using namespace nlheat;

void BM_Dilate(benchmark::State& state) {
  const int across = static_cast<int>(state.range(0));
  const auto host = make_lattice_host(2, across, across, 1.0, 0.3, 0.5);
  std::mt19937_64 rng(11);
  const ParabolicPointSet E = random_set(host, 0.2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(dilate_set(E, 0.1, 1.0));
  state.counters["members"] = static_cast<double>(host->size());
}
BENCHMARK(BM_Dilate)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace
