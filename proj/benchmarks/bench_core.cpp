#include <benchmark/benchmark.h>

#include "gatelab/ensembles.hpp"
#include "gatelab/iteration.hpp"
#include "gatelab/measures.hpp"

using namespace gatelab;

static void BM_HaarUnitary(benchmark::State& state) {
  Rng rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(haar_unitary(n, rng));
}
BENCHMARK(BM_HaarUnitary)->Arg(4)->Arg(9)->Arg(16)->Arg(100);

static void BM_Purities(benchmark::State& state) {
  Rng rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const BipartiteGate u(n, haar_unitary(n * n, rng));
  for (auto _ : state) benchmark::DoNotOptimize(purities(u));
}
BENCHMARK(BM_Purities)->Arg(2)->Arg(3)->Arg(10);

static void BM_BuildIterate(benchmark::State& state) {
  Rng rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const BipartiteGate u(n, haar_unitary(n * n, rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_iterate(u, 8, InterlacePolicy::fresh_random, rng));
  }
}
BENCHMARK(BM_BuildIterate)->Arg(2)->Arg(3)->Arg(10);

BENCHMARK_MAIN();
