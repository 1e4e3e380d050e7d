// Microbenchmarks for the exact-arithmetic hot spots.
#include <benchmark/benchmark.h>

#include <random>

#include "cusp/cycles.hpp"

namespace {

cusp::Cycle negdef_cycle(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> entry(2, 9);
  cusp::Cycle c;
  for (int i = 0; i < n; ++i) c.d.emplace_back(entry(rng));
  c.d[0] = 5;
  return c;
}

void BM_DualCycle(benchmark::State& state) {
  std::mt19937_64 rng(1);
  cusp::Cycle c = negdef_cycle(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cusp::dual_cycle(c));
}
BENCHMARK(BM_DualCycle)->Arg(8)->Arg(64)->Arg(512);

void BM_Monodromy(benchmark::State& state) {
  std::mt19937_64 rng(2);
  cusp::Cycle c = negdef_cycle(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cusp::monodromy(c));
}
BENCHMARK(BM_Monodromy)->Arg(8)->Arg(64)->Arg(512);

void BM_Sl2zWord(benchmark::State& state) {
  std::mt19937_64 rng(3);
  cusp::Mat2 m = cusp::monodromy(negdef_cycle(rng, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(cusp::sl2z_word(m));
}
BENCHMARK(BM_Sl2zWord)->Arg(8)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
