// Serial reference kernels against their OpenMP counterparts.
//
//   scc_bench --benchmark_filter=Reach
//   OMP_NUM_THREADS=8 scc_bench

#include <benchmark/benchmark.h>

#include <random>

#include "scc/synth.hpp"
#include "scc/verifier.hpp"

namespace {

constexpr std::size_t kExploreBound = 500'000;

scc::Architecture wide_architecture(std::size_t components) {
  std::mt19937_64 rng(components);
  scc::synth::Options o;
  o.min_components = components;
  o.max_components = components;
  return scc::synth::random_architecture(rng, o);
}

void BM_ReachSerial(benchmark::State& state) {
  auto arch = wide_architecture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scc::reach_matrix_serial(arch));
  state.counters["nodes"] = static_cast<double>(scc::reach_nodes(arch).size());
}

void BM_ReachParallel(benchmark::State& state) {
  auto arch = wide_architecture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scc::reach_matrix_parallel(arch));
  state.counters["nodes"] = static_cast<double>(scc::reach_nodes(arch).size());
}

void BM_ExploreSerial(benchmark::State& state) {
  auto model = scc::build_flow_model(wide_architecture(static_cast<std::size_t>(state.range(0))), 1);
  std::size_t states = 0;
  for (auto _ : state) states = scc::explore_serial(model, kExploreBound).states;
  state.counters["states"] = static_cast<double>(states);
}

void BM_ExploreParallel(benchmark::State& state) {
  auto model = scc::build_flow_model(wide_architecture(static_cast<std::size_t>(state.range(0))), 1);
  std::size_t states = 0;
  for (auto _ : state) states = scc::explore_parallel(model, kExploreBound).states;
  state.counters["states"] = static_cast<double>(states);
}

}  // namespace

BENCHMARK(BM_ReachSerial)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReachParallel)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExploreSerial)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExploreParallel)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
