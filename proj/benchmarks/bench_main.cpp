#include <benchmark/benchmark.h>

#include "gorma/optimizer.hpp"
#include "gorma/simulator.hpp"

namespace {

const gorma::SystemParams kParams{100, 1.0, 6.4e-4};

void BM_DeliveryOneHop(benchmark::State& state) {
  std::int64_t y = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gorma::delivery_probability_one_hop(kParams, y));
    y = y % 1562 + 1;
  }
}
BENCHMARK(BM_DeliveryOneHop);

void BM_OptimizeOneHop(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gorma::optimize_one_hop(kParams));
}
BENCHMARK(BM_OptimizeOneHop);

void BM_OptimizeTwoGroups(benchmark::State& state) {
  const gorma::QoSGroupSpec groups[] = {gorma::QoSGroupSpec(30, 0.99, 1.0),
                                        gorma::QoSGroupSpec(state.range(0), 0.9, 1.0)};
  for (auto _ : state) benchmark::DoNotOptimize(gorma::optimize_two_groups(kParams, groups));
}
BENCHMARK(BM_OptimizeTwoGroups)->Arg(30)->Arg(300);

void BM_MaxGroupSize(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gorma::max_group_size(kParams, 0.95, gorma::QoSGroupSpec(30, 0.9, 1.0), 1.0));
  }
}
BENCHMARK(BM_MaxGroupSize);

void BM_SimulateOneHop(benchmark::State& state) {
  gorma::SimOptions o;
  o.periods = 1000;
  o.threads = 1;
  const std::int64_t copies = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(gorma::simulate_one_hop(kParams, copies, o));
  state.SetItemsProcessed(state.iterations() * o.periods * kParams.n_nodes() * copies);
}
BENCHMARK(BM_SimulateOneHop)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
