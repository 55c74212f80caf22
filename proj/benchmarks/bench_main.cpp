#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "vmv/brownian.hpp"
#include "vmv/measure.hpp"
#include "vmv/model.hpp"
#include "vmv/resolvent.hpp"
#include "vmv/scheme.hpp"

namespace {

vmv::EmpiricalMeasure random_measure(std::size_t n, std::size_t d, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  std::vector<double> pts(n * d);
  for (auto& x : pts) x = z(gen);
  return vmv::EmpiricalMeasure(d, std::move(pts));
}

void BM_w2_sorted(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_measure(n, 1, 1), b = random_measure(n, 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(vmv::w2_sorted(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_w2_sorted)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_w2_matching(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_measure(n, 2, 1), b = random_measure(n, 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(vmv::w2_matching(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_w2_matching)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_euler_ou(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto store = vmv::make_brownian(1, 64, 1, n);
  const auto model = vmv::mean_field_ou(1.0, 1.0, vmv::InitialCondition::deterministic({1.0}));
  for (auto _ : state) benchmark::DoNotOptimize(vmv::euler_simulate(model, n, 64, store));
}
BENCHMARK(BM_euler_ou)->DenseRange(4, 8)->Unit(benchmark::kMillisecond);

void BM_resolvent_power(benchmark::State& state) {
  const auto grid = vmv::TriGrid::dyadic(static_cast<int>(state.range(0)));
  const auto k = vmv::power_kernel(0.25);
  for (auto _ : state) benchmark::DoNotOptimize(vmv::resolvent_sum(k, grid, 1e-10));
}
BENCHMARK(BM_resolvent_power)->DenseRange(4, 8)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
