#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "sparsemix/detectors.hpp"
#include "sparsemix/model.hpp"
#include "sparsemix/random.hpp"

using namespace sparsemix;

namespace {

std::vector<double> normals(std::size_t n) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> z;
  std::vector<double> x(n);
  for (double& v : x) {
    v = z(gen);
  }
  return x;
}

void BM_Philox(benchmark::State& state) {
  CounterStream s(1, 0, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(s());
  }
}
BENCHMARK(BM_Philox);

void BM_Llr(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GaussianModel m(n, std::pow(static_cast<double>(n), -0.6), 1.5);
  const auto x = normals(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.llr(x));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Llr)->RangeMultiplier(100)->Range(100, 1000000);

void BM_SampleAlternative(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GaussianModel m(n, std::pow(static_cast<double>(n), -0.6), 1.5);
  std::vector<double> x(n);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    TrialStreams streams(1, trial++, {});
    m.sample(Hypothesis::Alternative, streams, x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SampleAlternative)->RangeMultiplier(100)->Range(100, 1000000);

void BM_HigherCriticism(benchmark::State& state) {
  const auto x = normals(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hc_statistic(x));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HigherCriticism)->RangeMultiplier(100)->Range(100, 1000000);

void BM_Acw(benchmark::State& state) {
  const auto x = normals(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(acw_statistic(x));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Acw)->RangeMultiplier(100)->Range(100, 1000000);

void BM_Max(benchmark::State& state) {
  const auto x = normals(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(max_statistic(x));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Max)->RangeMultiplier(100)->Range(100, 1000000);

}  // namespace

BENCHMARK_MAIN();
