#include "chainsync/measures.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace chainsync;

namespace {

std::vector<double> wave(double w, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(w * 0.02 * static_cast<double>(i));
  return v;
}

void BM_SyncSeries(benchmark::State& state) {
  const auto f = wave(1.0, 60001), g = wave(1.1, 60001);
  for (auto _ : state) benchmark::DoNotOptimize(sync_series(f, g, 0.02, 20.0, 2.0));
}
BENCHMARK(BM_SyncSeries)->Unit(benchmark::kMillisecond);

void BM_BestDelay(benchmark::State& state) {
  const auto f = wave(1.0, 60001), g = wave(1.1, 60001);
  for (auto _ : state) benchmark::DoNotOptimize(best_delay(f, g, 0.02, 300.0, 20.0, 10.0, 0.1));
}
BENCHMARK(BM_BestDelay)->Unit(benchmark::kMicrosecond);

void BM_CorrelationMeasures(benchmark::State& state) {
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  c.diagonal() << 1.3, 0.9, 1.1, 0.8;
  c(0, 1) = c(1, 0) = 0.4;
  c(2, 3) = c(3, 2) = -0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_negativity(c));
    benchmark::DoNotOptimize(mutual_information(c));
  }
}
BENCHMARK(BM_CorrelationMeasures);

}  // namespace

BENCHMARK_MAIN();
