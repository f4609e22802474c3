#include "chainsync/scenario.hpp"

#include <benchmark/benchmark.h>

#include <numeric>

using namespace chainsync;

namespace {

ScenarioSpec spec_with(int M) {
  ScenarioSpec s = preset_spec(Preset::kFig2Dissipation);
  s.network.M = M;
  return s;
}

void BM_NormalModes(benchmark::State& state) {
  const ScenarioSpec s = spec_with(static_cast<int>(state.range(0)));
  const QuadraticForm qf = assemble_full_potential(s.network, s.probes);
  for (auto _ : state) benchmark::DoNotOptimize(NormalModes(qf).frequencies());
}
BENCHMARK(BM_NormalModes)->Arg(60)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_ProbeMeans(benchmark::State& state) {
  const ScenarioSpec s = spec_with(static_cast<int>(state.range(0)));
  const NormalModes nm(assemble_full_potential(s.network, s.probes));
  const ModalTrajectory traj(nm, initial_state(s));
  std::vector<double> times(10000);
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = 0.02 * static_cast<double>(i);
  const std::vector<int> probes{0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(traj.means(probes, times));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(times.size()));
}
BENCHMARK(BM_ProbeMeans)->Arg(60)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_ProbeCovariances(benchmark::State& state) {
  const ScenarioSpec s = spec_with(static_cast<int>(state.range(0)));
  const NormalModes nm(assemble_full_potential(s.network, s.probes));
  const ModalTrajectory traj(nm, initial_state(s));
  std::vector<double> times(256);
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = 0.1 * static_cast<double>(i);
  const std::vector<int> probes{0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(traj.covariances(probes, times));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(times.size()));
}
BENCHMARK(BM_ProbeCovariances)->Arg(60)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_DenseEvolve(benchmark::State& state) {
  const ScenarioSpec s = spec_with(static_cast<int>(state.range(0)));
  const NormalModes nm(assemble_full_potential(s.network, s.probes));
  const GaussianState g = initial_state(s);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(g, nm.map(12.5)).cov);
}
BENCHMARK(BM_DenseEvolve)->Arg(60)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_Gqle(benchmark::State& state) {
  const ScenarioSpec s = spec_with(300);
  const SystemModes sm = system_modes(s.network, s.probes);
  const double dt = 0.02, horizon = static_cast<double>(state.range(0));
  const int n = static_cast<int>(horizon / dt);
  const Kernels k = damping_kernels(sm, chain_frequencies(s.network), dt, n + 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_gqle_means(k, sm.Lambda1, sm.Lambda2, Eigen::Vector2d(0.5, 1.0),
                                              Eigen::Vector2d::Zero(), horizon, dt));
}
BENCHMARK(BM_Gqle)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace
