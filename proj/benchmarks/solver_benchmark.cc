// Copyright 2026 The privleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "privleak/dual_solver.h"
#include "privleak/leakage_solver.h"
#include "privleak/mechanisms.h"
#include "privleak/primal_solver.h"
#include "privleak/projections.h"
#include "privleak/query.h"
#include "privleak/space.h"

namespace privleak {
namespace {

// Args: record count, entropy bound in tenths of a nat.
void BM_MaxLeakageBsc(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ProblemSpace space = *ProblemSpace::Binary(n, 2);
  Mechanism mech = *BuildBsc(space, Query::Parity(), 0.3);
  LeakageConfig config;
  config.entropy_bound = state.range(1) / 10.0;
  config.restarts = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(MaxLeakage(space, mech, config));
  }
}
BENCHMARK(BM_MaxLeakageBsc)
    ->Args({2, 0})
    ->Args({4, 0})
    ->Args({4, 15})
    ->Args({6, 30})
    ->Unit(benchmark::kMillisecond);

void BM_ProjectSimplex(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<double> v(state.range(0));
  for (double& x : v) x = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(ProjectSimplex(v));
}
BENCHMARK(BM_ProjectSimplex)->Range(4, 1024);

void BM_ProjectEntropy(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::exponential_distribution<double> e;
  std::vector<double> v(state.range(0));
  double total = 0.0;
  for (double& x : v) total += (x = e(rng));
  for (double& x : v) x /= total;
  const double target = 0.5 * std::log(static_cast<double>(v.size()));
  for (auto _ : state) benchmark::DoNotOptimize(ProjectEntropy(v, target));
}
BENCHMARK(BM_ProjectEntropy)->Range(4, 1024);

void BM_PrimalTradeoff(benchmark::State& state) {
  ProblemSpace space = *ProblemSpace::Binary(2, 2);
  const JointPrior truth = JointPrior::Uniform(space.universe_size());
  PrimalConfig config;
  config.distortion_bound = 0.2;
  config.leakage.restarts = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(PrimalTradeoff(space, truth, Query::Parity(),
                                            DistortionMetric::AbsoluteDifference(),
                                            config));
  }
}
BENCHMARK(BM_PrimalTradeoff)->Unit(benchmark::kMillisecond);

void BM_DualSolve(benchmark::State& state) {
  ProblemSpace space = *ProblemSpace::Binary(2, 2);
  const JointPrior truth = JointPrior::Uniform(space.universe_size());
  DualConfig config;
  config.leakage_bound = 0.2;
  config.leakage.restarts = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(DualSolve(space, truth, Query::Parity(),
                                       DistortionMetric::AbsoluteDifference(),
                                       config));
  }
}
BENCHMARK(BM_DualSolve)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace privleak

BENCHMARK_MAIN();
