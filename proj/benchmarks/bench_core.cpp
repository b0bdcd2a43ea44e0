// Copyright 2026 The Fairleak Authors
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

#include <benchmark/benchmark.h>

#include <vector>

#include "fairleak/attacks.hpp"
#include "fairleak/fairness.hpp"
#include "fairleak/metrics.hpp"
#include "fairleak/oracle.hpp"

using namespace fairleak;

namespace {

TabularDataset bench_dataset(std::size_t n) {
  SynthSpec spec{.n = n,
                 .p_s1 = 0.9,
                 .p_y1_given_s = {0.05, 0.95},
                 .mean_shift = 2.0,
                 .leak_shift = 1.0,
                 .d = 4,
                 .exact_frequency = true};
  return synth_biased(spec, 1);
}

void BM_RocCurve(benchmark::State& state) {
  const std::size_t n = state.range(0);
  Rng rng(5);
  SoftPredictions scores(n);
  BinaryVector pos(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = rng.uniform();
    pos[i] = i % 2;
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(roc_curve(scores, pos));
  state.SetComplexityN(n);
}

void BM_FitLogreg(benchmark::State& state) {
  auto ds = bench_dataset(state.range(0));
  std::vector<double> w(ds.n(), 1.0);
  TrainConfig cfg{.epochs = 100};
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_logreg(ds.features, ds.labels, w, cfg));
}

void BM_AdaptAiaH(benchmark::State& state) {
  auto ds = bench_dataset(2000);
  HardPredictions hard(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i) hard[i] = ds.labels[i];
  for (auto _ : state)
    benchmark::DoNotOptimize(
        adapt_aia_h(hard, ds.sensitive, hard, ds.sensitive));
}

void BM_DpTheoremSweep(benchmark::State& state) {
  for (auto _ : state)
    for (std::uint64_t seed = 0; seed < 1000; ++seed)
      benchmark::DoNotOptimize(dp_theorem_check(random_joint2(seed)));
}

void BM_EgdTrain(benchmark::State& state) {
  auto ds = bench_dataset(2000);
  auto split = make_split(ds, 0.2, 0.5, 1, true);
  EgdConfig cfg;
  cfg.iterations = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(egd_train(ds, split, cfg));
}

}  // namespace

BENCHMARK(BM_RocCurve)->Range(1 << 8, 1 << 16)->Complexity();
BENCHMARK(BM_FitLogreg)->Arg(500)->Arg(2000)->Arg(8000);
BENCHMARK(BM_AdaptAiaH);
BENCHMARK(BM_DpTheoremSweep);
BENCHMARK(BM_EgdTrain)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
