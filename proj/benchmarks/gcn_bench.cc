// Copyright 2026 The foc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "foc/gcn.h"
#include "foc/sim_model.h"
#include "foc/sim_train.h"
#include "foc/synthetic.h"

namespace {

using namespace foc;

Acfg chain_graph(int n, std::mt19937_64& rng) {
  Acfg g;
  g.node_features = Matrix::Zero(n, kBlockFeatureDim);
  std::uniform_int_distribution<int> count(0, 4), feature(0, kBlockFeatureDim - 1), node(0, n - 1);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 16; ++k) g.node_features(i, feature(rng)) = count(rng);
  for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
  for (int i = 0; i < n / 4; ++i) g.edges.emplace_back(node(rng), node(rng));
  return g;
}

void BM_GcnForward(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Acfg g = chain_graph(static_cast<int>(state.range(0)), rng);
  const GcnParams p = make_gcn_params(128, 5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(gcn_forward(g, p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GcnForward)->RangeMultiplier(4)->Range(4, 256);

const SyntheticBenchmark& bench() {
  static const SyntheticBenchmark b = [] {
    SyntheticConfig c;
    c.groups = 50;
    return make_synthetic_benchmark(c);
  }();
  return b;
}

void BM_EmbedFunction(benchmark::State& state) {
  const SimModel m = make_model(bench().train, ModelConfig{});
  const auto& records = bench().train.records;
  size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(m.embed(records[i++ % records.size()]));
}
BENCHMARK(BM_EmbedFunction);

void BM_TrainStep(benchmark::State& state) {
  SimModel m = make_model(bench().train, ModelConfig{});
  TrainConfig tc;
  tc.steps = 1;
  tc.batch_size = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(train_sim(bench().train, m, tc));
}
BENCHMARK(BM_TrainStep)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
