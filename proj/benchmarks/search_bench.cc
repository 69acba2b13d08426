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

#include "foc/search.h"

namespace {

using namespace foc;

std::vector<FunctionEmbedding> random_entries(size_t n, int dim, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  std::vector<FunctionEmbedding> out(n);
  for (size_t i = 0; i < n; ++i) {
    out[i].id = "f" + std::to_string(i);
    out[i].meta.name = "fn" + std::to_string(i / 4);
    out[i].vector = Vector::NullaryExpr(dim, [&] { return dist(rng); });
  }
  return out;
}

void BM_IndexQuery(benchmark::State& state) {
  const EmbeddingIndex index(random_entries(static_cast<size_t>(state.range(0)), 256, 1));
  const Vector q = random_entries(1, 256, 2)[0].vector;
  for (auto _ : state) benchmark::DoNotOptimize(index.query(q, 10));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IndexQuery)->RangeMultiplier(10)->Range(100, 100000);

void BM_IndexRoundTrip(benchmark::State& state) {
  const EmbeddingIndex index(random_entries(static_cast<size_t>(state.range(0)), 256, 3));
  for (auto _ : state) benchmark::DoNotOptimize(EmbeddingIndex::parse(index.serialize()));
}
BENCHMARK(BM_IndexRoundTrip)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
