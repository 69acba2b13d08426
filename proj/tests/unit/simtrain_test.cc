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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <set>

#include "foc/optimizer.h"
#include "foc/sim_train.h"
#include "foc/synthetic.h"
#include "oracles.h"

namespace foc {
namespace {

using testing::make_record;
using testing::reference_mnr;

TEST(MnrLossTest, IdenticalEmbeddingsClosedForms) {
  for (int n : {2, 3, 8}) {
    const Matrix same = Matrix::Ones(n, 5);
    EXPECT_NEAR(mnr_loss(same, same, 0.05, LossForm::kStandard).value, std::log(n), 1e-12) << n;
    EXPECT_NEAR(mnr_loss(same, same, 0.05, LossForm::kLiteral).value, std::log(n - 1), 1e-12) << n;
  }
  EXPECT_NEAR(mnr_loss(Matrix::Ones(3, 4), Matrix::Ones(3, 4), 0.05, LossForm::kLiteral).value,
              0.6931471805599453, 1e-12);
}

TEST(MnrLossTest, OrthogonalPairsBothForms) {
  // cos(V_i, V_i+) = 1, cross cosine 0, tau 1.
  const Matrix a = Matrix::Identity(2, 2);
  EXPECT_NEAR(mnr_loss(a, a, 1.0, LossForm::kLiteral).value, -1.0, 1e-15);
  EXPECT_NEAR(mnr_loss(a, a, 1.0, LossForm::kStandard).value, std::log1p(std::exp(-1.0)), 1e-15);
  EXPECT_NEAR(std::log1p(std::exp(-1.0)), 0.3133, 5e-5);
}

TEST(MnrLossTest, MatchesScalarReference) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 6;
    const Matrix a = testing::random_matrix(n, 6, rng), p = testing::random_matrix(n, 6, rng);
    for (LossForm form : {LossForm::kLiteral, LossForm::kStandard})
      EXPECT_NEAR(mnr_loss(a, p, 0.3, form).value, reference_mnr(a, p, 0.3, form), 1e-12);
  }
}

TEST(MnrLossTest, ScaleInvariant) {
  std::mt19937_64 rng(5);
  const Matrix a = testing::random_matrix(4, 6, rng), p = testing::random_matrix(4, 6, rng);
  for (LossForm form : {LossForm::kLiteral, LossForm::kStandard})
    EXPECT_NEAR(mnr_loss(a, p, 0.1, form).value, mnr_loss(7.0 * a, 7.0 * p, 0.1, form).value, 1e-12);
}

TEST(MnrLossTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(6);
  for (LossForm form : {LossForm::kLiteral, LossForm::kStandard})
    for (int t = 0; t < 5; ++t) {
      const int n = 2 + t;
      const Matrix a = testing::random_matrix(n, 5, rng), p = testing::random_matrix(n, 5, rng);
      EXPECT_LE(testing::mnr_gradient_error(a, p, 0.2, form), 1e-4);
    }
}

TEST(MnrLossTest, Preconditions) {
  EXPECT_THROW(mnr_loss(Matrix::Ones(1, 3), Matrix::Ones(1, 3), 0.05, LossForm::kStandard),
               PreconditionError);
  Matrix z = Matrix::Ones(2, 3);
  z.row(1).setZero();
  EXPECT_THROW(mnr_loss(z, Matrix::Ones(2, 3), 0.05, LossForm::kStandard), PreconditionError);
}

TEST(LossFormTest, Parse) {
  EXPECT_EQ(parse_loss_form("literal"), LossForm::kLiteral);
  EXPECT_EQ(parse_loss_form("literal-eq5"), LossForm::kLiteral);
  EXPECT_EQ(parse_loss_form("standard"), LossForm::kStandard);
  EXPECT_EQ(parse_loss_form("standard-infonce"), LossForm::kStandard);
  EXPECT_FALSE(parse_loss_form("other").has_value());
}

Corpus grouped_corpus(int groups, int variants) {
  Corpus c;
  for (int g = 0; g < groups; ++g)
    for (int v = 0; v < variants; ++v) {
      auto r = make_record("g" + std::to_string(g) + "v" + std::to_string(v));
      r.name = "fn" + std::to_string(g);
      c.records.push_back(r);
    }
  return c;
}

TEST(PairSamplerTest, ForcedUseOfBothGroups) {
  const Corpus c = grouped_corpus(2, 2);
  PairSampler sampler(c, 1);
  EXPECT_EQ(sampler.eligible_groups(), 2u);
  const auto pairs = sampler.sample(2);
  std::set<std::string> names;
  for (const auto& [a, b] : pairs) {
    EXPECT_NE(a, b);
    EXPECT_EQ(group_key(c.records[a]), group_key(c.records[b]));
    names.insert(c.records[a].name);
  }
  EXPECT_EQ(names.size(), 2u);
}

TEST(PairSamplerTest, ShortfallNamed) {
  const Corpus c = grouped_corpus(2, 2);
  PairSampler sampler(c, 1);
  try {
    sampler.sample(3);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find('3'), std::string::npos);
    EXPECT_NE(std::string(e.what()).find('2'), std::string::npos);
  }
}

TEST(PairSamplerTest, SingletonGroupsNotEligible) {
  Corpus c = grouped_corpus(3, 1);
  EXPECT_EQ(PairSampler(c, 1).eligible_groups(), 0u);
}

TEST(PairSamplerTest, DeterministicUnderSeed) {
  const Corpus c = grouped_corpus(30, 3);
  PairSampler a(c, 9), b(c, 9);
  EXPECT_EQ(a.sample(10), b.sample(10));
}

TEST(PairSamplerTest, GroupsDistinctAcrossManyBatches) {
  const Corpus c = grouped_corpus(40, 3);
  PairSampler sampler(c, 2);
  for (int batch = 0; batch < 1000; ++batch) {
    std::set<GroupKey> keys;
    for (const auto& [a, b] : sampler.sample(16)) {
      ASSERT_EQ(group_key(c.records[a]), group_key(c.records[b]));
      ASSERT_TRUE(keys.insert(group_key(c.records[a])).second);
    }
  }
}

TEST(AdamWTest, FirstStepMatchesClosedForm) {
  // After one step the bias-corrected moments are g and g^2.
  AdamOptions opts;
  opts.learning_rate = 0.1;
  opts.weight_decay = 0.5;
  AdamW adam(opts);
  Vector p = (Vector(3) << 1.0, -2.0, 0.5).finished();
  const Vector g = (Vector(3) << 0.3, -0.01, 0.0).finished();
  Vector expected(3);
  for (int i = 0; i < 3; ++i)
    expected[i] = p[i] * (1 - 0.1 * 0.5) - 0.1 * g[i] / (std::abs(g[i]) + 1e-8);
  adam.step({slot(p, g)});
  EXPECT_LE((p - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(adam.steps(), 1);
}

TEST(AdamWTest, MinimizesQuadratic) {
  AdamOptions opts;
  opts.learning_rate = 0.05;
  AdamW adam(opts);
  Vector p = Vector::Constant(4, 3.0);
  Vector g(4);
  for (int t = 0; t < 2000; ++t) {
    g = 2.0 * (p - Vector::LinSpaced(4, -1, 1));
    adam.step({slot(p, g)});
  }
  EXPECT_LE((p - Vector::LinSpaced(4, -1, 1)).cwiseAbs().maxCoeff(), 1e-3);
}

ModelConfig tiny_config() {
  ModelConfig cfg;
  cfg.sem_dim = 16;
  cfg.graph_dim = 16;
  cfg.gcn_layers = 2;
  cfg.output_dim = 16;
  cfg.vocab_size = 512;
  cfg.oov_buckets = 64;
  return cfg;
}

SyntheticBenchmark toy_benchmark() {
  SyntheticConfig sc;
  sc.groups = 20;
  sc.variants = 4;
  sc.train_variants = 4;
  return make_synthetic_benchmark(sc);
}

TEST(TrainSimTest, FrozenEncoderBitIdentical) {
  const SyntheticBenchmark bench = toy_benchmark();
  SimModel model = make_model(bench.train, tiny_config());
  const Matrix before = model.encoder.embedding;
  const Matrix fusion_before = model.fusion.weight;
  TrainConfig tc;
  tc.steps = 5;
  tc.batch_size = 8;
  const TrainResult r = train_sim(bench.train, model, tc);
  EXPECT_EQ(r.losses.size(), 5u);
  EXPECT_TRUE(model.encoder.frozen);
  EXPECT_EQ(std::memcmp(before.data(), model.encoder.embedding.data(),
                        sizeof(double) * static_cast<size_t>(before.size())),
            0);
  EXPECT_NE(model.fusion.weight, fusion_before);
}

TEST(TrainSimTest, UnfrozenEncoderMoves) {
  const SyntheticBenchmark bench = toy_benchmark();
  SimModel model = make_model(bench.train, tiny_config());
  const Matrix before = model.encoder.embedding;
  TrainConfig tc;
  tc.steps = 3;
  tc.batch_size = 8;
  tc.freeze_encoder = false;
  train_sim(bench.train, model, tc);
  EXPECT_NE(model.encoder.embedding, before);
}

TEST(TrainSimTest, LossDecreasesOnToyCorpus) {
  const SyntheticBenchmark bench = toy_benchmark();
  SimModel model = make_model(bench.train, tiny_config());
  TrainConfig tc;
  tc.steps = 300;
  tc.batch_size = 16;
  const TrainResult r = train_sim(bench.train, model, tc);
  double first = 0, last = 0;
  for (int i = 0; i < 100; ++i) {
    first += r.losses[static_cast<size_t>(i)];
    last += r.losses[r.losses.size() - 1 - static_cast<size_t>(i)];
  }
  EXPECT_LT(last, first);
}

TEST(TrainSimTest, FixedBatchNonIncreasing) {
  const SyntheticBenchmark bench = toy_benchmark();
  SimModel model = make_model(bench.train, tiny_config());
  TrainConfig tc;
  tc.steps = 10;
  tc.batch_size = 8;
  tc.fixed_batch = true;
  const TrainResult r = train_sim(bench.train, model, tc);
  bool monotone = true;
  for (size_t i = 1; i < r.losses.size(); ++i) monotone = monotone && r.losses[i] <= r.losses[i - 1];
  EXPECT_EQ(r.non_monotone, !monotone);
  EXPECT_TRUE(monotone);
}

TEST(TrainSimTest, DeterministicUnderSeed) {
  const SyntheticBenchmark bench = toy_benchmark();
  SimModel a = make_model(bench.train, tiny_config());
  SimModel b = make_model(bench.train, tiny_config());
  TrainConfig tc;
  tc.steps = 5;
  tc.batch_size = 8;
  EXPECT_EQ(train_sim(bench.train, a, tc).losses, train_sim(bench.train, b, tc).losses);
  EXPECT_EQ(a.hash(), b.hash());
}

TEST(TrainSimTest, DivergenceNamesStep) {
  const SyntheticBenchmark bench = toy_benchmark();
  SimModel model = make_model(bench.train, tiny_config());
  model.fusion.weight(0, 0) = std::numeric_limits<double>::quiet_NaN();
  TrainConfig tc;
  tc.steps = 3;
  tc.batch_size = 4;
  try {
    train_sim(bench.train, model, tc);
    FAIL() << "expected divergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "divergence");
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
}

TEST(TrainSimTest, RejectsBadConfig) {
  const SyntheticBenchmark bench = toy_benchmark();
  SimModel model = make_model(bench.train, tiny_config());
  TrainConfig tc;
  tc.batch_size = 1;
  EXPECT_THROW(train_sim(bench.train, model, tc), Error);
  tc.batch_size = 4;
  tc.tau = 0.0;
  EXPECT_THROW(train_sim(bench.train, model, tc), Error);
}

}  // namespace
}  // namespace foc
