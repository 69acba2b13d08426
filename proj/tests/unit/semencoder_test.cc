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

#include <algorithm>
#include <cmath>
#include <random>

#include "foc/sem_encoder.h"
#include "foc/tokenizer.h"
#include "test_util.h"

namespace foc {
namespace {

using Strings = std::vector<std::string>;

TEST(TokenizerTest, SplitExamples) {
  EXPECT_TRUE(Tokenizer::split("").empty());
  EXPECT_EQ(Tokenizer::split("AES_set_key(x)"), (Strings{"aes", "set", "key", "(", "x", ")"}));
  EXPECT_EQ(Tokenizer::split("getHTTPResponse"), (Strings{"get", "http", "response"}));
}

TEST(TokenizerTest, TruncatesToMaximum) {
  std::string code;
  for (int i = 0; i < 2000; ++i) code += "t" + std::to_string(i) + " ";
  EXPECT_EQ(Tokenizer::split(code).size(), 1024u);
  Tokenizer tok;
  EXPECT_EQ(tok.encode(code).size(), 1024u);
}

TEST(TokenizerTest, FrequentTokensGetVocabSlots) {
  Tokenizer tok(4, 8);
  tok.build({"a a a b b c", "a d"});
  // Slot 0 is padding, so three vocabulary tokens fit.
  EXPECT_EQ(tok.index_of("a"), 1);
  EXPECT_EQ(tok.index_of("b"), 2);
  EXPECT_EQ(tok.index_of("c"), 3);
  // Overflow tokens land in the hash buckets, deterministically.
  const int d = tok.index_of("d");
  EXPECT_GE(d, 4);
  EXPECT_LT(d, 12);
  EXPECT_EQ(d, tok.index_of("d"));
}

TEST(TokenizerTest, VocabTextRoundTrip) {
  Tokenizer tok(16, 4);
  tok.build({"alpha beta gamma alpha"});
  Tokenizer back(16, 4);
  back.set_vocab_text(tok.vocab_text());
  for (const char* t : {"alpha", "beta", "gamma", "unseen"}) EXPECT_EQ(back.index_of(t), tok.index_of(t));
}

SemEncoder small_encoder(int table = 12, int dim = 6, uint64_t seed = 3) {
  std::mt19937_64 rng(seed);
  return make_sem_encoder(table, dim, rng);
}

TEST(EncodeTest, PadRowIsZero) {
  const SemEncoder enc = small_encoder();
  EXPECT_EQ(enc.embedding.row(Tokenizer::kPadIndex).squaredNorm(), 0.0);
}

TEST(EncodeTest, Examples) {
  const SemEncoder enc = small_encoder();
  EXPECT_EQ(encode(std::vector<int>{}, enc), Vector::Zero(enc.dim()));
  EXPECT_EQ(encode(std::vector<int>{5}, enc), Vector(enc.embedding.row(5).transpose()));
  const Vector two = encode(std::vector<int>{3, 7}, enc);
  for (int k = 0; k < enc.dim(); ++k)
    EXPECT_DOUBLE_EQ(two[k], (enc.embedding(3, k) + enc.embedding(7, k)) / 2.0);
}

TEST(EncodeTest, PaddingExcludedFromMean) {
  const SemEncoder enc = small_encoder();
  EXPECT_EQ(encode(std::vector<int>{0, 4, 0}, enc), encode(std::vector<int>{4}, enc));
  EXPECT_EQ(encode(std::vector<int>{0, 0}, enc), Vector::Zero(enc.dim()));
}

TEST(EncodeTest, ShuffleInvariant) {
  const SemEncoder enc = small_encoder();
  std::vector<int> tokens = {1, 2, 3, 3, 9, 11, 4};
  const Vector base = encode(tokens, enc);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 5; ++t) {
    std::shuffle(tokens.begin(), tokens.end(), rng);
    EXPECT_LT((encode(tokens, enc) - base).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(EncodeTest, OutOfRangeTokenThrows) {
  const SemEncoder enc = small_encoder();
  EXPECT_THROW(encode(std::vector<int>{12}, enc), PreconditionError);
}

TEST(ContrastiveLossTest, Examples) {
  const Vector u = (Vector(3) << 1, 2, 3).finished();
  EXPECT_NEAR(contrastive_loss(u, u), 0.0, 1e-15);
  EXPECT_NEAR(contrastive_loss((Vector(2) << 1, 0).finished(), (Vector(2) << 0, 4).finished()), 1.0,
              1e-15);
  EXPECT_NEAR(contrastive_loss(u, -u), 2.0, 1e-15);
  EXPECT_THROW(contrastive_loss(u, Vector::Zero(3)), PreconditionError);
}

TEST(ContrastiveLossTest, RangeSymmetryScale) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const Vector a = testing::random_vector(8, rng), b = testing::random_vector(8, rng);
    const double l = contrastive_loss(a, b);
    EXPECT_GE(l, 0.0);
    EXPECT_LE(l, 2.0);
    EXPECT_NEAR(l, contrastive_loss(b, a), 1e-14);
    EXPECT_NEAR(l, contrastive_loss(3.5 * a, 0.25 * b), 1e-14);
  }
}

TEST(ContrastiveLossTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(21);
  const double h = 1e-5;
  for (int t = 0; t < 20; ++t) {
    const Vector a = testing::random_vector(7, rng), b = testing::random_vector(7, rng);
    const ContrastiveGrad g = contrastive_loss_grad(a, b);
    EXPECT_DOUBLE_EQ(g.loss, contrastive_loss(a, b));
    Vector na(7), nb(7);
    for (int i = 0; i < 7; ++i) {
      Vector ap = a, am = a, bp = b, bm = b;
      ap[i] += h;
      am[i] -= h;
      bp[i] += h;
      bm[i] -= h;
      na[i] = (contrastive_loss(ap, b) - contrastive_loss(am, b)) / (2 * h);
      nb[i] = (contrastive_loss(a, bp) - contrastive_loss(a, bm)) / (2 * h);
    }
    EXPECT_LE(testing::relative_error(g.grad_source, na), 1e-4);
    EXPECT_LE(testing::relative_error(g.grad_binary, nb), 1e-4);
  }
}

TEST(EncodeBackwardTest, ScatterMatchesFiniteDifferences) {
  SemEncoder enc = small_encoder(10, 4);
  const std::vector<int> tokens = {2, 5, 2, 0, 9};
  const Vector w = (Vector(4) << 0.3, -1.2, 0.7, 2.0).finished();
  Matrix grad = Matrix::Zero(10, 4);
  encode_backward(tokens, w, grad);
  const double h = 1e-5;
  Matrix numeric = Matrix::Zero(10, 4);
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 4; ++c) {
      const double keep = enc.embedding(r, c);
      enc.embedding(r, c) = keep + h;
      const double up = w.dot(encode(tokens, enc));
      enc.embedding(r, c) = keep - h;
      const double down = w.dot(encode(tokens, enc));
      enc.embedding(r, c) = keep;
      numeric(r, c) = (up - down) / (2 * h);
    }
  EXPECT_LE(testing::relative_error(grad, numeric), 1e-8);
  EXPECT_EQ(grad.row(0).squaredNorm(), 0.0);
}

Tokenizer tokenizer_for(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::string> texts;
  for (const auto& [s, b] : pairs) {
    texts.push_back(s);
    texts.push_back(b);
  }
  Tokenizer tok(256, 32);
  tok.build(texts);
  return tok;
}

TEST(TrainContrastiveTest, IdenticalPairsHaveZeroLoss) {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"int a = b + c;", "int a = b + c;"}, {"return sha256(x);", "return sha256(x);"}};
  const Tokenizer tok = tokenizer_for(pairs);
  std::mt19937_64 rng(1);
  EncoderTrainConfig config;
  config.steps = 10;
  const auto result = train_contrastive(pairs, tok, make_sem_encoder(tok.table_size(), 8, rng), config);
  EXPECT_NEAR(result.initial_loss, 0.0, 1e-12);
  for (double l : result.step_losses) EXPECT_NEAR(l, 0.0, 1e-12);
}

TEST(TrainContrastiveTest, OverfitsSinglePair) {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"static int checksum(const char *buf, int len)", "undefined4 FUN_0040(long param_1, int n)"}};
  const Tokenizer tok = tokenizer_for(pairs);
  std::mt19937_64 rng(4);
  EncoderTrainConfig config;
  config.steps = 300;
  const auto result = train_contrastive(pairs, tok, make_sem_encoder(tok.table_size(), 16, rng), config);
  EXPECT_GT(result.initial_loss, 0.01);
  EXPECT_LT(result.final_loss, 0.01);
  EXPECT_TRUE(result.improved);
  EXPECT_EQ(result.encoder.embedding.row(0).squaredNorm(), 0.0);
}

TEST(TrainContrastiveTest, PreconditionErrors) {
  const std::vector<std::pair<std::string, std::string>> pairs = {{"a b", "c d"}};
  const Tokenizer tok = tokenizer_for(pairs);
  std::mt19937_64 rng(4);
  SemEncoder enc = make_sem_encoder(tok.table_size(), 4, rng);
  EXPECT_THROW(train_contrastive({}, tok, enc, {}), PreconditionError);
  EXPECT_THROW(train_contrastive({{"", "x"}}, tok, enc, {}), PreconditionError);
  enc.frozen = true;
  EXPECT_THROW(train_contrastive(pairs, tok, enc, {}), PreconditionError);
}

TEST(TrainContrastiveTest, SkipsEmptyPairs) {
  const std::vector<std::pair<std::string, std::string>> pairs = {{"a b", "c d"}, {"", "e"}};
  const Tokenizer tok = tokenizer_for(pairs);
  std::mt19937_64 rng(4);
  EncoderTrainConfig config;
  config.steps = 2;
  const auto result = train_contrastive(pairs, tok, make_sem_encoder(tok.table_size(), 4, rng), config);
  EXPECT_EQ(result.skipped_pairs, 1u);
}

}  // namespace
}  // namespace foc
