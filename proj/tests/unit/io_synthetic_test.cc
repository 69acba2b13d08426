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
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "foc/archive.h"
#include "foc/binary_io.h"
#include "foc/embedding.h"
#include "foc/output_header.h"
#include "foc/parallel.h"
#include "foc/crypto_registry.h"
#include "foc/synthetic.h"
#include "test_util.h"

namespace foc {
namespace {

TEST(BinaryIoTest, LittleEndianLayout) {
  BinaryWriter w;
  w.u32(0x01020304u);
  w.u64(0x0102030405060708ull);
  w.f64(1.0);
  const std::string& b = w.bytes();
  ASSERT_EQ(b.size(), 20u);
  EXPECT_EQ(static_cast<uint8_t>(b[0]), 0x04);
  EXPECT_EQ(static_cast<uint8_t>(b[3]), 0x01);
  EXPECT_EQ(static_cast<uint8_t>(b[4]), 0x08);
  EXPECT_EQ(static_cast<uint8_t>(b[11]), 0x01);
  // 1.0 = 0x3FF0000000000000
  EXPECT_EQ(static_cast<uint8_t>(b[18]), 0xF0);
  EXPECT_EQ(static_cast<uint8_t>(b[19]), 0x3F);
}

TEST(BinaryIoTest, RoundTripAndTruncation) {
  BinaryWriter w;
  w.u8(7);
  w.str("hello");
  w.long_str(std::string("a\0b", 3));
  w.f64(-0.125);
  w.f64(std::numeric_limits<double>::denorm_min());
  const std::string bytes = w.take();
  BinaryReader r(bytes);
  EXPECT_EQ(r.u8(), 7);
  EXPECT_EQ(r.str(), "hello");
  EXPECT_EQ(r.long_str(), std::string("a\0b", 3));
  EXPECT_EQ(r.f64(), -0.125);
  EXPECT_EQ(r.f64(), std::numeric_limits<double>::denorm_min());
  EXPECT_TRUE(r.done());
  EXPECT_THROW(r.u8(), IoError);
  BinaryReader short_reader(std::string_view(bytes).substr(0, 4));
  short_reader.u8();
  EXPECT_THROW(short_reader.str(), IoError);
}

TEST(ArchiveTest, RoundTripPreservesOrderAndBits) {
  std::mt19937_64 rng(1);
  Archive a;
  a.put_text("z", "last-inserted-first");
  a.put_tensor("m", testing::random_matrix(3, 4, rng));
  a.put_tensor("v", testing::random_vector(5, rng));
  const std::string bytes = a.serialize("TESTMAG1");
  const Archive b = Archive::parse(bytes, "TESTMAG1");
  EXPECT_EQ(b.names(), (std::vector<std::string>{"z", "m", "v"}));
  EXPECT_EQ(b.text("z"), "last-inserted-first");
  EXPECT_EQ(b.tensor("m"), a.tensor("m"));
  EXPECT_EQ(b.vector("v"), a.vector("v"));
  EXPECT_EQ(b.serialize("TESTMAG1"), bytes);
  EXPECT_THROW(b.text("m"), IoError);
  EXPECT_THROW(b.tensor("missing"), IoError);
  EXPECT_THROW(Archive::parse(bytes, "OTHERMAG"), IoError);
}

TEST(OutputHeaderTest, JsonAndCommentForms) {
  OutputHeader h = default_header();
  h.checkpoint_hash = "abc";
  h.config = {{"seed", "7"}, {"loss_form", "standard-infonce"}};
  const auto j = nlohmann::json::parse(h.to_json_line());
  EXPECT_TRUE(is_header_line(j));
  const OutputHeader back = OutputHeader::from_json(j);
  EXPECT_EQ(back.checkpoint_hash, "abc");
  EXPECT_EQ(back.config, h.config);
  EXPECT_FALSE(back.tool_version.empty());
  const std::string block = h.to_comment_block();
  EXPECT_NE(block.find("# checkpoint: abc"), std::string::npos);
  EXPECT_NE(block.find("# config.seed: 7"), std::string::npos);
  EXPECT_EQ(block.find("ingested"), std::string::npos);
}

TEST(EmbeddingIoTest, RoundTripIsExact) {
  std::mt19937_64 rng(2);
  FunctionEmbedding e{"id-1", {}, testing::random_vector(7, rng)};
  e.meta.project = "p";
  e.meta.arch = Arch::kArm;
  e.meta.bits = 32;
  e.meta.opt = Opt::kOs;
  std::stringstream ss;
  const OutputHeader header = default_header();
  write_embeddings(ss, {e}, &header);
  const auto back = read_embeddings(ss);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].id, e.id);
  EXPECT_EQ(back[0].meta, e.meta);
  EXPECT_EQ(back[0].vector, e.vector);  // shortest round-trip formatting
  std::stringstream bad("{\"id\": 3}\n");
  EXPECT_THROW(read_embeddings(bad), IoError);
}

TEST(ParallelTest, ResultsIndependentOfWorkerCount) {
  const int saved = worker_count();
  std::vector<double> one(1000), four(1000);
  set_worker_count(1);
  parallel_for(one.size(), [&](size_t i) { one[i] = std::sin(static_cast<double>(i)); });
  set_worker_count(4);
  parallel_for(four.size(), [&](size_t i) { four[i] = std::sin(static_cast<double>(i)); });
  EXPECT_EQ(one, four);
  EXPECT_THROW(parallel_for(10, [](size_t i) {
                 if (i == 7) throw IoError("boom");
               }),
               IoError);
  set_worker_count(saved);
}

TEST(SyntheticTest, ShapeAndSplits) {
  SyntheticConfig sc;
  sc.groups = 30;
  sc.distractor_groups = 5;
  const SyntheticBenchmark b = make_synthetic_benchmark(sc);
  EXPECT_EQ(b.train.records.size(), 60u);
  EXPECT_EQ(b.heldout.records.size(), 60u);
  EXPECT_EQ(b.distractors.records.size(), 10u);
  EXPECT_EQ(b.source_pairs.size(), b.train.records.size());
  std::set<std::string> ids;
  for (const Corpus* c : {&b.train, &b.heldout, &b.distractors})
    for (const auto& r : c->records) {
      EXPECT_EQ(validate(r), "") << r.id;
      EXPECT_TRUE(ids.insert(r.id).second) << r.id;
    }
  // Every held-out group also appears in training.
  std::set<GroupKey> train_keys;
  for (const auto& r : b.train.records) train_keys.insert(group_key(r));
  for (const auto& r : b.heldout.records) EXPECT_TRUE(train_keys.count(group_key(r)));
  for (const auto& r : b.distractors.records) EXPECT_FALSE(train_keys.count(group_key(r)));
}

TEST(SyntheticTest, ProfilePairsDifferOnEveryAxis) {
  for (auto [a, b] : {std::pair{0, 1}, std::pair{2, 3}}) {
    const BuildProfile p = build_profile(a), q = build_profile(b);
    EXPECT_NE(p.compiler, q.compiler);
    EXPECT_NE(p.compiler_version, q.compiler_version);
    EXPECT_NE(p.opt, q.opt);
    EXPECT_NE(p.arch, q.arch);
    EXPECT_NE(p.bits, q.bits);
  }
}

TEST(SyntheticTest, Deterministic) {
  SyntheticConfig sc;
  sc.groups = 10;
  const auto a = make_synthetic_benchmark(sc), b = make_synthetic_benchmark(sc);
  EXPECT_EQ(a.train.records, b.train.records);
  EXPECT_EQ(a.heldout.records, b.heldout.records);
  EXPECT_EQ(a.source_pairs, b.source_pairs);
  sc.seed += 1;
  EXPECT_NE(make_synthetic_benchmark(sc).train.records, a.train.records);
}

TEST(SyntheticTest, CryptoKeywordsPresent) {
  SyntheticConfig sc;
  sc.groups = 40;
  const auto b = make_synthetic_benchmark(sc);
  size_t with_keyword = 0;
  for (const auto& r : b.train.records) with_keyword += !classify_text(r.pseudo_code, default_registry()).empty();
  EXPECT_GT(with_keyword, 0u);
}

}  // namespace
}  // namespace foc
