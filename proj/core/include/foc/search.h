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

#ifndef FOC_SEARCH_H_
#define FOC_SEARCH_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "foc/common.h"
#include "foc/embedding.h"
#include "foc/metrics.h"
#include "foc/output_header.h"

namespace foc {

// Cosine similarity; throws PreconditionError for a zero vector.
double compare(const FunctionEmbedding& a, const FunctionEmbedding& b);

struct Hit {
  std::string id;
  double score = 0.0;
};

// Flat, immutable collection of embeddings with cached unit vectors.
//
// File layout (little-endian): magic "FOCIDX01" | u32 version |
// u32 header length | header JSON | u64 count | u32 dim |
// count x (u32 id length | id | u32 meta length | meta JSON | dim x f64)
class EmbeddingIndex {
 public:
  static constexpr uint32_t kVersion = 1;

  EmbeddingIndex() = default;
  // Throws PreconditionError on duplicate ids, zero vectors, or mixed sizes.
  explicit EmbeddingIndex(std::vector<FunctionEmbedding> entries, OutputHeader header = default_header());

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  int dim() const { return static_cast<int>(unit_.cols()); }
  const std::vector<FunctionEmbedding>& entries() const { return entries_; }
  const OutputHeader& header() const { return header_; }
  std::optional<size_t> find(std::string_view id) const;
  // Unit-length copy of entry i.
  Eigen::Ref<const Eigen::RowVectorXd> unit(size_t i) const { return unit_.row(static_cast<Eigen::Index>(i)); }

  // Top k by descending cosine, ties by ascending id. Entries whose id equals
  // `self_id` are dropped when exclude_self is set. Throws for k < 1 or an
  // empty index.
  std::vector<Hit> query(const Vector& q, int k, std::string_view self_id = {},
                         bool exclude_self = false) const;
  std::vector<Hit> query(const FunctionEmbedding& q, int k, bool exclude_self) const {
    return query(q.vector, k, q.id, exclude_self);
  }

  std::string serialize() const;
  static EmbeddingIndex parse(std::string_view bytes);
  void save(const std::string& path) const;
  static EmbeddingIndex load(const std::string& path);

 private:
  std::vector<FunctionEmbedding> entries_;
  Matrix unit_;
  std::unordered_map<std::string, size_t> by_id_;
  OutputHeader header_;
};

// Evaluation sub-tasks, named by the metadata axes a positive must differ in.
enum class SubTask { kXO, kXC, kXCXB, kXA, kXM };

std::string_view to_string(SubTask task);
std::optional<SubTask> parse_subtask(std::string_view s);

// Metadata predicate for a query/positive pair of the same group:
//   XO     same compiler, version, arch and bits; different opt
//   XC     different compiler family; same arch and bits
//   XC+XB  different compiler family and bits; same arch
//   XA     different arch and bits
//   XM     compiler, version, opt, arch and bits all differ
bool satisfies(SubTask task, const EmbeddingMeta& query, const EmbeddingMeta& positive);

struct PoolSpec {
  SubTask task = SubTask::kXM;
  int pool_size = 101;  // one positive plus pool_size - 1 negatives
  uint64_t seed = 7;
};

struct Pool {
  std::string query;
  std::string positive;
  std::vector<std::string> negatives;
};

struct PoolSet {
  PoolSpec spec;
  std::vector<Pool> pools;
  // "id: reason" for queries that could not get a pool.
  std::vector<std::string> skipped;
};

// Every embedding is tried as a query in input order. The positive is drawn
// uniformly from its group members satisfying the predicate, negatives
// uniformly without replacement from other groups, per query.
PoolSet build_pools(const std::vector<FunctionEmbedding>& embeddings, const PoolSpec& spec);

void write_pools(std::ostream& out, const PoolSet& pools, const OutputHeader& header);
void write_pools(const std::string& path, const PoolSet& pools, const OutputHeader& header);
PoolSet read_pools(const std::string& path);

struct PoolOutcome {
  RankedResult ranked;
  double positive_score = 0.0;
  std::vector<double> negative_scores;
};

// Ranks each pool's positive among its candidates by cosine to the query,
// ties by ascending id. Every id must be present in the index.
std::vector<PoolOutcome> evaluate_pools(const PoolSet& pools, const EmbeddingIndex& index);

struct BcsdReport {
  size_t queries = 0;
  size_t skipped = 0;
  double auc = 0.0;  // positive vs negative similarity over all pools
  std::map<int, double> recall;
  std::map<int, double> mrr;
};

BcsdReport summarize_pools(const PoolSet& pools, const std::vector<PoolOutcome>& outcomes,
                           const std::vector<int>& ks);

struct SweepRow {
  int pool_size = 0;
  size_t queries = 0;
  double recall_at_1 = 0.0;
};

// XM pools for every size, each with the given seed.
std::vector<SweepRow> pool_sweep(const std::vector<FunctionEmbedding>& embeddings,
                                 const std::vector<int>& sizes, uint64_t seed);

}  // namespace foc

#endif  // FOC_SEARCH_H_
