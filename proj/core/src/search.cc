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

#include "foc/search.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "foc/binary_io.h"
#include "foc/parallel.h"
#include "foc/vector_ops.h"

namespace foc {
namespace {

constexpr std::string_view kIndexMagic = "FOCIDX01";

bool better(const Hit& a, const Hit& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

}  // namespace

double compare(const FunctionEmbedding& a, const FunctionEmbedding& b) {
  return cosine(a.vector, b.vector);
}

EmbeddingIndex::EmbeddingIndex(std::vector<FunctionEmbedding> entries, OutputHeader header)
    : entries_(std::move(entries)), header_(std::move(header)) {
  const Eigen::Index dim = entries_.empty() ? 0 : entries_.front().vector.size();
  unit_.resize(static_cast<Eigen::Index>(entries_.size()), dim);
  for (size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.vector.size() != dim)
      throw PreconditionError("embedding '" + e.id + "' has dimension " +
                              std::to_string(e.vector.size()) + ", expected " + std::to_string(dim));
    const double norm = e.vector.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw PreconditionError("embedding '" + e.id + "' has zero or non-finite norm");
    if (!by_id_.emplace(e.id, i).second)
      throw PreconditionError("duplicate embedding id '" + e.id + "'");
    unit_.row(static_cast<Eigen::Index>(i)) = e.vector.transpose() / norm;
  }
}

std::optional<size_t> EmbeddingIndex::find(std::string_view id) const {
  const auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::vector<Hit> EmbeddingIndex::query(const Vector& q, int k, std::string_view self_id,
                                       bool exclude_self) const {
  if (k < 1) throw PreconditionError("k must be at least 1");
  if (entries_.empty()) throw PreconditionError("query against an empty index");
  if (q.size() != unit_.cols()) throw PreconditionError("query dimension does not match the index");
  const double norm = q.norm();
  if (!(norm > 0.0)) throw PreconditionError("cosine undefined for a zero vector");
  const Vector scores = unit_ * (q / norm);
  std::vector<Hit> hits;
  hits.reserve(entries_.size());
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (exclude_self && entries_[i].id == self_id) continue;
    hits.push_back({entries_[i].id, scores[static_cast<Eigen::Index>(i)]});
  }
  const size_t keep = std::min<size_t>(static_cast<size_t>(k), hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<long>(keep), hits.end(), better);
  hits.resize(keep);
  return hits;
}

std::string EmbeddingIndex::serialize() const {
  BinaryWriter w;
  w.raw(kIndexMagic);
  w.u32(kVersion);
  w.str(header_.to_json_line());
  w.u64(entries_.size());
  w.u32(static_cast<uint32_t>(unit_.cols()));
  for (const auto& e : entries_) {
    w.str(e.id);
    w.str(meta_to_json(e.meta).dump());
    for (Eigen::Index c = 0; c < e.vector.size(); ++c) w.f64(e.vector[c]);
  }
  return w.take();
}

EmbeddingIndex EmbeddingIndex::parse(std::string_view bytes) {
  BinaryReader r(bytes);
  if (r.raw(kIndexMagic.size()) != kIndexMagic) throw IoError("not an embedding index");
  if (const uint32_t v = r.u32(); v != kVersion)
    throw IoError("unsupported index version " + std::to_string(v));
  OutputHeader header;
  try {
    header = OutputHeader::from_json(nlohmann::json::parse(r.str()));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad index header: ") + e.what());
  }
  const uint64_t count = r.u64();
  const uint32_t dim = r.u32();
  if (count > bytes.size()) throw IoError("index entry count larger than file");
  std::vector<FunctionEmbedding> entries;
  entries.reserve(static_cast<size_t>(count));
  for (uint64_t i = 0; i < count; ++i) {
    FunctionEmbedding e;
    e.id = r.str();
    try {
      e.meta = meta_from_json(nlohmann::json::parse(r.str()));
    } catch (const nlohmann::json::exception& ex) {
      throw IoError(std::string("bad index metadata: ") + ex.what());
    }
    e.vector.resize(dim);
    for (uint32_t c = 0; c < dim; ++c) e.vector[c] = r.f64();
    entries.push_back(std::move(e));
  }
  if (!r.done()) throw IoError("trailing bytes in index");
  try {
    return EmbeddingIndex(std::move(entries), std::move(header));
  } catch (const PreconditionError& e) {
    throw IoError(std::string("invalid index: ") + e.what());
  }
}

void EmbeddingIndex::save(const std::string& path) const { write_file(path, serialize()); }

EmbeddingIndex EmbeddingIndex::load(const std::string& path) {
  try {
    return parse(read_file(path));
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::string_view to_string(SubTask task) {
  switch (task) {
    case SubTask::kXO: return "XO";
    case SubTask::kXC: return "XC";
    case SubTask::kXCXB: return "XC+XB";
    case SubTask::kXA: return "XA";
    case SubTask::kXM: return "XM";
  }
  return "?";
}

std::optional<SubTask> parse_subtask(std::string_view s) {
  for (SubTask t : {SubTask::kXO, SubTask::kXC, SubTask::kXCXB, SubTask::kXA, SubTask::kXM})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

bool satisfies(SubTask task, const EmbeddingMeta& q, const EmbeddingMeta& p) {
  const bool same_compiler = q.compiler == p.compiler;
  const bool same_version = q.compiler_version == p.compiler_version;
  const bool same_arch = q.arch == p.arch;
  const bool same_bits = q.bits == p.bits;
  const bool same_opt = q.opt == p.opt;
  switch (task) {
    case SubTask::kXO:
      return same_compiler && same_version && same_arch && same_bits && !same_opt;
    case SubTask::kXC:
      return !same_compiler && same_arch && same_bits;
    case SubTask::kXCXB:
      return !same_compiler && same_arch && !same_bits;
    case SubTask::kXA:
      return !same_arch && !same_bits;
    case SubTask::kXM:
      return !same_compiler && !same_version && !same_opt && !same_arch && !same_bits;
  }
  return false;
}

PoolSet build_pools(const std::vector<FunctionEmbedding>& embeddings, const PoolSpec& spec) {
  if (spec.pool_size < 2) throw PreconditionError("pool size must be at least 2");
  PoolSet out;
  out.spec = spec;
  std::map<GroupKey, std::vector<size_t>> groups;
  std::vector<const std::vector<size_t>*> group_of(embeddings.size());
  for (size_t i = 0; i < embeddings.size(); ++i) groups[group_key(embeddings[i].meta)].push_back(i);
  for (const auto& [key, members] : groups)
    for (size_t i : members) group_of[i] = &members;

  std::mt19937_64 rng(spec.seed);
  const size_t needed = static_cast<size_t>(spec.pool_size - 1);
  for (size_t qi = 0; qi < embeddings.size(); ++qi) {
    const auto& query = embeddings[qi];
    const auto& members = *group_of[qi];
    std::vector<size_t> candidates;
    for (size_t m : members)
      if (m != qi && satisfies(spec.task, query.meta, embeddings[m].meta)) candidates.push_back(m);
    if (candidates.empty()) {
      out.skipped.push_back(query.id + ": no positive satisfies " + std::string(to_string(spec.task)));
      continue;
    }
    const size_t others = embeddings.size() - members.size();
    if (others < needed) {
      out.skipped.push_back(query.id + ": " + std::to_string(others) + " negatives available, " +
                            std::to_string(needed) + " needed");
      continue;
    }
    Pool pool;
    pool.query = query.id;
    pool.positive = embeddings[candidates[std::uniform_int_distribution<size_t>(
                                   0, candidates.size() - 1)(rng)]].id;
    std::unordered_set<size_t> own(members.begin(), members.end());
    if (2 * needed > others) {
      std::vector<size_t> pool_of_others;
      pool_of_others.reserve(others);
      for (size_t i = 0; i < embeddings.size(); ++i)
        if (!own.count(i)) pool_of_others.push_back(i);
      for (size_t k = 0; k < needed; ++k) {
        std::swap(pool_of_others[k],
                  pool_of_others[std::uniform_int_distribution<size_t>(k, others - 1)(rng)]);
        pool.negatives.push_back(embeddings[pool_of_others[k]].id);
      }
    } else {
      std::unordered_set<size_t> taken;
      std::uniform_int_distribution<size_t> any(0, embeddings.size() - 1);
      while (pool.negatives.size() < needed) {
        const size_t i = any(rng);
        if (own.count(i) || !taken.insert(i).second) continue;
        pool.negatives.push_back(embeddings[i].id);
      }
    }
    out.pools.push_back(std::move(pool));
  }
  return out;
}

void write_pools(std::ostream& out, const PoolSet& pools, const OutputHeader& header) {
  OutputHeader h = header;
  h.config["subtask"] = std::string(to_string(pools.spec.task));
  h.config["pool_size"] = std::to_string(pools.spec.pool_size);
  h.config["pool_seed"] = std::to_string(pools.spec.seed);
  out << h.to_json_line() << '\n';
  for (const auto& p : pools.pools)
    out << nlohmann::json{{"query", p.query}, {"positive", p.positive}, {"negatives", p.negatives}}
               .dump()
        << '\n';
  for (const auto& s : pools.skipped) out << nlohmann::json{{"skipped", s}}.dump() << '\n';
}

void write_pools(const std::string& path, const PoolSet& pools, const OutputHeader& header) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_pools(out, pools, header);
  if (!out) throw IoError("cannot write " + path);
}

PoolSet read_pools(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  PoolSet out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (is_header_line(j)) {
        const OutputHeader h = OutputHeader::from_json(j);
        if (auto it = h.config.find("subtask"); it != h.config.end())
          if (auto t = parse_subtask(it->second)) out.spec.task = *t;
        if (auto it = h.config.find("pool_size"); it != h.config.end())
          out.spec.pool_size = std::stoi(it->second);
        if (auto it = h.config.find("pool_seed"); it != h.config.end())
          out.spec.seed = std::stoull(it->second);
      } else if (j.contains("skipped")) {
        out.skipped.push_back(j.at("skipped").get<std::string>());
      } else {
        out.pools.push_back({j.at("query").get<std::string>(), j.at("positive").get<std::string>(),
                             j.at("negatives").get<std::vector<std::string>>()});
      }
    } catch (const std::exception& e) {
      throw IoError(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<PoolOutcome> evaluate_pools(const PoolSet& pools, const EmbeddingIndex& index) {
  auto locate = [&](const std::string& id) {
    const auto at = index.find(id);
    if (!at) throw PreconditionError("pool id '" + id + "' is not in the index");
    return *at;
  };
  std::vector<PoolOutcome> out(pools.pools.size());
  parallel_for(pools.pools.size(), [&](size_t p) {
    const Pool& pool = pools.pools[p];
    const auto q = index.unit(locate(pool.query));
    PoolOutcome& o = out[p];
    o.ranked.query_id = pool.query;
    o.positive_score = q.dot(index.unit(locate(pool.positive)));
    int rank = 1;
    for (const auto& id : pool.negatives) {
      const double s = q.dot(index.unit(locate(id)));
      o.negative_scores.push_back(s);
      if (s > o.positive_score || (s == o.positive_score && id < pool.positive)) ++rank;
    }
    o.ranked.rank = rank;
  });
  return out;
}

BcsdReport summarize_pools(const PoolSet& pools, const std::vector<PoolOutcome>& outcomes,
                           const std::vector<int>& ks) {
  BcsdReport report;
  report.queries = outcomes.size();
  report.skipped = pools.skipped.size();
  if (outcomes.empty()) throw PreconditionError("no pools to evaluate");
  std::vector<ScoredPair> scored;
  std::vector<RankedResult> ranked;
  for (const auto& o : outcomes) {
    scored.push_back({o.positive_score, true});
    for (double s : o.negative_scores) scored.push_back({s, false});
    ranked.push_back(o.ranked);
  }
  report.auc = auc(scored);
  for (int k : ks) {
    report.recall[k] = recall_at_k(ranked, k);
    report.mrr[k] = mrr_at_k(ranked, k);
  }
  return report;
}

std::vector<SweepRow> pool_sweep(const std::vector<FunctionEmbedding>& embeddings,
                                 const std::vector<int>& sizes, uint64_t seed) {
  for (int s : sizes)
    if (s < 2) throw PreconditionError("pool sizes must be at least 2");
  const EmbeddingIndex index(embeddings);
  std::vector<SweepRow> rows;
  for (int size : sizes) {
    const PoolSet pools = build_pools(embeddings, {SubTask::kXM, size, seed});
    SweepRow row{size, pools.pools.size(), 0.0};
    if (!pools.pools.empty()) {
      std::vector<RankedResult> ranked;
      for (const auto& o : evaluate_pools(pools, index)) ranked.push_back(o.ranked);
      row.recall_at_1 = recall_at_k(ranked, 1);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace foc
