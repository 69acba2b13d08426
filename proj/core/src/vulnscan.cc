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

#include "foc/vulnscan.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "foc/parallel.h"
#include "foc/vector_ops.h"

namespace foc {

std::vector<VulnEntry> load_vuln_db(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  std::map<std::string, std::unordered_map<std::string, FunctionEmbedding>> files;
  std::vector<VulnEntry> db;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ": line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(where + ": " + e.what());
    }
    if (is_header_line(j)) continue;
    VulnEntry e;
    std::string emb_file;
    std::vector<std::string> vuln_ids, patched_ids;
    try {
      e.cve = j.at("cve").get<std::string>();
      e.library = j.value("library", "");
      emb_file = j.at("embeddings").get<std::string>();
      vuln_ids = j.at("vulnerable").get<std::vector<std::string>>();
      patched_ids = j.at("patched").get<std::vector<std::string>>();
      e.ground_truth = j.value("ground_truth", std::vector<std::string>{});
      e.patched_targets = j.value("patched_targets", std::vector<std::string>{});
      e.suspicious_files = j.value("suspicious_files", std::vector<std::string>{});
    } catch (const nlohmann::json::exception& ex) {
      throw IoError(where + ": " + ex.what());
    }
    const std::string resolved = (base / emb_file).string();
    if (!files.count(resolved)) {
      auto& by_id = files[resolved];
      for (auto& f : read_embeddings(resolved)) by_id.emplace(f.id, std::move(f));
    }
    const auto& by_id = files[resolved];
    auto take = [&](const std::vector<std::string>& ids, std::vector<FunctionEmbedding>& out) {
      for (const auto& id : ids) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) throw IoError(where + ": id '" + id + "' not in " + resolved);
        out.push_back(it->second);
      }
    };
    take(vuln_ids, e.vulnerable);
    take(patched_ids, e.patched);
    if (e.vulnerable.empty() || e.patched.empty())
      throw PreconditionError(where + ": entry needs at least one vulnerable and one patched function");
    db.push_back(std::move(e));
  }
  return db;
}

std::vector<DetectReport> detect(const std::vector<VulnEntry>& db, const EmbeddingIndex& target,
                                 int k) {
  if (db.empty()) throw PreconditionError("empty vulnerability database");
  if (target.empty()) throw PreconditionError("empty target index");
  if (k < 1) throw PreconditionError("k must be at least 1");

  // Per-binary sub-indexes, built once.
  std::map<std::string, std::vector<FunctionEmbedding>> by_file;
  for (const auto& e : target.entries()) by_file[e.meta.binary].push_back(e);
  std::map<std::string, EmbeddingIndex> file_index;
  for (auto& [file, entries] : by_file) file_index.emplace(file, EmbeddingIndex(entries));

  std::vector<DetectReport> reports(db.size());
  parallel_for(db.size(), [&](size_t n) {
    const VulnEntry& entry = db[n];
    DetectReport& rep = reports[n];
    rep.cve = entry.cve;
    rep.library = entry.library;
    const std::set<std::string> truth(entry.ground_truth.begin(), entry.ground_truth.end());
    std::vector<std::string> files = entry.suspicious_files;
    if (files.empty())
      for (const auto& [file, idx] : file_index) files.push_back(file);
    for (const auto& file : files) {
      const auto it = file_index.find(file);
      if (it == file_index.end()) {
        rep.diagnostics.push_back("no functions for suspicious file '" + file + "'; skipped");
        continue;
      }
      const EmbeddingIndex& idx = it->second;
      FileScan scan;
      scan.file = file;
      for (const auto& e : idx.entries()) scan.has_ground_truth |= truth.count(e.id) > 0;
      for (const auto& v : entry.vulnerable) {
        const auto hits = idx.query(v.vector, k);
        for (size_t r = 0; r < hits.size(); ++r) {
          if (!truth.count(hits[r].id)) continue;
          const int rank = static_cast<int>(r) + 1;
          if (!scan.best_rank || rank < *scan.best_rank) scan.best_rank = rank;
          scan.hit = true;
        }
      }
      if (scan.has_ground_truth) {
        ++rep.total;
        if (scan.hit) ++rep.found;
      }
      rep.files.push_back(std::move(scan));
    }
  });
  return reports;
}

std::string_view to_string(VulnLabel label) {
  return label == VulnLabel::kVulnerable ? "vulnerable" : "patched";
}

Distinction distinguish(const VulnEntry& entry, const Vector& target) {
  if (entry.vulnerable.empty() || entry.patched.empty())
    throw PreconditionError("entry needs vulnerable and patched functions");
  Distinction d;
  auto best = [&](const std::vector<FunctionEmbedding>& side) {
    double m = -2.0;
    for (const auto& e : side) m = std::max(m, cosine(e.vector, target));
    return m;
  };
  d.vulnerable_score = best(entry.vulnerable);
  d.patched_score = best(entry.patched);
  d.tie = d.vulnerable_score == d.patched_score;
  d.label = d.vulnerable_score > d.patched_score ? VulnLabel::kVulnerable : VulnLabel::kPatched;
  return d;
}

RetrievalReport known_function_retrieval(const EmbeddingIndex& known, const EmbeddingIndex& target) {
  std::set<GroupKey> known_keys;
  for (const auto& e : known.entries()) known_keys.insert(group_key(e.meta));
  std::vector<size_t> queries;
  for (size_t i = 0; i < target.size(); ++i)
    if (known_keys.count(group_key(target.entries()[i].meta))) queries.push_back(i);
  RetrievalReport rep;
  rep.queries = queries.size();
  if (queries.empty()) return rep;
  std::vector<RankedResult> ranked(queries.size());
  parallel_for(queries.size(), [&](size_t n) {
    const auto& q = target.entries()[queries[n]];
    const GroupKey key = group_key(q.meta);
    ranked[n].query_id = q.id;
    const auto hits = known.query(q.vector, 10);
    for (size_t r = 0; r < hits.size(); ++r) {
      if (group_key(known.entries()[*known.find(hits[r].id)].meta) == key) {
        ranked[n].rank = static_cast<int>(r) + 1;
        break;
      }
    }
  });
  rep.recall_at_1 = recall_at_k(ranked, 1);
  rep.recall_at_10 = recall_at_k(ranked, 10);
  return rep;
}

}  // namespace foc
