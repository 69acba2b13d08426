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

#ifndef FOC_VULNSCAN_H_
#define FOC_VULNSCAN_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "foc/embedding.h"
#include "foc/search.h"

namespace foc {

struct VulnEntry {
  std::string cve;
  std::string library;
  std::vector<FunctionEmbedding> vulnerable;
  std::vector<FunctionEmbedding> patched;
  // Target-index ids known to contain the vulnerable version.
  std::vector<std::string> ground_truth;
  // Target-index ids known to contain the patched version.
  std::vector<std::string> patched_targets;
  // Target binaries to scan; empty means every binary in the target index.
  std::vector<std::string> suspicious_files;
};

// Line-delimited entries:
//   {"cve", "library", "embeddings": <file relative to the DB>,
//    "vulnerable": [ids], "patched": [ids], "ground_truth": [target ids],
//    optional "patched_targets": [target ids], "suspicious_files": [binaries]}
// Throws IoError for unreadable files or missing ids and PreconditionError
// for entries lacking a vulnerable or patched embedding.
std::vector<VulnEntry> load_vuln_db(const std::string& path);

struct FileScan {
  std::string file;
  bool has_ground_truth = false;
  bool hit = false;
  std::optional<int> best_rank;  // best ground-truth rank over all vulnerable embeddings
};

struct DetectReport {
  std::string cve;
  std::string library;
  std::vector<FileScan> files;
  std::vector<std::string> diagnostics;
  int found = 0;  // x: ground-truth files with a top-k hit
  int total = 0;  // y: files holding a ground-truth function
};

// Ranks every vulnerable embedding against the functions of each suspicious
// file; a file is hit when a ground-truth function lands in the top k.
std::vector<DetectReport> detect(const std::vector<VulnEntry>& db, const EmbeddingIndex& target,
                                 int k = 10);

enum class VulnLabel { kVulnerable, kPatched };
std::string_view to_string(VulnLabel label);

struct Distinction {
  VulnLabel label = VulnLabel::kPatched;
  bool tie = false;
  double vulnerable_score = 0.0;  // max cosine to the vulnerable set
  double patched_score = 0.0;
};

// The closer side by max-similarity wins; an exact tie goes to patched.
Distinction distinguish(const VulnEntry& entry, const Vector& target);

struct RetrievalReport {
  size_t queries = 0;
  double recall_at_1 = 0.0;
  double recall_at_10 = 0.0;
};

// Known-function retrieval: every target whose group key also occurs in
// `known` queries `known`; success is a same-group function in the top k.
RetrievalReport known_function_retrieval(const EmbeddingIndex& known, const EmbeddingIndex& target);

}  // namespace foc

#endif  // FOC_VULNSCAN_H_
