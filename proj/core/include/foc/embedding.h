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

#ifndef FOC_EMBEDDING_H_
#define FOC_EMBEDDING_H_

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "foc/common.h"
#include "foc/output_header.h"
#include "foc/record.h"

namespace foc {

// Build and identity fields copied from the source record.
struct EmbeddingMeta {
  std::string project;
  std::string binary;
  std::string source_file;
  std::string name;
  Arch arch = Arch::kX86;
  int bits = 64;
  std::string compiler;
  std::string compiler_version;
  Opt opt = Opt::kO0;

  bool operator==(const EmbeddingMeta&) const = default;
};

EmbeddingMeta meta_of(const FunctionRecord& record);
GroupKey group_key(const EmbeddingMeta& meta);
nlohmann::json meta_to_json(const EmbeddingMeta& meta);
EmbeddingMeta meta_from_json(const nlohmann::json& j);

struct FunctionEmbedding {
  std::string id;
  EmbeddingMeta meta;
  Vector vector;
};

// One {"id", "meta", "vector"} object per line, after an optional header.
void write_embeddings(std::ostream& out, const std::vector<FunctionEmbedding>& embeddings,
                      const OutputHeader* header = nullptr);
void write_embeddings(const std::string& path, const std::vector<FunctionEmbedding>& embeddings,
                      const OutputHeader* header = nullptr);
// Throws IoError on unreadable files and malformed lines.
std::vector<FunctionEmbedding> read_embeddings(std::istream& in);
std::vector<FunctionEmbedding> read_embeddings(const std::string& path);

}  // namespace foc

#endif  // FOC_EMBEDDING_H_
