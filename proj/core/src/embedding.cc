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

#include "foc/embedding.h"

#include <fstream>
#include <istream>
#include <ostream>

namespace foc {

EmbeddingMeta meta_of(const FunctionRecord& r) {
  return {r.project, r.binary, r.source_file, r.name,          r.arch,
          r.bits,    r.compiler, r.compiler_version, r.opt};
}

GroupKey group_key(const EmbeddingMeta& m) { return {m.project, m.source_file, m.name}; }

nlohmann::json meta_to_json(const EmbeddingMeta& m) {
  return {{"project", m.project},
          {"binary", m.binary},
          {"source_file", m.source_file},
          {"name", m.name},
          {"arch", to_string(m.arch)},
          {"bits", m.bits},
          {"compiler", m.compiler},
          {"compiler_version", m.compiler_version},
          {"opt", to_string(m.opt)}};
}

EmbeddingMeta meta_from_json(const nlohmann::json& j) {
  EmbeddingMeta m;
  m.project = j.value("project", "");
  m.binary = j.value("binary", "");
  m.source_file = j.value("source_file", "");
  m.name = j.value("name", "");
  const auto arch = parse_arch(j.value("arch", "x86"));
  const auto opt = parse_opt(j.value("opt", "O0"));
  if (!arch || !opt) throw IoError("bad arch or opt in embedding metadata");
  m.arch = *arch;
  m.opt = *opt;
  m.bits = j.value("bits", 64);
  m.compiler = j.value("compiler", "");
  m.compiler_version = j.value("compiler_version", "");
  return m;
}

void write_embeddings(std::ostream& out, const std::vector<FunctionEmbedding>& embeddings,
                      const OutputHeader* header) {
  if (header) out << header->to_json_line() << '\n';
  for (const auto& e : embeddings) {
    nlohmann::json j = {{"id", e.id}, {"meta", meta_to_json(e.meta)}};
    j["vector"] = std::vector<double>(e.vector.data(), e.vector.data() + e.vector.size());
    out << j.dump() << '\n';
  }
}

void write_embeddings(const std::string& path, const std::vector<FunctionEmbedding>& embeddings,
                      const OutputHeader* header) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_embeddings(out, embeddings, header);
  if (!out) throw IoError("cannot write " + path);
}

std::vector<FunctionEmbedding> read_embeddings(std::istream& in) {
  std::vector<FunctionEmbedding> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (is_header_line(j)) continue;
      FunctionEmbedding e;
      e.id = j.at("id").get<std::string>();
      e.meta = meta_from_json(j.value("meta", nlohmann::json::object()));
      const auto v = j.at("vector").get<std::vector<double>>();
      e.vector = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw IoError("embeddings line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return out;
}

std::vector<FunctionEmbedding> read_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  try {
    return read_embeddings(in);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace foc
