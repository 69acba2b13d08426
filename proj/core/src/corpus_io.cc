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

#include "foc/corpus_io.h"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <unordered_set>

#include "foc/common.h"
#include "foc/parallel.h"

namespace foc {
namespace {

using nlohmann::json;

const std::string& require_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw PreconditionError(std::string("missing field '") + key + "'");
  if (!it->is_string())
    throw PreconditionError(std::string("field '") + key + "' must be a string");
  return it->get_ref<const std::string&>();
}

const json& require_array(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw PreconditionError(std::string("missing field '") + key + "'");
  if (!it->is_array())
    throw PreconditionError(std::string("field '") + key + "' must be an array");
  return *it;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

FunctionRecord record_from_json(const json& j) {
  if (!j.is_object()) throw PreconditionError("record must be an object");
  FunctionRecord r;
  r.id = require_string(j, "id");
  r.project = require_string(j, "project");
  r.binary = require_string(j, "binary");
  r.source_file = require_string(j, "source_file");
  r.name = require_string(j, "name");

  const auto arch = parse_arch(require_string(j, "arch"));
  if (!arch) throw PreconditionError("unknown arch '" + j["arch"].get<std::string>() + "'");
  r.arch = *arch;

  auto bits = j.find("bits");
  if (bits == j.end() || !bits->is_number_integer())
    throw PreconditionError("field 'bits' must be an integer");
  r.bits = bits->get<int>();

  r.compiler = require_string(j, "compiler");
  r.compiler_version = require_string(j, "compiler_version");
  const auto opt = parse_opt(require_string(j, "opt"));
  if (!opt) throw PreconditionError("unknown opt '" + j["opt"].get<std::string>() + "'");
  r.opt = *opt;
  r.pseudo_code = require_string(j, "pseudo_code");

  for (const auto& block : require_array(j, "blocks")) {
    if (!block.is_array()) throw PreconditionError("each block must be an array of strings");
    BasicBlock ops;
    ops.reserve(block.size());
    for (const auto& op : block) {
      if (!op.is_string()) throw PreconditionError("opcodes must be strings");
      ops.push_back(op.get<std::string>());
    }
    r.blocks.push_back(std::move(ops));
  }
  for (const auto& edge : require_array(j, "edges")) {
    if (!edge.is_array() || edge.size() != 2 || !edge[0].is_number_integer() ||
        !edge[1].is_number_integer())
      throw PreconditionError("each edge must be a two-element integer array");
    r.edges.emplace_back(edge[0].get<int>(), edge[1].get<int>());
  }
  for (const auto& callee : require_array(j, "callees")) {
    if (!callee.is_string()) throw PreconditionError("callees must be strings");
    r.callees.push_back(callee.get<std::string>());
  }
  if (auto s = j.find("summary"); s != j.end() && !s->is_null()) {
    if (!s->is_string()) throw PreconditionError("field 'summary' must be a string");
    r.summary = s->get<std::string>();
  }
  if (auto why = validate(r); !why.empty()) throw PreconditionError(why);
  return r;
}

json record_to_json(const FunctionRecord& r) {
  json edges = json::array();
  for (const auto& [a, b] : r.edges) edges.push_back({a, b});
  json j = {{"id", r.id},
            {"project", r.project},
            {"binary", r.binary},
            {"source_file", r.source_file},
            {"name", r.name},
            {"arch", to_string(r.arch)},
            {"bits", r.bits},
            {"compiler", r.compiler},
            {"compiler_version", r.compiler_version},
            {"opt", to_string(r.opt)},
            {"pseudo_code", r.pseudo_code},
            {"blocks", r.blocks},
            {"edges", edges},
            {"callees", r.callees}};
  if (r.summary) j["summary"] = *r.summary;
  return j;
}

IngestResult ingest_stream(std::istream& in, const std::string& source_name) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));

  struct Parsed {
    std::optional<FunctionRecord> record;
    std::string error;
    bool ignore = false;
  };
  std::vector<Parsed> parsed(lines.size());
  parallel_for(lines.size(), [&](size_t i) {
    const auto& line = lines[i];
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      parsed[i].ignore = true;
      return;
    }
    try {
      const json j = json::parse(line);
      if (is_header_line(j)) {
        parsed[i].ignore = true;
        return;
      }
      parsed[i].record = record_from_json(j);
    } catch (const json::exception& e) {
      parsed[i].error = std::string("invalid JSON: ") + e.what();
    } catch (const Error& e) {
      parsed[i].error = e.what();
    }
  });

  IngestResult result;
  result.corpus.provenance = {source_name, utc_now()};
  std::unordered_set<std::string> seen;
  for (size_t i = 0; i < parsed.size(); ++i) {
    auto& p = parsed[i];
    if (p.ignore) continue;
    if (p.record && !seen.insert(p.record->id).second) {
      p.error = "duplicate id '" + p.record->id + "'";
      p.record.reset();
    }
    if (!p.record) {
      ++result.skipped;
      result.diagnostics.push_back("line " + std::to_string(i + 1) + ": " + p.error);
      continue;
    }
    result.corpus.records.push_back(std::move(*p.record));
  }
  return result;
}

IngestResult ingest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file '" + path + "'");
  return ingest_stream(in, path);
}

void write_corpus(std::ostream& out, const Corpus& corpus, const OutputHeader* header) {
  if (header) out << header->to_json_line() << "\n";
  for (const auto& r : corpus.records) out << record_to_json(r).dump() << "\n";
}

void write_corpus(const std::string& path, const Corpus& corpus, const OutputHeader* header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_corpus(out, corpus, header);
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace foc
