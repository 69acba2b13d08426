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

#ifndef FOC_RECORD_H_
#define FOC_RECORD_H_

#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace foc {

enum class Arch { kX86, kArm, kMips };
enum class Opt { kO0, kO1, kO2, kO3, kOs };

std::string_view to_string(Arch arch);
std::string_view to_string(Opt opt);
std::optional<Arch> parse_arch(std::string_view s);
std::optional<Opt> parse_opt(std::string_view s);

using BasicBlock = std::vector<std::string>;
using Edge = std::pair<int, int>;

// One decompiled function as it arrives from the extraction pipeline.
struct FunctionRecord {
  std::string id;
  std::string project;
  std::string binary;
  std::string source_file;
  std::string name;
  Arch arch = Arch::kX86;
  int bits = 64;
  std::string compiler;
  std::string compiler_version;
  Opt opt = Opt::kO0;
  std::string pseudo_code;
  std::vector<BasicBlock> blocks;
  std::vector<Edge> edges;
  std::vector<std::string> callees;
  std::optional<std::string> summary;

  bool operator==(const FunctionRecord&) const = default;
};

// Functions sharing this key are treated as the same source function.
struct GroupKey {
  std::string project;
  std::string source_file;
  std::string name;

  auto operator<=>(const GroupKey&) const = default;
};

inline GroupKey group_key(const FunctionRecord& r) {
  return {r.project, r.source_file, r.name};
}

// Returns an empty string when the record satisfies its invariants, otherwise
// a description of the first violation.
std::string validate(const FunctionRecord& record);

struct Provenance {
  std::string source_path;
  std::string ingested_at;  // ISO-8601, UTC
};

struct Corpus {
  std::vector<FunctionRecord> records;
  Provenance provenance;
};

}  // namespace foc

#endif  // FOC_RECORD_H_
