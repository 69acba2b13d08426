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

#ifndef FOC_OUTPUT_HEADER_H_
#define FOC_OUTPUT_HEADER_H_

#include <map>
#include <string>

#include <nlohmann/json.hpp>

namespace foc {

// Run metadata written at the top of every output file. Line-delimited JSON
// files carry it as a first line of the form {"header": {...}}; text reports
// carry it as "# key: value" comment lines.
struct OutputHeader {
  std::string tool_version;
  std::string checkpoint_hash = "none";
  std::map<std::string, std::string> config;

  nlohmann::json to_json() const;
  std::string to_json_line() const;
  std::string to_comment_block() const;
  static OutputHeader from_json(const nlohmann::json& j);
};

OutputHeader default_header();

// True for a parsed line that is an output header rather than a data row.
bool is_header_line(const nlohmann::json& j);

}  // namespace foc

#endif  // FOC_OUTPUT_HEADER_H_
