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

#include "foc/output_header.h"

#include <sstream>

#include "foc/common.h"

namespace foc {

nlohmann::json OutputHeader::to_json() const {
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  return {{"header",
           {{"tool", "foc"},
            {"version", tool_version},
            {"checkpoint", checkpoint_hash},
            {"config", cfg}}}};
}

std::string OutputHeader::to_json_line() const { return to_json().dump(); }

std::string OutputHeader::to_comment_block() const {
  std::ostringstream out;
  out << "# tool: foc " << tool_version << "\n";
  out << "# checkpoint: " << checkpoint_hash << "\n";
  for (const auto& [k, v] : config) out << "# config." << k << ": " << v << "\n";
  return out.str();
}

OutputHeader OutputHeader::from_json(const nlohmann::json& j) {
  const auto& h = j.at("header");
  OutputHeader out;
  out.tool_version = h.value("version", "");
  out.checkpoint_hash = h.value("checkpoint", "none");
  if (h.contains("config"))
    for (const auto& [k, v] : h["config"].items())
      out.config[k] = v.get<std::string>();
  return out;
}

OutputHeader default_header() {
  OutputHeader h;
  h.tool_version = std::string(kToolVersion);
  return h;
}

bool is_header_line(const nlohmann::json& j) {
  return j.is_object() && j.size() == 1 && j.contains("header");
}

}  // namespace foc
