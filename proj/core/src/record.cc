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

#include "foc/record.h"

#include <array>

namespace foc {
namespace {

constexpr std::array<std::string_view, 3> kArchNames = {"x86", "arm", "mips"};
constexpr std::array<std::string_view, 5> kOptNames = {"O0", "O1", "O2", "O3",
                                                       "Os"};

}  // namespace

std::string_view to_string(Arch arch) {
  return kArchNames[static_cast<size_t>(arch)];
}

std::string_view to_string(Opt opt) {
  return kOptNames[static_cast<size_t>(opt)];
}

std::optional<Arch> parse_arch(std::string_view s) {
  for (size_t i = 0; i < kArchNames.size(); ++i)
    if (kArchNames[i] == s) return static_cast<Arch>(i);
  return std::nullopt;
}

std::optional<Opt> parse_opt(std::string_view s) {
  for (size_t i = 0; i < kOptNames.size(); ++i)
    if (kOptNames[i] == s) return static_cast<Opt>(i);
  return std::nullopt;
}

std::string validate(const FunctionRecord& record) {
  if (record.id.empty()) return "empty id";
  if (record.bits != 32 && record.bits != 64)
    return "bits must be 32 or 64, got " + std::to_string(record.bits);
  const int n = static_cast<int>(record.blocks.size());
  for (const auto& [from, to] : record.edges) {
    if (from < 0 || from >= n || to < 0 || to >= n)
      return "edge (" + std::to_string(from) + ", " + std::to_string(to) +
             ") out of range for " + std::to_string(n) + " blocks";
  }
  return {};
}

}  // namespace foc
