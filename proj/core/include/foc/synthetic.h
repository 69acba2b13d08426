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

#ifndef FOC_SYNTHETIC_H_
#define FOC_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "foc/record.h"

namespace foc {

// Generator for a controlled similarity benchmark. Every group is one
// abstract function; its variants are renderings under different build
// profiles with category-preserving opcode substitution, block permutation,
// block splitting, instruction insertion/deletion, statement dropping, and
// local-variable renaming. CFG shapes come from a small shared template set
// and crypto keywords from a shared class list, so only the identifiers,
// constants, and opcode mix tell groups apart.
struct SyntheticConfig {
  int groups = 200;
  int variants = 4;
  int train_variants = 2;     // variants [0, train_variants) go to `train`
  int distractor_groups = 0;  // extra groups rendered with held-out variants only
  uint64_t seed = 2026;
  double substitution_rate = 0.15;
  double indel_rate = 0.05;
  double split_rate = 0.1;
  double drop_rate = 0.1;
};

// Build profile of variant v; variants 0/1 and 2/3 differ on every axis.
struct BuildProfile {
  std::string compiler;
  std::string compiler_version;
  Opt opt;
  Arch arch;
  int bits;
};
BuildProfile build_profile(int variant);

struct SyntheticBenchmark {
  Corpus train;
  Corpus heldout;
  Corpus distractors;
  // (source code, pseudo-code) for every training record.
  std::vector<std::pair<std::string, std::string>> source_pairs;
};

SyntheticBenchmark make_synthetic_benchmark(const SyntheticConfig& config);

}  // namespace foc

#endif  // FOC_SYNTHETIC_H_
