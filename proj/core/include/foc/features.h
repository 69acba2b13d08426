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

#ifndef FOC_FEATURES_H_
#define FOC_FEATURES_H_

#include <vector>

#include "foc/common.h"
#include "foc/crypto_registry.h"
#include "foc/opcode_map.h"
#include "foc/record.h"

namespace foc {

// [General, Arithmetic, Logic, Branch] counts, then the two opcode bags.
inline constexpr int kBlockFeatureDim =
    4 + OpcodeCategoryMap::kGeneralVocabSize + OpcodeCategoryMap::kArithVocabSize;
// [blocks, edges, callees, unique callees] then the 61-slot keyword bag.
inline constexpr int kCryptoFeatureDim = 65;

// Attributed control-flow graph: one kBlockFeatureDim row per basic block.
struct Acfg {
  Matrix node_features;
  std::vector<Edge> edges;

  int num_nodes() const { return static_cast<int>(node_features.rows()); }
};

Vector block_features(const BasicBlock& opcodes, const OpcodeCategoryMap& map, Arch arch);

// Throws PreconditionError for records without blocks or with bad edges.
Acfg build_acfg(const FunctionRecord& record, const OpcodeCategoryMap& map);

// Callees with an empty name are unresolved indirect calls and are ignored.
Vector crypto_features(const FunctionRecord& record, const CryptoRegistry& registry);

}  // namespace foc

#endif  // FOC_FEATURES_H_
