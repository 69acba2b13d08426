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

#include "foc/features.h"

#include <set>
#include <string>

namespace foc {

Vector block_features(const BasicBlock& opcodes, const OpcodeCategoryMap& map, Arch arch) {
  constexpr int kGeneralBase = 4;
  constexpr int kArithBase = 4 + OpcodeCategoryMap::kGeneralVocabSize;
  Vector v = Vector::Zero(kBlockFeatureDim);
  for (const auto& raw : opcodes) {
    const std::string op = map.normalize(arch, raw);
    const auto category = map.lookup(arch, op);
    const OpcodeCategory effective = category.value_or(OpcodeCategory::kGeneral);
    v[static_cast<int>(effective)] += 1.0;
    if (!category) continue;
    if (effective == OpcodeCategory::kGeneral) {
      if (auto slot = map.general_slot(op)) v[kGeneralBase + *slot] += 1.0;
    } else if (effective == OpcodeCategory::kArithmetic) {
      if (auto slot = map.arith_slot(op)) v[kArithBase + *slot] += 1.0;
    }
  }
  return v;
}

Acfg build_acfg(const FunctionRecord& record, const OpcodeCategoryMap& map) {
  if (record.blocks.empty())
    throw PreconditionError("record '" + record.id + "' has no basic blocks");
  if (auto why = validate(record); !why.empty())
    throw PreconditionError("record '" + record.id + "': " + why);
  Acfg acfg;
  acfg.node_features.resize(static_cast<Eigen::Index>(record.blocks.size()), kBlockFeatureDim);
  for (size_t i = 0; i < record.blocks.size(); ++i)
    acfg.node_features.row(static_cast<Eigen::Index>(i)) =
        block_features(record.blocks[i], map, record.arch).transpose();
  acfg.edges = record.edges;
  return acfg;
}

Vector crypto_features(const FunctionRecord& record, const CryptoRegistry& registry) {
  Vector v = Vector::Zero(4 + static_cast<Eigen::Index>(registry.vector_size()));
  std::set<std::string> unique;
  int callees = 0;
  for (const auto& c : record.callees) {
    if (c.empty()) continue;
    ++callees;
    unique.insert(c);
  }
  v[0] = static_cast<double>(record.blocks.size());
  v[1] = static_cast<double>(record.edges.size());
  v[2] = callees;
  v[3] = static_cast<double>(unique.size());
  const auto bow = keyword_bow(record.pseudo_code, registry);
  for (size_t k = 0; k < bow.size(); ++k) v[4 + static_cast<Eigen::Index>(k)] = bow[k];
  return v;
}

}  // namespace foc
