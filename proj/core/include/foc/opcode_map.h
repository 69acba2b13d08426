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

#ifndef FOC_OPCODE_MAP_H_
#define FOC_OPCODE_MAP_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "foc/record.h"

namespace foc {

enum class OpcodeCategory { kGeneral, kArithmetic, kLogic, kBranch };

std::string_view to_string(OpcodeCategory category);
std::optional<OpcodeCategory> parse_opcode_category(std::string_view s);

// Per-architecture mnemonic categories plus the two frequency vocabularies
// that back the block-level bag-of-opcodes slots. Every mnemonic belongs to
// exactly one category; unmapped mnemonics count as General but never take a
// vocabulary slot. Empty vocabulary entries are reserved, unused slots.
class OpcodeCategoryMap {
 public:
  static constexpr int kGeneralVocabSize = 120;
  static constexpr int kArithVocabSize = 76;

  OpcodeCategoryMap();

  // Throws ConfigError if the mnemonic already has a different category.
  void add(Arch arch, std::string_view opcode, OpcodeCategory category);
  // Width suffix stripped during normalization (e.g. ".w" on ARM).
  void add_strip_suffix(Arch arch, std::string_view suffix);

  std::string normalize(Arch arch, std::string_view opcode) const;
  // Category of an already-normalized mnemonic; nullopt when unmapped.
  std::optional<OpcodeCategory> lookup(Arch arch, std::string_view normalized) const;
  OpcodeCategory category(Arch arch, std::string_view normalized) const {
    return lookup(arch, normalized).value_or(OpcodeCategory::kGeneral);
  }
  // Mnemonics with the given category on any architecture, sorted.
  std::vector<std::string> opcodes_in(OpcodeCategory category) const;
  std::vector<std::string> opcodes_in(Arch arch, OpcodeCategory category) const;

  const std::vector<std::string>& general_vocab() const { return general_vocab_; }
  const std::vector<std::string>& arith_vocab() const { return arith_vocab_; }
  // Slot of a mnemonic, if it has one. The caller checks the category.
  std::optional<int> general_slot(std::string_view op) const;
  std::optional<int> arith_slot(std::string_view op) const;
  bool has_vocab() const;

  // Pads each list with reserved slots; throws ConfigError when a list is too
  // long, holds duplicates, or names a mnemonic outside its category.
  void set_vocab(std::vector<std::string> general, std::vector<std::string> arith);

  // Category file: arch<TAB>opcode<TAB>category, where category is one of
  // General, Arithmetic, Logic, Branch, or Suffix for a width suffix rule.
  std::string to_file_text() const;
  static OpcodeCategoryMap from_file_text(std::string_view text);
  static OpcodeCategoryMap load(const std::string& path);

  // Vocabulary text: one "general<TAB>op" or "arith<TAB>op" line per slot.
  std::string vocab_text() const;
  void set_vocab_text(std::string_view text);

 private:
  std::array<std::unordered_map<std::string, OpcodeCategory>, 3> categories_;
  std::array<std::vector<std::string>, 3> suffixes_;
  std::vector<std::string> general_vocab_;
  std::vector<std::string> arith_vocab_;
  std::unordered_map<std::string, int> general_index_;
  std::unordered_map<std::string, int> arith_index_;
};

// Shipped x86/ARM/MIPS maps covering common mnemonics, with empty vocabularies.
const OpcodeCategoryMap& default_opcode_map();

// Fills both vocabularies with the most frequent mapped General and
// Arithmetic mnemonics of the corpus (ties broken lexicographically).
OpcodeCategoryMap build_vocab(const Corpus& corpus, OpcodeCategoryMap map);

}  // namespace foc

#endif  // FOC_OPCODE_MAP_H_
