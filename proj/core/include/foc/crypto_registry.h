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

#ifndef FOC_CRYPTO_REGISTRY_H_
#define FOC_CRYPTO_REGISTRY_H_

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace foc {

enum class CryptoCategory { kPrimitive, kBlockMode, kAeMode };

std::string_view to_string(CryptoCategory category);
std::optional<CryptoCategory> parse_crypto_category(std::string_view s);

struct CryptoClass {
  std::string canonical;
  CryptoCategory category = CryptoCategory::kPrimitive;
  std::vector<std::string> aliases;
  // Classes outside the keyword bag are still reported by classification but
  // never occupy a slot of the keyword vector.
  bool in_vector = true;
};

struct ClassHit {
  size_t class_index = 0;
  std::string matched_form;
  size_t position = 0;  // byte offset into the scanned text
};

// Immutable set of crypto classes plus the trie used for whole-word matching.
// Vector classes come first, in their fixed bag order.
class CryptoRegistry {
 public:
  // Throws ConfigError on duplicate canonical names or forms shared by two
  // classes, and when vector classes do not precede non-vector ones.
  explicit CryptoRegistry(std::vector<CryptoClass> classes,
                          std::set<std::string> disabled_forms = {});

  const std::vector<CryptoClass>& classes() const { return classes_; }
  size_t size() const { return classes_.size(); }
  size_t vector_size() const { return vector_size_; }

  std::optional<size_t> find_class(std::string_view canonical) const;
  // Class owning a canonical name or alias form (lowercased lookup).
  std::optional<size_t> class_of_form(std::string_view form) const;

  // Copy of this registry with the listed forms excluded from matching.
  CryptoRegistry with_disabled(const std::set<std::string>& forms) const;
  const std::set<std::string>& disabled_forms() const { return disabled_; }

  // Every whole-word hit, scanning left to right; at each word start the
  // longest matching form wins and scanning resumes after it.
  std::vector<ClassHit> scan(std::string_view text) const;

  // Registry file: canonical<TAB>category<TAB>alias1|alias2|...[<TAB>nonvector]
  std::string to_file_text() const;
  static CryptoRegistry from_file_text(std::string_view text);
  static CryptoRegistry load(const std::string& path);

 private:
  struct Trie;

  std::vector<CryptoClass> classes_;
  std::set<std::string> disabled_;
  size_t vector_size_ = 0;
  std::map<std::string, size_t, std::less<>> form_to_class_;
  std::shared_ptr<const Trie> trie_;
};

// The 61 vector classes (45 primitives, 8 block modes, 8 AE modes) with their
// alias forms, followed by the alias-table-only classes flagged non-vector.
const CryptoRegistry& default_registry();

std::set<std::string> classify_text(std::string_view text, const CryptoRegistry& registry);

bool labels_agree(std::string_view summary, std::string_view source,
                  const CryptoRegistry& registry);

// Count of hits per vector class, in registry order.
std::vector<int> keyword_bow(std::string_view text, const CryptoRegistry& registry);

}  // namespace foc

#endif  // FOC_CRYPTO_REGISTRY_H_
