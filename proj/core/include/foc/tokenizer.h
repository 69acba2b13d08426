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

#ifndef FOC_TOKENIZER_H_
#define FOC_TOKENIZER_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace foc {

// Code tokenizer standing in for a subword vocabulary. Index 0 is padding;
// known tokens occupy [1, vocab_size); everything else hashes into one of
// oov_buckets overflow rows after the vocabulary.
class Tokenizer {
 public:
  static constexpr int kPadIndex = 0;
  static constexpr size_t kMaxTokens = 1024;

  explicit Tokenizer(int vocab_size = 8192, int oov_buckets = 1024);

  // Lowercased pieces: whitespace dropped, punctuation kept as one-character
  // tokens, identifiers split on underscores and camelCase humps. At most
  // max_tokens pieces are returned.
  static std::vector<std::string> split(std::string_view code, size_t max_tokens = kMaxTokens);

  // Fills the vocabulary with the most frequent pieces of `texts`.
  void build(const std::vector<std::string>& texts);

  int index_of(const std::string& token) const;
  std::vector<int> encode(std::string_view code) const;

  int vocab_size() const { return vocab_size_; }
  int oov_buckets() const { return oov_buckets_; }
  int table_size() const { return vocab_size_ + oov_buckets_; }
  size_t known_tokens() const { return tokens_.size(); }

  // One token per line, in index order starting at index 1.
  std::string vocab_text() const;
  void set_vocab_text(std::string_view text);

 private:
  void index_tokens();

  int vocab_size_;
  int oov_buckets_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace foc

#endif  // FOC_TOKENIZER_H_
