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

#include "foc/tokenizer.h"

#include <algorithm>
#include <cctype>
#include <map>

#include "foc/common.h"

namespace foc {
namespace {

bool is_ident(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void split_humps(std::string_view part, std::vector<std::string>& out, size_t max_tokens) {
  size_t start = 0;
  for (size_t i = 1; i <= part.size(); ++i) {
    bool cut = i == part.size();
    if (!cut) {
      const char prev = part[i - 1], cur = part[i];
      // lower|digit -> Upper: "setKey", "sha256Update"
      if ((is_lower(prev) || is_digit(prev)) && is_upper(cur)) cut = true;
      // Upper -> Upper lower: "AESKey" splits before "Key"
      if (is_upper(prev) && is_upper(cur) && i + 1 < part.size() && is_lower(part[i + 1]))
        cut = true;
    }
    if (cut && i > start) {
      if (out.size() >= max_tokens) return;
      std::string piece(part.substr(start, i - start));
      for (char& c : piece) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      out.push_back(std::move(piece));
      start = i;
    }
  }
}

}  // namespace

Tokenizer::Tokenizer(int vocab_size, int oov_buckets)
    : vocab_size_(vocab_size), oov_buckets_(oov_buckets) {
  if (vocab_size < 1 || oov_buckets < 1)
    throw ConfigError("tokenizer needs vocab_size >= 1 and oov_buckets >= 1");
}

std::vector<std::string> Tokenizer::split(std::string_view code, size_t max_tokens) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < code.size() && out.size() < max_tokens) {
    const char c = code[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (is_ident(c)) {
      size_t j = i;
      while (j < code.size() && is_ident(code[j])) ++j;
      const std::string_view word = code.substr(i, j - i);
      size_t s = 0;
      while (s < word.size() && out.size() < max_tokens) {
        size_t e = word.find('_', s);
        if (e == std::string_view::npos) e = word.size();
        if (e > s) split_humps(word.substr(s, e - s), out, max_tokens);
        s = e + 1;
      }
      i = j;
    } else {
      out.emplace_back(1, c);
      ++i;
    }
  }
  return out;
}

void Tokenizer::build(const std::vector<std::string>& texts) {
  std::map<std::string, long> counts;
  for (const auto& t : texts)
    for (auto& piece : split(t, std::string::npos)) ++counts[std::move(piece)];
  std::vector<std::pair<std::string, long>> items(counts.begin(), counts.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  tokens_.clear();
  for (size_t i = 0; i < items.size() && static_cast<int>(i) + 1 < vocab_size_; ++i)
    tokens_.push_back(items[i].first);
  index_tokens();
}

void Tokenizer::index_tokens() {
  index_.clear();
  for (size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], static_cast<int>(i) + 1);
}

int Tokenizer::index_of(const std::string& token) const {
  auto it = index_.find(token);
  if (it != index_.end()) return it->second;
  return vocab_size_ + static_cast<int>(fnv1a(token) % static_cast<uint64_t>(oov_buckets_));
}

std::vector<int> Tokenizer::encode(std::string_view code) const {
  std::vector<int> ids;
  for (const auto& piece : split(code)) ids.push_back(index_of(piece));
  return ids;
}

std::string Tokenizer::vocab_text() const {
  std::string out;
  for (const auto& t : tokens_) {
    out += t;
    out += '\n';
  }
  return out;
}

void Tokenizer::set_vocab_text(std::string_view text) {
  tokens_.clear();
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    tokens_.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (static_cast<int>(tokens_.size()) >= vocab_size_)
    throw ConfigError("tokenizer vocabulary exceeds its declared size");
  index_tokens();
}

}  // namespace foc
