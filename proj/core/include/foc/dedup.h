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

#ifndef FOC_DEDUP_H_
#define FOC_DEDUP_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "foc/record.h"

namespace foc {

using Digest = std::array<uint8_t, 16>;

// 128-bit MD5 digest of arbitrary bytes.
Digest md5(std::string_view bytes);
std::string to_hex(const Digest& digest);

// Bytes hashed for exact deduplication: pseudo-code, a newline, then the
// flattened opcode list joined by newlines. Metadata is excluded so identical
// code built under different toolchains collapses.
std::string canonical_bytes(const FunctionRecord& record);

// Keeps the first record of every set of records with equal canonical digest.
Corpus dedup_exact(const Corpus& corpus);

// Splits text into word and punctuation tokens (whitespace discarded).
std::vector<std::string> shingle_tokens(std::string_view text);

// Set of hashed k-token shingles. Texts shorter than k tokens yield a single
// shingle covering the whole token sequence; empty text yields an empty set.
std::vector<uint64_t> shingle_set(std::string_view text, int k = 5);

// Exact Jaccard similarity of two sorted, unique shingle sets. Two empty sets
// are defined to be identical (1.0).
double jaccard(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b);

class MinHasher {
 public:
  explicit MinHasher(int num_perm = 256, uint64_t seed = 0x5eed'f0c0'0001ull);

  std::vector<uint64_t> signature(const std::vector<uint64_t>& shingles) const;
  static double estimate(const std::vector<uint64_t>& a,
                         const std::vector<uint64_t>& b);
  int num_perm() const { return static_cast<int>(a_.size()); }

 private:
  std::vector<uint64_t> a_;
  std::vector<uint64_t> b_;
};

struct MinHashOptions {
  double threshold = 0.95;
  int num_perm = 256;
  int shingle_size = 5;
};

// Clusters records whose estimated shingle Jaccard reaches the threshold
// (connected components) and keeps the smallest id of every cluster. Output
// keeps the input order of the survivors.
Corpus dedup_minhash(const Corpus& corpus, const MinHashOptions& options = {});

}  // namespace foc

#endif  // FOC_DEDUP_H_
