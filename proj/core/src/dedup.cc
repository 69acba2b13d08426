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

#include "foc/dedup.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <openssl/evp.h>

#include "foc/common.h"
#include "foc/parallel.h"

namespace foc {
namespace {

constexpr uint64_t kMersenne61 = (uint64_t{1} << 61) - 1;

uint64_t fnv1a(std::string_view bytes, uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

__extension__ using uint128 = unsigned __int128;

uint64_t mod_mersenne61(uint128 x) {
  uint64_t lo = static_cast<uint64_t>(x & kMersenne61);
  uint64_t hi = static_cast<uint64_t>(x >> 61);
  uint64_t r = lo + hi;
  while (r >= kMersenne61) r -= kMersenne61;
  return r;
}

class DisjointSets {
 public:
  explicit DisjointSets(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  size_t find(size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<size_t> parent_;
};

// Rows per LSH band: the largest power of two whose probability of missing a
// pair sitting exactly at the threshold stays below 1e-9.
int rows_per_band(double threshold, int num_perm) {
  int best = 1;
  for (int r = 1; r <= num_perm; r *= 2) {
    const int bands = num_perm / r;
    const double miss = std::pow(1.0 - std::pow(threshold, r), bands);
    if (miss <= 1e-9) best = r;
  }
  return best;
}

}  // namespace

Digest md5(std::string_view bytes) {
  Digest out{};
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_md5(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, out.data(), &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("internal", "md5 digest failed");
  }
  EVP_MD_CTX_free(ctx);
  return out;
}

std::string to_hex(const Digest& digest) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  s.reserve(32);
  for (uint8_t b : digest) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 0xf]);
  }
  return s;
}

std::string canonical_bytes(const FunctionRecord& record) {
  std::string bytes = record.pseudo_code;
  bytes.push_back('\n');
  bool first = true;
  for (const auto& block : record.blocks) {
    for (const auto& op : block) {
      if (!first) bytes.push_back('\n');
      bytes += op;
      first = false;
    }
  }
  return bytes;
}

Corpus dedup_exact(const Corpus& corpus) {
  std::vector<Digest> digests(corpus.records.size());
  parallel_for(corpus.records.size(),
               [&](size_t i) { digests[i] = md5(canonical_bytes(corpus.records[i])); });
  Corpus out;
  out.provenance = corpus.provenance;
  std::unordered_set<std::string> seen;
  for (size_t i = 0; i < digests.size(); ++i) {
    if (seen.insert(to_hex(digests[i])).second) out.records.push_back(corpus.records[i]);
  }
  return out;
}

std::vector<std::string> shingle_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (std::isalnum(c) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      tokens.emplace_back(text.substr(i, j - i));
      i = j;
    } else {
      tokens.emplace_back(1, text[i]);
      ++i;
    }
  }
  return tokens;
}

std::vector<uint64_t> shingle_set(std::string_view text, int k) {
  const auto tokens = shingle_tokens(text);
  std::vector<uint64_t> set;
  if (tokens.empty()) return set;
  const size_t width = std::min<size_t>(static_cast<size_t>(k), tokens.size());
  for (size_t i = 0; i + width <= tokens.size(); ++i) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (size_t t = i; t < i + width; ++t) {
      h = fnv1a(tokens[t], h);
      h = fnv1a("\x1f", h);
    }
    set.push_back(h);
  }
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

double jaccard(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
  if (a.empty() && b.empty()) return 1.0;
  size_t inter = 0, i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

MinHasher::MinHasher(int num_perm, uint64_t seed) {
  if (num_perm <= 0) throw PreconditionError("num_perm must be positive");
  std::mt19937_64 rng(seed);
  a_.resize(num_perm);
  b_.resize(num_perm);
  for (int k = 0; k < num_perm; ++k) {
    a_[k] = 1 + rng() % (kMersenne61 - 1);
    b_[k] = rng() % kMersenne61;
  }
}

std::vector<uint64_t> MinHasher::signature(const std::vector<uint64_t>& shingles) const {
  std::vector<uint64_t> sig(a_.size(), std::numeric_limits<uint64_t>::max());
  for (uint64_t s : shingles) {
    const uint64_t x = s % kMersenne61;
    for (size_t k = 0; k < a_.size(); ++k) {
      const uint64_t v =
          mod_mersenne61(static_cast<uint128>(a_[k]) * x + b_[k]);
      sig[k] = std::min(sig[k], v);
    }
  }
  return sig;
}

double MinHasher::estimate(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
  if (a.size() != b.size() || a.empty())
    throw PreconditionError("signatures must have equal, non-zero length");
  size_t equal = 0;
  for (size_t k = 0; k < a.size(); ++k) equal += a[k] == b[k];
  return static_cast<double>(equal) / static_cast<double>(a.size());
}

Corpus dedup_minhash(const Corpus& corpus, const MinHashOptions& options) {
  if (!(options.threshold > 0.0 && options.threshold <= 1.0))
    throw PreconditionError("minhash threshold must lie in (0, 1]");
  const size_t n = corpus.records.size();
  const MinHasher hasher(options.num_perm);
  std::vector<std::vector<uint64_t>> sigs(n);
  parallel_for(n, [&](size_t i) {
    sigs[i] = hasher.signature(shingle_set(corpus.records[i].pseudo_code, options.shingle_size));
  });

  const int rows = rows_per_band(options.threshold, options.num_perm);
  const int bands = options.num_perm / rows;
  DisjointSets sets(n);
  for (int band = 0; band < bands; ++band) {
    std::unordered_map<uint64_t, std::vector<size_t>> buckets;
    for (size_t i = 0; i < n; ++i) {
      uint64_t h = 0xcbf29ce484222325ull ^ static_cast<uint64_t>(band);
      for (int r = 0; r < rows; ++r) {
        const uint64_t v = sigs[i][band * rows + r];
        h = fnv1a(std::string_view(reinterpret_cast<const char*>(&v), sizeof(v)), h);
      }
      buckets[h].push_back(i);
    }
    for (const auto& [key, members] : buckets) {
      for (size_t x = 0; x < members.size(); ++x) {
        for (size_t y = x + 1; y < members.size(); ++y) {
          const size_t a = members[x], b = members[y];
          if (sets.find(a) == sets.find(b)) continue;
          if (MinHasher::estimate(sigs[a], sigs[b]) >= options.threshold) sets.unite(a, b);
        }
      }
    }
  }

  // Representative of each component: the member with the smallest id.
  std::unordered_map<size_t, size_t> representative;
  for (size_t i = 0; i < n; ++i) {
    const size_t root = sets.find(i);
    auto [it, inserted] = representative.emplace(root, i);
    if (!inserted && corpus.records[i].id < corpus.records[it->second].id) it->second = i;
  }
  Corpus out;
  out.provenance = corpus.provenance;
  for (size_t i = 0; i < n; ++i)
    if (representative.at(sets.find(i)) == i) out.records.push_back(corpus.records[i]);
  return out;
}

}  // namespace foc
