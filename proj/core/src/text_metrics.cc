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

#include "foc/text_metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <utility>

#include "foc/common.h"

namespace foc {
namespace {

void require_reference(const Tokens& reference) {
  if (reference.empty()) throw PreconditionError("empty reference");
}

size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::map<std::vector<std::string>, size_t> ngram_counts(const Tokens& t, size_t n) {
  std::map<std::vector<std::string>, size_t> counts;
  for (size_t i = 0; i + n <= t.size(); ++i)
    ++counts[std::vector<std::string>(t.begin() + static_cast<long>(i),
                                      t.begin() + static_cast<long>(i + n))];
  return counts;
}

}  // namespace

Tokens text_tokens(std::string_view text) {
  Tokens out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double rouge_l(const Tokens& generated, const Tokens& reference) {
  require_reference(reference);
  if (generated.empty()) return 0.0;
  const double lcs = static_cast<double>(lcs_length(generated, reference));
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(generated.size());
  const double r = lcs / static_cast<double>(reference.size());
  const double beta = p / r;
  return (1.0 + beta * beta) * p * r / (r + beta * beta * p);
}

BleuScore bleu4(const Tokens& generated, const Tokens& reference) {
  require_reference(reference);
  BleuScore out;
  if (generated.empty()) return out;
  double log_sum = 0.0;
  for (size_t n = 1; n <= 4; ++n) {
    const auto cand = ngram_counts(generated, n);
    const auto ref = ngram_counts(reference, n);
    size_t total = 0, clipped = 0;
    for (const auto& [gram, count] : cand) {
      total += count;
      const auto it = ref.find(gram);
      if (it != ref.end()) clipped += std::min(count, it->second);
    }
    double precision;
    if (clipped == 0) {
      precision = 1.0 / (2.0 * static_cast<double>(std::max<size_t>(1, total)));
      out.smoothed = true;
    } else {
      precision = static_cast<double>(clipped) / static_cast<double>(total);
    }
    log_sum += 0.25 * std::log(precision);
  }
  const double c = static_cast<double>(generated.size());
  const double r = static_cast<double>(reference.size());
  const double bp = std::min(1.0, std::exp(1.0 - r / c));
  out.value = bp * std::exp(log_sum);
  return out;
}

double meteor(const Tokens& generated, const Tokens& reference) {
  require_reference(reference);
  constexpr double kAlpha = 0.9, kBeta = 3.0, kGamma = 0.5;
  std::vector<bool> used_g(generated.size(), false), used_r(reference.size(), false);
  std::vector<std::pair<size_t, size_t>> aligned;
  // Repeatedly align the longest run of equal, still unaligned tokens; ties go
  // to the earliest generated position, then the earliest reference position.
  while (true) {
    size_t best = 0, best_g = 0, best_r = 0;
    for (size_t g = 0; g < generated.size(); ++g) {
      for (size_t r = 0; r < reference.size(); ++r) {
        size_t len = 0;
        while (g + len < generated.size() && r + len < reference.size() && !used_g[g + len] &&
               !used_r[r + len] && generated[g + len] == reference[r + len])
          ++len;
        if (len > best) {
          best = len;
          best_g = g;
          best_r = r;
        }
      }
    }
    if (best == 0) break;
    for (size_t k = 0; k < best; ++k) {
      used_g[best_g + k] = used_r[best_r + k] = true;
      aligned.emplace_back(best_g + k, best_r + k);
    }
  }
  const size_t matches = aligned.size();
  if (matches == 0) return 0.0;
  std::sort(aligned.begin(), aligned.end());
  size_t chunks = 1;
  for (size_t k = 1; k < aligned.size(); ++k)
    if (aligned[k].first != aligned[k - 1].first + 1 || aligned[k].second != aligned[k - 1].second + 1)
      ++chunks;
  const double m = static_cast<double>(matches);
  const double p = m / static_cast<double>(generated.size());
  const double r = m / static_cast<double>(reference.size());
  const double f = p * r / (kAlpha * p + (1.0 - kAlpha) * r);
  const double frag = static_cast<double>(chunks) / m;
  return (1.0 - kGamma * std::pow(frag, kBeta)) * f;
}

TextScores score_text(std::string_view generated, std::string_view reference) {
  const Tokens g = text_tokens(generated), r = text_tokens(reference);
  const BleuScore b = bleu4(g, r);
  return {rouge_l(g, r), b.value, meteor(g, r), b.smoothed};
}

TextReport evaluate_text(const std::vector<std::string>& generated,
                         const std::vector<std::string>& references) {
  if (generated.size() != references.size())
    throw PreconditionError("prediction and reference counts differ (" +
                            std::to_string(generated.size()) + " vs " +
                            std::to_string(references.size()) + ")");
  if (generated.empty()) throw PreconditionError("no examples to evaluate");
  TextReport report;
  for (size_t i = 0; i < generated.size(); ++i) {
    report.examples.push_back(score_text(generated[i], references[i]));
    const TextScores& s = report.examples.back();
    report.mean.rouge_l += s.rouge_l;
    report.mean.bleu4 += s.bleu4;
    report.mean.meteor += s.meteor;
    if (s.bleu_smoothed) ++report.smoothed_count;
  }
  const double n = static_cast<double>(generated.size());
  report.mean.rouge_l /= n;
  report.mean.bleu4 /= n;
  report.mean.meteor /= n;
  report.mean.bleu_smoothed = report.smoothed_count > 0;
  return report;
}

}  // namespace foc
