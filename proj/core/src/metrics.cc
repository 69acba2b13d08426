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

#include "foc/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "foc/common.h"

namespace foc {
namespace {

void check_ranked(const std::vector<RankedResult>& results, int k) {
  if (k < 1) throw PreconditionError("k must be at least 1");
  if (results.empty()) throw PreconditionError("no ranked results");
  for (const auto& r : results)
    if (r.rank && *r.rank < 1) throw PreconditionError("rank must be at least 1");
}

}  // namespace

double auc(const std::vector<ScoredPair>& pairs) {
  std::vector<size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  size_t positives = 0;
  for (const auto& p : pairs) {
    if (!std::isfinite(p.score)) throw PreconditionError("non-finite score");
    positives += p.positive ? 1 : 0;
  }
  const size_t negatives = pairs.size() - positives;
  if (positives == 0 || negatives == 0)
    throw PreconditionError("AUC needs at least one positive and one negative");
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return pairs[a].score < pairs[b].score; });

  // Sum of 1-based ranks of the positives, tied runs sharing their mean rank.
  // Ranks are kept doubled so ties stay integral.
  long double doubled_rank_sum = 0;
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    size_t tied_positives = 0;
    while (j < order.size() && pairs[order[j]].score == pairs[order[i]].score) {
      tied_positives += pairs[order[j]].positive ? 1 : 0;
      ++j;
    }
    doubled_rank_sum += static_cast<long double>(tied_positives) * static_cast<long double>(i + 1 + j);
    i = j;
  }
  const long double p = static_cast<long double>(positives);
  // U counts wins plus half ties, a half-integer held exactly in a double.
  const double u = static_cast<double>(doubled_rank_sum / 2 - p * (p + 1) / 2);
  return u / (static_cast<double>(positives) * static_cast<double>(negatives));
}

double recall_at_k(const std::vector<RankedResult>& results, int k) {
  check_ranked(results, k);
  size_t hits = 0;
  for (const auto& r : results)
    if (r.rank && *r.rank <= k) ++hits;
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

double mrr_at_k(const std::vector<RankedResult>& results, int k) {
  check_ranked(results, k);
  double sum = 0.0;
  for (const auto& r : results)
    if (r.rank && *r.rank <= k) sum += 1.0 / *r.rank;
  return sum / static_cast<double>(results.size());
}

}  // namespace foc
