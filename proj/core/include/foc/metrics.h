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

#ifndef FOC_METRICS_H_
#define FOC_METRICS_H_

#include <optional>
#include <string>
#include <vector>

namespace foc {

struct ScoredPair {
  double score = 0.0;
  bool positive = false;
};

struct RankedResult {
  std::string query_id;
  std::optional<int> rank;  // 1-based position of the ground truth; absent = not retrieved
};

// Probability that a random positive outscores a random negative, ties
// counted as one half. Computed from average ranks, which gives exactly the
// trapezoidal area under the ROC curve. Throws PreconditionError unless both
// labels are present or when a score is not finite.
double auc(const std::vector<ScoredPair>& pairs);

// Fraction of queries whose ground truth ranks within k.
double recall_at_k(const std::vector<RankedResult>& results, int k);
// Mean of 1/rank over queries ranking within k (others contribute 0).
double mrr_at_k(const std::vector<RankedResult>& results, int k);

}  // namespace foc

#endif  // FOC_METRICS_H_
