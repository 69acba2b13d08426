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

#ifndef FOC_TEXT_METRICS_H_
#define FOC_TEXT_METRICS_H_

#include <string>
#include <string_view>
#include <vector>

namespace foc {

using Tokens = std::vector<std::string>;

// Lowercase, then split on whitespace. Shared by all text metrics.
Tokens text_tokens(std::string_view text);

// All three throw PreconditionError on an empty reference.

// LCS-based F-measure with beta = P / R; zero when nothing is shared.
double rouge_l(const Tokens& generated, const Tokens& reference);

struct BleuScore {
  double value = 0.0;
  // Some n-gram precision was zero and replaced by 1 / (2 * candidate n-grams).
  bool smoothed = false;
};

// Uniform 1..4-gram weights, clipped counts, brevity penalty min(1, e^(1-r/c)).
BleuScore bleu4(const Tokens& generated, const Tokens& reference);

// Exact-match unigram alignment built greedily from the longest shared runs,
// which keeps the chunk count low. alpha 0.9, beta 3, gamma 0.5.
double meteor(const Tokens& generated, const Tokens& reference);

struct TextScores {
  double rouge_l = 0.0;
  double bleu4 = 0.0;
  double meteor = 0.0;
  bool bleu_smoothed = false;
};

TextScores score_text(std::string_view generated, std::string_view reference);

// Macro average over examples; smoothed_count counts smoothed BLEU values.
struct TextReport {
  std::vector<TextScores> examples;
  TextScores mean;
  size_t smoothed_count = 0;
};

TextReport evaluate_text(const std::vector<std::string>& generated,
                         const std::vector<std::string>& references);

}  // namespace foc

#endif  // FOC_TEXT_METRICS_H_
