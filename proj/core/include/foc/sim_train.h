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

#ifndef FOC_SIM_TRAIN_H_
#define FOC_SIM_TRAIN_H_

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "foc/common.h"
#include "foc/record.h"
#include "foc/sim_model.h"

namespace foc {

// kLiteral sums the denominator over negatives only (j != i); kStandard also
// includes the positive, which keeps the loss bounded below by zero.
enum class LossForm { kLiteral, kStandard };

std::string_view to_string(LossForm form);
std::optional<LossForm> parse_loss_form(std::string_view s);

struct MnrLoss {
  double value = 0.0;
  Matrix grad_anchors;    // same shape as the anchors
  Matrix grad_positives;
};

// Multiple-negatives ranking loss over cosine similarities, where row i of
// `positives` is the positive for row i of `anchors` and every other row is
// a negative. Needs at least two rows and no zero rows.
MnrLoss mnr_loss(const Matrix& anchors, const Matrix& positives, double tau, LossForm form);

// Draws within-group pairs from groups keyed by (project, source_file, name).
class PairSampler {
 public:
  PairSampler(const Corpus& corpus, uint64_t seed);

  size_t eligible_groups() const { return groups_.size(); }
  // n pairs of record indices from n distinct groups. Throws
  // PreconditionError naming the shortfall when too few groups qualify.
  std::vector<std::pair<size_t, size_t>> sample(size_t n);

 private:
  std::vector<std::vector<size_t>> groups_;  // only groups with >= 2 members
  std::mt19937_64 rng_;
};

struct TrainConfig {
  int batch_size = 32;
  int steps = 2000;
  double learning_rate = 1e-3;
  double weight_decay = 1e-5;
  double tau = 0.05;
  LossForm form = LossForm::kStandard;
  bool freeze_encoder = true;
  uint64_t seed = 1;
  // Reuse the first batch for every step (overfitting check).
  bool fixed_batch = false;

  std::map<std::string, std::string> to_map() const;
};

struct TrainResult {
  std::vector<double> losses;  // one per step
  // Fixed-batch runs only: the loss rose somewhere in the first 10 steps.
  bool non_monotone = false;
};

// Adam with decoupled weight decay on the GCN and fusion tensors, plus the
// encoder table when it is not frozen. Throws Error("divergence") naming the
// step when the loss becomes non-finite.
TrainResult train_sim(const Corpus& corpus, SimModel& model, const TrainConfig& config);

}  // namespace foc

#endif  // FOC_SIM_TRAIN_H_
