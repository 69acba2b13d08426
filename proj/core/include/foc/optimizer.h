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

#ifndef FOC_OPTIMIZER_H_
#define FOC_OPTIMIZER_H_

#include <vector>

#include "foc/common.h"

namespace foc {

struct AdamOptions {
  double learning_rate = 1e-3;
  double weight_decay = 0.0;  // decoupled
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// A parameter tensor and its gradient viewed as flat arrays of equal size.
struct ParamSlot {
  double* value;
  const double* grad;
  Eigen::Index size;
};

inline ParamSlot slot(Matrix& value, const Matrix& grad) {
  return {value.data(), grad.data(), value.size()};
}
inline ParamSlot slot(Vector& value, const Vector& grad) {
  return {value.data(), grad.data(), value.size()};
}

// Adam with decoupled weight decay. State is keyed by the position of each
// slot in the list passed to step(); callers pass the same layout every time.
class AdamW {
 public:
  explicit AdamW(AdamOptions options) : options_(options) {}

  void step(const std::vector<ParamSlot>& slots);
  long steps() const { return t_; }

 private:
  AdamOptions options_;
  long t_ = 0;
  std::vector<Eigen::ArrayXd> m_;
  std::vector<Eigen::ArrayXd> v_;
};

}  // namespace foc

#endif  // FOC_OPTIMIZER_H_
