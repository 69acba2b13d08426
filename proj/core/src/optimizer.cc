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

#include "foc/optimizer.h"

#include <cmath>

namespace foc {

void AdamW::step(const std::vector<ParamSlot>& slots) {
  if (m_.empty()) {
    for (const ParamSlot& s : slots) {
      m_.push_back(Eigen::ArrayXd::Zero(s.size));
      v_.push_back(Eigen::ArrayXd::Zero(s.size));
    }
  }
  if (m_.size() != slots.size()) throw PreconditionError("optimizer parameter list changed");
  ++t_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double lr = options_.learning_rate;
  const double decay = 1.0 - lr * options_.weight_decay;
  for (size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].size != m_[i].size()) throw PreconditionError("optimizer parameter shape changed");
    Eigen::Map<Eigen::ArrayXd> p(slots[i].value, slots[i].size);
    const Eigen::Map<const Eigen::ArrayXd> g(slots[i].grad, slots[i].size);
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g.square();
    p *= decay;
    p -= lr * (m_[i] / c1) / ((v_[i] / c2).sqrt() + options_.epsilon);
  }
}

}  // namespace foc
