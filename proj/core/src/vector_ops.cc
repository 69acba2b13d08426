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

#include "foc/vector_ops.h"

#include <cmath>

namespace foc {

double cosine(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  if (a.size() != b.size()) throw PreconditionError("cosine of vectors with different sizes");
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw PreconditionError("cosine undefined for a zero vector");
  return a.dot(b) / (na * nb);
}

void cosine_backward(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b,
                     double upstream, Eigen::Ref<Vector> grad_a, Eigen::Ref<Vector> grad_b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw PreconditionError("cosine undefined for a zero vector");
  const double c = a.dot(b) / (na * nb);
  grad_a += upstream * (b / (na * nb) - (c / (na * na)) * a);
  grad_b += upstream * (a / (na * nb) - (c / (nb * nb)) * b);
}

}  // namespace foc
