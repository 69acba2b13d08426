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

#ifndef FOC_VECTOR_OPS_H_
#define FOC_VECTOR_OPS_H_

#include "foc/common.h"

namespace foc {

// Cosine similarity; throws PreconditionError when either vector is zero.
double cosine(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

// Accumulates d(cos)/da * upstream into grad_a and likewise for b.
void cosine_backward(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b,
                     double upstream, Eigen::Ref<Vector> grad_a, Eigen::Ref<Vector> grad_b);

}  // namespace foc

#endif  // FOC_VECTOR_OPS_H_
