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

#ifndef FOC_SEM_ENCODER_H_
#define FOC_SEM_ENCODER_H_

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "foc/common.h"
#include "foc/tokenizer.h"

namespace foc {

// Mean-pooled token embeddings. Row Tokenizer::kPadIndex stays zero and is
// never pooled.
struct SemEncoder {
  Matrix embedding;
  bool frozen = false;

  int dim() const { return static_cast<int>(embedding.cols()); }
};

// Rows drawn uniformly from +-sqrt(6 / (1 + dim)): a lookup is a linear map
// from a one-hot input, so fan-in is 1.
SemEncoder make_sem_encoder(int table_size, int dim, std::mt19937_64& rng);

// Mean of the embedding rows of all non-padding tokens; zero for no tokens.
Vector encode(const std::vector<int>& tokens, const SemEncoder& encoder);
Vector encode(std::string_view code, const Tokenizer& tokenizer, const SemEncoder& encoder);

// Adds d(loss)/d(embedding) for a pooled vector with gradient `grad_pooled`.
void encode_backward(const std::vector<int>& tokens, const Eigen::Ref<const Vector>& grad_pooled,
                     Matrix& grad_embedding);

// 1 - cos(a, b); throws PreconditionError when either vector is zero.
double contrastive_loss(const Vector& source, const Vector& binary);

struct ContrastiveGrad {
  double loss = 0.0;
  Vector grad_source;
  Vector grad_binary;
};
ContrastiveGrad contrastive_loss_grad(const Vector& source, const Vector& binary);

struct EncoderTrainConfig {
  int steps = 200;
  int batch_size = 32;
  double learning_rate = 1e-2;
  double weight_decay = 0.0;
  uint64_t seed = 1;
};

struct EncoderTrainResult {
  SemEncoder encoder;
  double initial_loss = 0.0;  // mean loss over all usable pairs before training
  double final_loss = 0.0;    // and after
  bool improved = false;
  size_t skipped_pairs = 0;   // pairs where a side has no tokens
  std::vector<double> step_losses;
};

// Adam on the mean contrastive loss between (source code, pseudo-code) pairs.
// Throws PreconditionError for a frozen encoder or when no pair is usable.
EncoderTrainResult train_contrastive(const std::vector<std::pair<std::string, std::string>>& pairs,
                                     const Tokenizer& tokenizer, SemEncoder encoder,
                                     const EncoderTrainConfig& config);

}  // namespace foc

#endif  // FOC_SEM_ENCODER_H_
