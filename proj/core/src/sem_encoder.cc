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

#include "foc/sem_encoder.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "foc/optimizer.h"
#include "foc/vector_ops.h"

namespace foc {

SemEncoder make_sem_encoder(int table_size, int dim, std::mt19937_64& rng) {
  if (table_size < 1 || dim < 1) throw ConfigError("encoder table and dimension must be positive");
  const double bound = std::sqrt(6.0 / (1.0 + dim));
  std::uniform_real_distribution<double> dist(-bound, bound);
  SemEncoder enc;
  enc.embedding.resize(table_size, dim);
  for (Eigen::Index r = 0; r < enc.embedding.rows(); ++r)
    for (Eigen::Index c = 0; c < enc.embedding.cols(); ++c) enc.embedding(r, c) = dist(rng);
  enc.embedding.row(Tokenizer::kPadIndex).setZero();
  return enc;
}

Vector encode(const std::vector<int>& tokens, const SemEncoder& encoder) {
  Vector sum = Vector::Zero(encoder.dim());
  int count = 0;
  for (int t : tokens) {
    if (t == Tokenizer::kPadIndex) continue;
    if (t < 0 || t >= encoder.embedding.rows())
      throw PreconditionError("token index " + std::to_string(t) + " outside the embedding table");
    sum += encoder.embedding.row(t).transpose();
    ++count;
  }
  if (count > 0) sum /= static_cast<double>(count);
  return sum;
}

Vector encode(std::string_view code, const Tokenizer& tokenizer, const SemEncoder& encoder) {
  return encode(tokenizer.encode(code), encoder);
}

void encode_backward(const std::vector<int>& tokens, const Eigen::Ref<const Vector>& grad_pooled,
                     Matrix& grad_embedding) {
  const auto count = std::count_if(tokens.begin(), tokens.end(),
                                   [](int t) { return t != Tokenizer::kPadIndex; });
  if (count == 0) return;
  const double scale = 1.0 / static_cast<double>(count);
  for (int t : tokens) {
    if (t == Tokenizer::kPadIndex) continue;
    grad_embedding.row(t) += scale * grad_pooled.transpose();
  }
}

double contrastive_loss(const Vector& source, const Vector& binary) {
  const double loss = 1.0 - cosine(source, binary);
  // cos <= 1, so the absolute value in the textbook form is redundant.
  return std::max(loss, 0.0);
}

ContrastiveGrad contrastive_loss_grad(const Vector& source, const Vector& binary) {
  ContrastiveGrad g;
  g.loss = contrastive_loss(source, binary);
  g.grad_source = Vector::Zero(source.size());
  g.grad_binary = Vector::Zero(binary.size());
  cosine_backward(source, binary, -1.0, g.grad_source, g.grad_binary);
  return g;
}

EncoderTrainResult train_contrastive(const std::vector<std::pair<std::string, std::string>>& pairs,
                                     const Tokenizer& tokenizer, SemEncoder encoder,
                                     const EncoderTrainConfig& config) {
  if (encoder.frozen) throw PreconditionError("cannot train a frozen encoder");
  if (pairs.empty()) throw PreconditionError("no training pairs");
  if (config.batch_size < 1) throw PreconditionError("batch size must be positive");

  std::vector<std::pair<std::vector<int>, std::vector<int>>> tokens;
  EncoderTrainResult result;
  for (const auto& [source, binary] : pairs) {
    auto s = tokenizer.encode(source);
    auto b = tokenizer.encode(binary);
    if (s.empty() || b.empty()) {
      ++result.skipped_pairs;
      continue;
    }
    tokens.emplace_back(std::move(s), std::move(b));
  }
  if (tokens.empty()) throw PreconditionError("every training pair has an empty side");

  auto mean_loss = [&](const SemEncoder& enc) {
    double total = 0.0;
    for (const auto& [s, b] : tokens) total += contrastive_loss(encode(s, enc), encode(b, enc));
    return total / static_cast<double>(tokens.size());
  };
  result.initial_loss = mean_loss(encoder);

  AdamW adam({config.learning_rate, config.weight_decay});
  std::mt19937_64 rng(config.seed);
  std::vector<size_t> order(tokens.size());
  std::iota(order.begin(), order.end(), 0);
  size_t cursor = order.size();
  Matrix grad = Matrix::Zero(encoder.embedding.rows(), encoder.embedding.cols());
  for (int step = 0; step < config.steps; ++step) {
    grad.setZero();
    const size_t batch = std::min<size_t>(static_cast<size_t>(config.batch_size), tokens.size());
    double batch_loss = 0.0;
    for (size_t k = 0; k < batch; ++k) {
      if (cursor == order.size()) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      const auto& [s, b] = tokens[order[cursor++]];
      const Vector vs = encode(s, encoder), vb = encode(b, encoder);
      const auto g = contrastive_loss_grad(vs, vb);
      batch_loss += g.loss;
      encode_backward(s, g.grad_source / static_cast<double>(batch), grad);
      encode_backward(b, g.grad_binary / static_cast<double>(batch), grad);
    }
    result.step_losses.push_back(batch_loss / static_cast<double>(batch));
    adam.step({slot(encoder.embedding, grad)});
    encoder.embedding.row(Tokenizer::kPadIndex).setZero();
  }
  result.final_loss = mean_loss(encoder);
  result.improved = result.final_loss < result.initial_loss;
  result.encoder = std::move(encoder);
  return result;
}

}  // namespace foc
