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

#include "foc/sim_train.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "foc/optimizer.h"
#include "foc/parallel.h"

namespace foc {
namespace {

// Rows scaled to unit length; throws on a zero row.
Matrix normalize_rows(const Matrix& m, Vector& norms) {
  norms = m.rowwise().norm();
  for (Eigen::Index i = 0; i < norms.size(); ++i)
    if (norms[i] == 0.0) throw PreconditionError("zero embedding in loss batch");
  return norms.cwiseInverse().asDiagonal() * m;
}

// Gradient through x -> x / |x| for every row.
Matrix normalize_rows_backward(const Matrix& unit, const Vector& norms, const Matrix& grad_unit) {
  const Vector radial = (unit.cwiseProduct(grad_unit)).rowwise().sum();
  return norms.cwiseInverse().asDiagonal() * (grad_unit - radial.asDiagonal() * unit);
}

}  // namespace

std::string_view to_string(LossForm form) {
  return form == LossForm::kLiteral ? "literal" : "standard";
}

std::optional<LossForm> parse_loss_form(std::string_view s) {
  if (s == "literal" || s == "literal-eq5") return LossForm::kLiteral;
  if (s == "standard" || s == "standard-infonce") return LossForm::kStandard;
  return std::nullopt;
}

MnrLoss mnr_loss(const Matrix& anchors, const Matrix& positives, double tau, LossForm form) {
  const Eigen::Index n = anchors.rows();
  if (n < 2) throw PreconditionError("the ranking loss needs at least two pairs");
  if (positives.rows() != n || positives.cols() != anchors.cols())
    throw PreconditionError("anchor and positive batches differ in shape");
  if (!(tau > 0.0)) throw PreconditionError("temperature must be positive");

  Vector na, np;
  const Matrix ua = normalize_rows(anchors, na);
  const Matrix up = normalize_rows(positives, np);
  const Matrix logits = (ua * up.transpose()) / tau;

  // d(loss)/d(logit_ij) = (softmax_ij over the denominator terms - [i == j]) / n
  Matrix grad_logits = Matrix::Zero(n, n);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j)
      if (form == LossForm::kStandard || j != i) top = std::max(top, logits(i, j));
    double denom = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (form == LossForm::kStandard || j != i) denom += std::exp(logits(i, j) - top);
    total += -(logits(i, i) - top - std::log(denom));
    for (Eigen::Index j = 0; j < n; ++j)
      if (form == LossForm::kStandard || j != i)
        grad_logits(i, j) = std::exp(logits(i, j) - top) / denom;
    grad_logits(i, i) -= 1.0;
  }
  grad_logits /= static_cast<double>(n);

  MnrLoss out;
  out.value = total / static_cast<double>(n);
  const Matrix grad_sim = grad_logits / tau;
  out.grad_anchors = normalize_rows_backward(ua, na, grad_sim * up);
  out.grad_positives = normalize_rows_backward(up, np, grad_sim.transpose() * ua);
  return out;
}

PairSampler::PairSampler(const Corpus& corpus, uint64_t seed) : rng_(seed) {
  std::map<GroupKey, std::vector<size_t>> by_key;
  for (size_t i = 0; i < corpus.records.size(); ++i)
    by_key[group_key(corpus.records[i])].push_back(i);
  for (auto& [key, members] : by_key)
    if (members.size() >= 2) groups_.push_back(std::move(members));
}

std::vector<std::pair<size_t, size_t>> PairSampler::sample(size_t n) {
  if (n > groups_.size())
    throw PreconditionError("need " + std::to_string(n) + " groups with at least two members, have " +
                            std::to_string(groups_.size()) + " (short by " +
                            std::to_string(n - groups_.size()) + ")");
  // Partial Fisher-Yates over group indices.
  std::vector<size_t> order(groups_.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::pair<size_t, size_t>> pairs;
  pairs.reserve(n);
  for (size_t k = 0; k < n; ++k) {
    std::uniform_int_distribution<size_t> pick(k, order.size() - 1);
    std::swap(order[k], order[pick(rng_)]);
    const auto& members = groups_[order[k]];
    std::uniform_int_distribution<size_t> first(0, members.size() - 1);
    std::uniform_int_distribution<size_t> second(0, members.size() - 2);
    const size_t a = first(rng_);
    size_t b = second(rng_);
    if (b >= a) ++b;
    pairs.emplace_back(members[a], members[b]);
  }
  return pairs;
}

std::map<std::string, std::string> TrainConfig::to_map() const {
  auto num = [](double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  };
  return {{"batch_size", std::to_string(batch_size)},
          {"steps", std::to_string(steps)},
          {"learning_rate", num(learning_rate)},
          {"weight_decay", num(weight_decay)},
          {"tau", num(tau)},
          {"loss_form", std::string(to_string(form))},
          {"freeze_encoder", freeze_encoder ? "true" : "false"},
          {"train_seed", std::to_string(seed)},
          {"fixed_batch", fixed_batch ? "true" : "false"}};
}

TrainResult train_sim(const Corpus& corpus, SimModel& model, const TrainConfig& config) {
  if (config.batch_size < 2) throw PreconditionError("batch size must be at least 2");
  if (!(config.tau > 0.0)) throw PreconditionError("temperature must be positive");
  if (config.steps < 0) throw PreconditionError("step count must be non-negative");
  model.encoder.frozen = config.freeze_encoder;

  PairSampler sampler(corpus, config.seed);
  const auto n = static_cast<size_t>(config.batch_size);
  if (sampler.eligible_groups() < n) sampler.sample(n);  // throws with the shortfall

  // Featurize every record once; only records of eligible groups are used.
  std::vector<FunctionInputs> inputs(corpus.records.size());
  parallel_for(corpus.records.size(), [&](size_t i) {
    inputs[i] = model.prepare(corpus.records[i]);
  });

  AdamW adam({config.learning_rate, config.weight_decay});
  TrainResult result;
  std::vector<std::pair<size_t, size_t>> pairs;
  for (int step = 0; step < config.steps; ++step) {
    if (!config.fixed_batch || step == 0) pairs = sampler.sample(n);
    std::vector<const FunctionInputs*> batch(2 * n);
    for (size_t k = 0; k < n; ++k) {
      batch[k] = &inputs[pairs[k].first];
      batch[n + k] = &inputs[pairs[k].second];
    }
    const ForwardTape tape = model.forward(batch);
    const Eigen::Index rows = static_cast<Eigen::Index>(n);
    const MnrLoss loss =
        mnr_loss(tape.output.topRows(rows), tape.output.bottomRows(rows), config.tau, config.form);
    if (!std::isfinite(loss.value))
      throw Error("divergence", "non-finite loss at step " + std::to_string(step));
    result.losses.push_back(loss.value);

    Matrix grad_output(2 * rows, tape.output.cols());
    grad_output << loss.grad_anchors, loss.grad_positives;
    ModelGrads grads = model.zero_grads();
    model.backward(tape, grad_output, grads);
    adam.step(model.param_slots(grads));
  }
  if (config.fixed_batch) {
    const size_t check = std::min<size_t>(10, result.losses.size());
    for (size_t k = 1; k < check; ++k)
      if (result.losses[k] > result.losses[k - 1]) result.non_monotone = true;
  }
  return result;
}

}  // namespace foc
