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

#include "foc/gcn.h"

#include <cmath>
#include <set>
#include <utility>

namespace foc {
namespace {

Matrix xavier(int rows, int cols, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / (rows + cols));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = dist(rng);
  return m;
}

Matrix relu(const Matrix& m) { return m.cwiseMax(0.0); }

Matrix relu_backward(const Matrix& grad, const Matrix& pre) {
  return (pre.array() > 0.0).select(grad, 0.0);
}

}  // namespace

GcnParams make_gcn_params(int hidden_dim, int num_layers, std::mt19937_64& rng) {
  if (hidden_dim < 1 || num_layers < 0) throw ConfigError("invalid GCN shape");
  GcnParams p;
  p.encoder_weight = xavier(kBlockFeatureDim, hidden_dim, rng);
  p.encoder_bias = Vector::Zero(hidden_dim);
  for (int l = 0; l < num_layers; ++l) p.layers.push_back(xavier(hidden_dim, hidden_dim, rng));
  return p;
}

SparseMatrix normalized_adjacency(int num_nodes, const std::vector<Edge>& edges,
                                  const GcnOptions& options) {
  // (target, source): messages flow from source to target.
  std::set<std::pair<int, int>> links;
  for (const auto& [from, to] : edges) {
    if (from < 0 || to < 0 || from >= num_nodes || to >= num_nodes)
      throw PreconditionError("edge endpoint outside the graph");
    links.emplace(to, from);
    if (options.symmetrize) links.emplace(from, to);
  }
  if (options.self_loops)
    for (int i = 0; i < num_nodes; ++i) links.emplace(i, i);

  std::vector<double> degree(static_cast<size_t>(num_nodes), 0.0);
  for (const auto& link : links) degree[static_cast<size_t>(link.first)] += 1.0;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(links.size());
  for (const auto& [i, j] : links) {
    const double d = degree[static_cast<size_t>(i)] * degree[static_cast<size_t>(j)];
    // Without symmetrization a source may have no predecessors of its own.
    if (d > 0.0) triplets.emplace_back(i, j, 1.0 / std::sqrt(d));
  }
  SparseMatrix s(num_nodes, num_nodes);
  s.setFromTriplets(triplets.begin(), triplets.end());
  return s;
}

GraphBatch make_graph_batch(const std::vector<const Acfg*>& graphs, const GcnOptions& options) {
  GraphBatch batch;
  batch.offsets.push_back(0);
  for (const Acfg* g : graphs) {
    if (g->num_nodes() == 0) throw PreconditionError("empty graph");
    batch.offsets.push_back(batch.offsets.back() + g->num_nodes());
  }
  const int n = batch.offsets.back();
  batch.features.resize(n, kBlockFeatureDim);
  std::vector<Eigen::Triplet<double>> triplets;
  for (size_t k = 0; k < graphs.size(); ++k) {
    const Acfg& g = *graphs[k];
    const int base = batch.offsets[k];
    if (g.node_features.cols() != kBlockFeatureDim)
      throw PreconditionError("node features must have " + std::to_string(kBlockFeatureDim) +
                              " columns");
    batch.features.middleRows(base, g.num_nodes()) = g.node_features;
    const SparseMatrix s = normalized_adjacency(g.num_nodes(), g.edges, options);
    for (int r = 0; r < s.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(s, r); it; ++it)
        triplets.emplace_back(base + r, base + static_cast<int>(it.col()), it.value());
  }
  batch.propagation.resize(n, n);
  batch.propagation.setFromTriplets(triplets.begin(), triplets.end());
  return batch;
}

GcnTape gcn_forward(const GraphBatch& batch, const GcnParams& params) {
  GcnTape tape;
  tape.encoder_pre = batch.features * params.encoder_weight;
  tape.encoder_pre.rowwise() += params.encoder_bias.transpose();
  tape.states.push_back(relu(tape.encoder_pre));
  for (const Matrix& w : params.layers) {
    tape.aggregated.push_back(batch.propagation * tape.states.back());
    tape.pre.push_back(tape.aggregated.back() * w.transpose());
    tape.states.push_back(relu(tape.pre.back()));
  }
  const Matrix& last = tape.states.back();
  tape.readout.resize(batch.num_graphs(), params.hidden_dim());
  for (int g = 0; g < batch.num_graphs(); ++g)
    tape.readout.row(g) =
        last.middleRows(batch.offsets[g], batch.offsets[g + 1] - batch.offsets[g]).colwise().sum();
  return tape;
}

Vector gcn_forward(const Acfg& acfg, const GcnParams& params, const GcnOptions& options) {
  const GraphBatch batch = make_graph_batch({&acfg}, options);
  return gcn_forward(batch, params).readout.row(0).transpose();
}

GcnGrads GcnGrads::zeros_like(const GcnParams& params) {
  GcnGrads g;
  g.encoder_weight = Matrix::Zero(params.encoder_weight.rows(), params.encoder_weight.cols());
  g.encoder_bias = Vector::Zero(params.encoder_bias.size());
  for (const Matrix& w : params.layers) g.layers.push_back(Matrix::Zero(w.rows(), w.cols()));
  return g;
}

void gcn_backward(const GraphBatch& batch, const GcnParams& params, const GcnTape& tape,
                  const Matrix& grad_readout, GcnGrads& grads) {
  // Summation readout: every node of graph g receives that graph's gradient.
  Matrix grad_state(batch.num_nodes(), params.hidden_dim());
  for (int g = 0; g < batch.num_graphs(); ++g)
    for (int i = batch.offsets[g]; i < batch.offsets[g + 1]; ++i)
      grad_state.row(i) = grad_readout.row(g);

  for (int l = params.num_layers() - 1; l >= 0; --l) {
    const size_t ul = static_cast<size_t>(l);
    const Matrix grad_pre = relu_backward(grad_state, tape.pre[ul]);
    grads.layers[ul].noalias() += grad_pre.transpose() * tape.aggregated[ul];
    const Matrix grad_aggregated = grad_pre * params.layers[ul];
    grad_state = batch.propagation.transpose() * grad_aggregated;
  }
  const Matrix grad_encoder_pre = relu_backward(grad_state, tape.encoder_pre);
  grads.encoder_weight.noalias() += batch.features.transpose() * grad_encoder_pre;
  grads.encoder_bias += grad_encoder_pre.colwise().sum().transpose();
}

}  // namespace foc
