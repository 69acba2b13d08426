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

#ifndef FOC_GCN_H_
#define FOC_GCN_H_

#include <random>
#include <vector>

#include <Eigen/SparseCore>

#include "foc/common.h"
#include "foc/features.h"

namespace foc {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct GcnOptions {
  // Add i->i to every node before normalizing. Off gives the literal sum over
  // neighbors only, where an isolated node receives no messages.
  bool self_loops = true;
  // Treat CFG edges as undirected. Off aggregates over predecessors only.
  bool symmetrize = true;
};

struct GcnParams {
  Matrix encoder_weight;  // kBlockFeatureDim x d_g
  Vector encoder_bias;    // d_g
  std::vector<Matrix> layers;  // d_g x d_g each, applied as h -> W h

  int hidden_dim() const { return static_cast<int>(encoder_weight.cols()); }
  int num_layers() const { return static_cast<int>(layers.size()); }
};

GcnParams make_gcn_params(int hidden_dim, int num_layers, std::mt19937_64& rng);

// D^-1/2 A D^-1/2 for one graph; degrees are row sums of the 0/1 adjacency
// after symmetrizing and self-loop insertion. Zero-degree rows stay empty.
SparseMatrix normalized_adjacency(int num_nodes, const std::vector<Edge>& edges,
                                  const GcnOptions& options);

// Disjoint union of graphs: stacked node features and a block-diagonal
// propagation matrix. Graph g owns rows [offsets[g], offsets[g + 1]).
struct GraphBatch {
  Matrix features;
  SparseMatrix propagation;
  std::vector<int> offsets;

  int num_graphs() const { return static_cast<int>(offsets.size()) - 1; }
  int num_nodes() const { return offsets.back(); }
};

GraphBatch make_graph_batch(const std::vector<const Acfg*>& graphs, const GcnOptions& options);

// Intermediate values of one forward pass, kept for the backward pass.
struct GcnTape {
  Matrix encoder_pre;             // X E + b
  std::vector<Matrix> states;     // h(0) .. h(L), each num_nodes x d_g
  std::vector<Matrix> aggregated; // S h(l-1) for l = 1..L
  std::vector<Matrix> pre;        // S h(l-1) W^T for l = 1..L
  Matrix readout;                 // num_graphs x d_g
};

GcnTape gcn_forward(const GraphBatch& batch, const GcnParams& params);

// Readout of a single graph.
Vector gcn_forward(const Acfg& acfg, const GcnParams& params, const GcnOptions& options = {});

struct GcnGrads {
  Matrix encoder_weight;
  Vector encoder_bias;
  std::vector<Matrix> layers;

  static GcnGrads zeros_like(const GcnParams& params);
};

// Accumulates the gradient of a loss whose gradient w.r.t. the readout is
// `grad_readout` (num_graphs x d_g).
void gcn_backward(const GraphBatch& batch, const GcnParams& params, const GcnTape& tape,
                  const Matrix& grad_readout, GcnGrads& grads);

}  // namespace foc

#endif  // FOC_GCN_H_
