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

#ifndef FOC_SIM_MODEL_H_
#define FOC_SIM_MODEL_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "foc/archive.h"
#include "foc/common.h"
#include "foc/crypto_registry.h"
#include "foc/embedding.h"
#include "foc/features.h"
#include "foc/gcn.h"
#include "foc/opcode_map.h"
#include "foc/optimizer.h"
#include "foc/record.h"
#include "foc/sem_encoder.h"
#include "foc/tokenizer.h"

namespace foc {

struct ModelConfig {
  int sem_dim = 256;
  int graph_dim = 128;
  int gcn_layers = 5;
  int output_dim = 256;
  int vocab_size = 8192;
  int oov_buckets = 1024;
  GcnOptions gcn;
  // Ablation switches: a disabled source enters the fusion layer as zeros.
  bool use_semantic = true;
  bool use_structure = true;
  bool use_crypto = true;
  // Scale each source vector to unit length before fusion so that raw counts
  // cannot drown out the pooled token embeddings. Zero vectors stay zero.
  bool normalize_sources = true;
  uint64_t seed = 1;

  std::map<std::string, std::string> to_map() const;
  // Unknown keys and unparsable values throw ConfigError; absent keys keep
  // their defaults.
  static ModelConfig from_map(const std::map<std::string, std::string>& values);
};

struct FusionParams {
  Matrix weight;  // (sem + graph + crypto) x output
  Vector bias;
};

// weight^T [sem; structure; crypto] + bias. Throws PreconditionError when the
// concatenated length does not match the weight.
Vector fuse(const Vector& sem, const Vector& structure, const Vector& crypto,
            const FusionParams& params);

// Everything the forward pass needs from one record.
struct FunctionInputs {
  std::vector<int> tokens;
  Acfg acfg;
  Vector crypto;
};

struct ForwardTape {
  std::vector<const FunctionInputs*> inputs;
  GraphBatch graphs;
  GcnTape gcn;
  Matrix raw_input;    // batch x (sem + graph + crypto), ablated parts zero
  Matrix source_norms; // batch x 3, zero when normalization is off
  Matrix fused_input;  // raw_input after per-source normalization
  Matrix output;       // batch x output_dim
};

struct ModelGrads {
  Matrix embedding;  // empty while the encoder is frozen
  GcnGrads gcn;
  Matrix fusion_weight;
  Vector fusion_bias;
};

// Tokenizer, opcode vocabularies, keyword registry, and all parameters.
// Forward passes are const and safe to run concurrently.
class SimModel {
 public:
  // Random parameters drawn from config.seed. The crypto vector length follows
  // the registry.
  SimModel(ModelConfig config, Tokenizer tokenizer, OpcodeCategoryMap opcodes,
           CryptoRegistry registry);

  ModelConfig config;
  Tokenizer tokenizer;
  OpcodeCategoryMap opcodes;
  CryptoRegistry registry;
  SemEncoder encoder;
  GcnParams gcn;
  FusionParams fusion;

  int crypto_dim() const;
  int fusion_input_dim() const { return config.sem_dim + config.graph_dim + crypto_dim(); }

  FunctionInputs prepare(const FunctionRecord& record) const;
  ForwardTape forward(const std::vector<const FunctionInputs*>& batch) const;

  ModelGrads zero_grads() const;
  // Accumulates gradients for `grad_output` (batch x output_dim).
  void backward(const ForwardTape& tape, const Matrix& grad_output, ModelGrads& grads) const;
  // Trainable tensors paired with their gradients, in a fixed order. The
  // encoder table is included only when it is not frozen.
  std::vector<ParamSlot> param_slots(ModelGrads& grads);

  FunctionEmbedding embed(const FunctionRecord& record) const;
  // Parallel over records; output order follows the input and every vector
  // is bit-identical to embed() of the same record.
  std::vector<FunctionEmbedding> embed_all(const std::vector<FunctionRecord>& records) const;

  Archive to_archive() const;
  static SimModel from_archive(const Archive& archive);
  std::string serialize() const;
  void save(const std::string& path) const;
  static SimModel load(const std::string& path);
  // Hex MD5 of the serialized checkpoint.
  std::string hash() const;
};

inline constexpr std::string_view kCheckpointMagic = "FOCCKPT1";

// Tokenizer and opcode vocabularies fitted to `corpus`, fresh parameters.
SimModel make_model(const Corpus& corpus, ModelConfig config,
                    const OpcodeCategoryMap& base_map = default_opcode_map(),
                    const CryptoRegistry& registry = default_registry());

}  // namespace foc

#endif  // FOC_SIM_MODEL_H_
