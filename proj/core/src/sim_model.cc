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

#include "foc/sim_model.h"

#include <charconv>
#include <random>
#include <sstream>

#include "foc/binary_io.h"
#include "foc/dedup.h"
#include "foc/output_header.h"
#include "foc/parallel.h"

namespace foc {
namespace {

int parse_int(const std::string& key, const std::string& value) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + value + "'");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string config_text(const std::map<std::string, std::string>& m) {
  std::string out;
  for (const auto& [k, v] : m) out += k + " = " + v + "\n";
  return out;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw IoError("bad config line in checkpoint: " + line);
    m[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return m;
}

Matrix xavier(int rows, int cols, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / (rows + cols));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

void expect_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols)
    throw IoError("checkpoint tensor '" + what + "' has shape " + std::to_string(m.rows()) + "x" +
                  std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                  std::to_string(cols));
}

}  // namespace

std::map<std::string, std::string> ModelConfig::to_map() const {
  return {{"sem_dim", std::to_string(sem_dim)},
          {"graph_dim", std::to_string(graph_dim)},
          {"gcn_layers", std::to_string(gcn_layers)},
          {"output_dim", std::to_string(output_dim)},
          {"vocab_size", std::to_string(vocab_size)},
          {"oov_buckets", std::to_string(oov_buckets)},
          {"gcn_self_loops", bool_text(gcn.self_loops)},
          {"gcn_symmetrize", bool_text(gcn.symmetrize)},
          {"use_semantic", bool_text(use_semantic)},
          {"use_structure", bool_text(use_structure)},
          {"use_crypto", bool_text(use_crypto)},
          {"normalize_sources", bool_text(normalize_sources)},
          {"seed", std::to_string(seed)}};
}

ModelConfig ModelConfig::from_map(const std::map<std::string, std::string>& values) {
  ModelConfig c;
  for (const auto& [k, v] : values) {
    if (k == "sem_dim") c.sem_dim = parse_int(k, v);
    else if (k == "graph_dim") c.graph_dim = parse_int(k, v);
    else if (k == "gcn_layers") c.gcn_layers = parse_int(k, v);
    else if (k == "output_dim") c.output_dim = parse_int(k, v);
    else if (k == "vocab_size") c.vocab_size = parse_int(k, v);
    else if (k == "oov_buckets") c.oov_buckets = parse_int(k, v);
    else if (k == "gcn_self_loops") c.gcn.self_loops = parse_bool(k, v);
    else if (k == "gcn_symmetrize") c.gcn.symmetrize = parse_bool(k, v);
    else if (k == "use_semantic") c.use_semantic = parse_bool(k, v);
    else if (k == "use_structure") c.use_structure = parse_bool(k, v);
    else if (k == "use_crypto") c.use_crypto = parse_bool(k, v);
    else if (k == "normalize_sources") c.normalize_sources = parse_bool(k, v);
    else if (k == "seed") {
      try {
        size_t used = 0;
        c.seed = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
      } catch (const std::exception&) {
        throw ConfigError("'seed' expects an unsigned integer, got '" + v + "'");
      }
    } else {
      throw ConfigError("unknown model setting '" + k + "'");
    }
  }
  if (c.sem_dim < 1 || c.graph_dim < 1 || c.output_dim < 1 || c.gcn_layers < 0 ||
      c.vocab_size < 1 || c.oov_buckets < 1)
    throw ConfigError("model dimensions must be positive");
  return c;
}

Vector fuse(const Vector& sem, const Vector& structure, const Vector& crypto,
            const FusionParams& params) {
  const Eigen::Index n = sem.size() + structure.size() + crypto.size();
  if (n != params.weight.rows() || params.bias.size() != params.weight.cols())
    throw PreconditionError("fusion input has " + std::to_string(n) + " components, expected " +
                            std::to_string(params.weight.rows()));
  Vector x(n);
  x << sem, structure, crypto;
  return params.weight.transpose() * x + params.bias;
}

SimModel::SimModel(ModelConfig config_in, Tokenizer tokenizer_in, OpcodeCategoryMap opcodes_in,
                   CryptoRegistry registry_in)
    : config(std::move(config_in)),
      tokenizer(std::move(tokenizer_in)),
      opcodes(std::move(opcodes_in)),
      registry(std::move(registry_in)) {
  if (tokenizer.vocab_size() != config.vocab_size || tokenizer.oov_buckets() != config.oov_buckets)
    throw ConfigError("tokenizer size does not match the model config");
  std::mt19937_64 rng(config.seed);
  encoder = make_sem_encoder(tokenizer.table_size(), config.sem_dim, rng);
  gcn = make_gcn_params(config.graph_dim, config.gcn_layers, rng);
  fusion.weight = xavier(fusion_input_dim(), config.output_dim, rng);
  fusion.bias = Vector::Zero(config.output_dim);
}

int SimModel::crypto_dim() const { return 4 + static_cast<int>(registry.vector_size()); }

FunctionInputs SimModel::prepare(const FunctionRecord& record) const {
  FunctionInputs in;
  in.acfg = build_acfg(record, opcodes);
  in.tokens = tokenizer.encode(record.pseudo_code);
  in.crypto = crypto_features(record, registry);
  return in;
}

ForwardTape SimModel::forward(const std::vector<const FunctionInputs*>& batch) const {
  if (batch.empty()) throw PreconditionError("empty forward batch");
  ForwardTape tape;
  tape.inputs = batch;
  const auto b = static_cast<Eigen::Index>(batch.size());
  const int ds = config.sem_dim, dg = config.graph_dim, dc = crypto_dim();
  tape.raw_input = Matrix::Zero(b, fusion_input_dim());

  std::vector<const Acfg*> graphs;
  for (const auto* in : batch) graphs.push_back(&in->acfg);
  tape.graphs = make_graph_batch(graphs, config.gcn);
  tape.gcn = gcn_forward(tape.graphs, gcn);

  for (Eigen::Index i = 0; i < b; ++i) {
    const FunctionInputs& in = *batch[static_cast<size_t>(i)];
    if (in.crypto.size() != dc) throw PreconditionError("crypto feature length mismatch");
    if (config.use_semantic) tape.raw_input.row(i).head(ds) = encode(in.tokens, encoder);
    if (config.use_structure) tape.raw_input.row(i).segment(ds, dg) = tape.gcn.readout.row(i);
    if (config.use_crypto) tape.raw_input.row(i).tail(dc) = in.crypto;
  }
  tape.fused_input = tape.raw_input;
  tape.source_norms = Matrix::Zero(b, 3);
  if (config.normalize_sources) {
    const int starts[3] = {0, ds, ds + dg}, lens[3] = {ds, dg, dc};
    for (Eigen::Index i = 0; i < b; ++i) {
      for (int s = 0; s < 3; ++s) {
        auto seg = tape.fused_input.row(i).segment(starts[s], lens[s]);
        const double norm = seg.norm();
        tape.source_norms(i, s) = norm;
        if (norm > 0.0) seg /= norm;
      }
    }
  }
  tape.output = tape.fused_input * fusion.weight;
  tape.output.rowwise() += fusion.bias.transpose();
  return tape;
}

ModelGrads SimModel::zero_grads() const {
  ModelGrads g;
  if (!encoder.frozen)
    g.embedding = Matrix::Zero(encoder.embedding.rows(), encoder.embedding.cols());
  g.gcn = GcnGrads::zeros_like(gcn);
  g.fusion_weight = Matrix::Zero(fusion.weight.rows(), fusion.weight.cols());
  g.fusion_bias = Vector::Zero(fusion.bias.size());
  return g;
}

void SimModel::backward(const ForwardTape& tape, const Matrix& grad_output,
                        ModelGrads& grads) const {
  grads.fusion_weight.noalias() += tape.fused_input.transpose() * grad_output;
  grads.fusion_bias += grad_output.colwise().sum().transpose();
  Matrix grad_input = grad_output * fusion.weight.transpose();
  const int ds = config.sem_dim, dg = config.graph_dim, dc = crypto_dim();
  if (config.normalize_sources) {
    // d(x/|x|) = (g - u (u . g)) / |x| per source segment.
    const int starts[3] = {0, ds, ds + dg}, lens[3] = {ds, dg, dc};
    for (Eigen::Index i = 0; i < grad_input.rows(); ++i) {
      for (int s = 0; s < 3; ++s) {
        auto g = grad_input.row(i).segment(starts[s], lens[s]);
        const double norm = tape.source_norms(i, s);
        if (norm == 0.0) {
          g.setZero();
          continue;
        }
        const auto u = tape.fused_input.row(i).segment(starts[s], lens[s]);
        g = (g - u.dot(g) * u) / norm;
      }
    }
  }
  if (config.use_structure)
    gcn_backward(tape.graphs, gcn, tape.gcn, grad_input.middleCols(ds, dg), grads.gcn);
  if (config.use_semantic && !encoder.frozen) {
    for (size_t i = 0; i < tape.inputs.size(); ++i)
      encode_backward(tape.inputs[i]->tokens,
                      grad_input.row(static_cast<Eigen::Index>(i)).head(ds).transpose(),
                      grads.embedding);
  }
}

std::vector<ParamSlot> SimModel::param_slots(ModelGrads& grads) {
  std::vector<ParamSlot> slots;
  if (!encoder.frozen) slots.push_back(slot(encoder.embedding, grads.embedding));
  slots.push_back(slot(gcn.encoder_weight, grads.gcn.encoder_weight));
  slots.push_back(slot(gcn.encoder_bias, grads.gcn.encoder_bias));
  for (size_t l = 0; l < gcn.layers.size(); ++l)
    slots.push_back(slot(gcn.layers[l], grads.gcn.layers[l]));
  slots.push_back(slot(fusion.weight, grads.fusion_weight));
  slots.push_back(slot(fusion.bias, grads.fusion_bias));
  return slots;
}

FunctionEmbedding SimModel::embed(const FunctionRecord& record) const {
  const FunctionInputs in = prepare(record);
  const ForwardTape tape = forward({&in});
  return {record.id, meta_of(record), tape.output.row(0).transpose()};
}

std::vector<FunctionEmbedding> SimModel::embed_all(const std::vector<FunctionRecord>& records) const {
  // One forward pass per record: batched products round differently, and a
  // function must embed to the same bits however it is submitted.
  std::vector<FunctionEmbedding> out(records.size());
  parallel_for(records.size(), [&](size_t i) { out[i] = embed(records[i]); });
  return out;
}

Archive SimModel::to_archive() const {
  Archive a;
  OutputHeader header = default_header();
  header.config = config.to_map();
  a.put_text("header", header.to_json_line());
  a.put_text("config", config_text(config.to_map()));
  a.put_text("frozen", std::string("encoder = ") + (encoder.frozen ? "true" : "false") + "\n");
  a.put_text("tokenizer.vocab", tokenizer.vocab_text());
  a.put_text("opcodes.map", opcodes.to_file_text());
  a.put_text("opcodes.vocab", opcodes.vocab_text());
  a.put_text("registry", registry.to_file_text());
  std::string disabled;
  for (const auto& f : registry.disabled_forms()) disabled += f + "\n";
  a.put_text("registry.disabled", disabled);
  a.put_tensor("encoder.embedding", encoder.embedding);
  a.put_tensor("gcn.encoder.weight", gcn.encoder_weight);
  a.put_tensor("gcn.encoder.bias", gcn.encoder_bias);
  for (size_t l = 0; l < gcn.layers.size(); ++l)
    a.put_tensor("gcn.layer." + std::to_string(l + 1), gcn.layers[l]);
  a.put_tensor("fusion.weight", fusion.weight);
  a.put_tensor("fusion.bias", fusion.bias);
  return a;
}

SimModel SimModel::from_archive(const Archive& a) {
  ModelConfig config;
  try {
    config = ModelConfig::from_map(parse_config_text(a.text("config")));
  } catch (const ConfigError& e) {
    throw IoError(std::string("checkpoint config: ") + e.what());
  }
  Tokenizer tokenizer(config.vocab_size, config.oov_buckets);
  tokenizer.set_vocab_text(a.text("tokenizer.vocab"));
  OpcodeCategoryMap opcodes = OpcodeCategoryMap::from_file_text(a.text("opcodes.map"));
  opcodes.set_vocab_text(a.text("opcodes.vocab"));
  std::set<std::string> disabled;
  {
    std::istringstream in(a.text("registry.disabled"));
    for (std::string line; std::getline(in, line);)
      if (!line.empty()) disabled.insert(line);
  }
  CryptoRegistry registry =
      CryptoRegistry::from_file_text(a.text("registry")).with_disabled(disabled);

  SimModel m(config, std::move(tokenizer), std::move(opcodes), std::move(registry));
  const auto frozen = parse_config_text(a.text("frozen"));
  m.encoder.frozen = frozen.count("encoder") && frozen.at("encoder") == "true";

  m.encoder.embedding = a.tensor("encoder.embedding");
  expect_shape(m.encoder.embedding, m.tokenizer.table_size(), config.sem_dim, "encoder.embedding");
  m.gcn.encoder_weight = a.tensor("gcn.encoder.weight");
  expect_shape(m.gcn.encoder_weight, kBlockFeatureDim, config.graph_dim, "gcn.encoder.weight");
  m.gcn.encoder_bias = a.vector("gcn.encoder.bias");
  expect_shape(Matrix(m.gcn.encoder_bias.transpose()), 1, config.graph_dim, "gcn.encoder.bias");
  for (int l = 0; l < config.gcn_layers; ++l) {
    const std::string name = "gcn.layer." + std::to_string(l + 1);
    m.gcn.layers[static_cast<size_t>(l)] = a.tensor(name);
    expect_shape(m.gcn.layers[static_cast<size_t>(l)], config.graph_dim, config.graph_dim, name);
  }
  m.fusion.weight = a.tensor("fusion.weight");
  expect_shape(m.fusion.weight, m.fusion_input_dim(), config.output_dim, "fusion.weight");
  m.fusion.bias = a.vector("fusion.bias");
  expect_shape(Matrix(m.fusion.bias.transpose()), 1, config.output_dim, "fusion.bias");
  return m;
}

std::string SimModel::serialize() const { return to_archive().serialize(kCheckpointMagic); }

void SimModel::save(const std::string& path) const { write_file(path, serialize()); }

SimModel SimModel::load(const std::string& path) {
  try {
    return from_archive(Archive::parse(read_file(path), kCheckpointMagic));
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::string SimModel::hash() const { return to_hex(md5(serialize())); }

SimModel make_model(const Corpus& corpus, ModelConfig config, const OpcodeCategoryMap& base_map,
                    const CryptoRegistry& registry) {
  Tokenizer tokenizer(config.vocab_size, config.oov_buckets);
  std::vector<std::string> texts;
  texts.reserve(corpus.records.size());
  for (const auto& r : corpus.records) texts.push_back(r.pseudo_code);
  tokenizer.build(texts);
  return SimModel(std::move(config), std::move(tokenizer), build_vocab(corpus, base_map), registry);
}

}  // namespace foc
