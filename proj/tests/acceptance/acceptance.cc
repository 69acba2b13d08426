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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails. With --out, the measured values
// (without timings) are also written as line-delimited JSON.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.h"
#include "foc/binary_io.h"
#include "foc/corpus_io.h"
#include "foc/crypto_registry.h"
#include "foc/embedding.h"
#include "foc/gcn.h"
#include "foc/metrics.h"
#include "foc/search.h"
#include "foc/sem_encoder.h"
#include "foc/sim_model.h"
#include "foc/sim_train.h"
#include "foc/synthetic.h"
#include "foc/text_metrics.h"
#include "oracles.h"

namespace foc {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
  json values = json::object();
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ------------------------------------------------------------------ 1

// Synthetic embeddings: `groups` functions rendered under the four build
// profiles, each a random direction.
std::vector<FunctionEmbedding> random_embeddings(int groups, int dim, std::mt19937_64& rng) {
  std::vector<FunctionEmbedding> out;
  for (int g = 0; g < groups; ++g)
    for (int v = 0; v < 4; ++v) {
      const BuildProfile p = build_profile(v);
      FunctionEmbedding e;
      e.id = "g" + std::to_string(g) + "v" + std::to_string(v);
      e.meta.project = "p";
      e.meta.binary = "b" + std::to_string(v);
      e.meta.source_file = "f.c";
      e.meta.name = "fn" + std::to_string(g);
      e.meta.compiler = p.compiler;
      e.meta.compiler_version = p.compiler_version;
      e.meta.opt = p.opt;
      e.meta.arch = p.arch;
      e.meta.bits = p.bits;
      e.vector = testing::random_vector(dim, rng);
      out.push_back(std::move(e));
    }
  return out;
}

// Position of the positive after sorting every candidate by descending
// cosine, ties by ascending id.
int exhaustive_rank(const Pool& pool, const std::map<std::string, const FunctionEmbedding*>& by_id) {
  auto cosine = [&](const std::string& a, const std::string& b) {
    const Vector& x = by_id.at(a)->vector;
    const Vector& y = by_id.at(b)->vector;
    double dot = 0, nx = 0, ny = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      dot += x[i] * y[i];
      nx += x[i] * x[i];
      ny += y[i] * y[i];
    }
    return dot / std::sqrt(nx * ny);
  };
  std::vector<std::pair<double, std::string>> all{{cosine(pool.query, pool.positive), pool.positive}};
  for (const auto& n : pool.negatives) all.emplace_back(cosine(pool.query, n), n);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (size_t i = 0; i < all.size(); ++i)
    if (all[i].second == pool.positive) return static_cast<int>(i) + 1;
  return -1;
}

Outcome metric_oracles() {
  Stopwatch sw;
  Outcome o;
  std::mt19937_64 rng(101);

  int auc_mismatch = 0;
  std::uniform_int_distribution<int> size(1, 200), coarse(0, 25);
  for (int t = 0; t < 100; ++t) {
    std::vector<ScoredPair> pairs;
    const int np = size(rng), nn = size(rng);
    for (int i = 0; i < np; ++i) pairs.push_back({coarse(rng) / 25.0, true});
    for (int i = 0; i < nn; ++i) pairs.push_back({coarse(rng) / 25.0 - 0.1, false});
    std::shuffle(pairs.begin(), pairs.end(), rng);
    auc_mismatch += auc(pairs) != testing::brute_auc(pairs);
  }

  double rank_err = 0;
  int pools_checked = 0;
  const std::vector<int> ks = {1, 5, 10};
  for (int t = 0; t < 100; ++t) {
    const int groups = std::uniform_int_distribution<int>(5, 30)(rng);
    const auto embs = random_embeddings(groups, 8, rng);
    std::map<std::string, const FunctionEmbedding*> by_id;
    for (const auto& e : embs) by_id[e.id] = &e;
    const int pool_size = std::uniform_int_distribution<int>(2, std::min(50, 4 * (groups - 1) + 1))(rng);
    const PoolSet set = build_pools(embs, {SubTask::kXM, pool_size, static_cast<uint64_t>(t)});
    const auto outcomes = evaluate_pools(set, EmbeddingIndex(embs));
    const BcsdReport rep = summarize_pools(set, outcomes, ks);
    std::vector<int> ranks;
    for (const auto& pool : set.pools) ranks.push_back(exhaustive_rank(pool, by_id));
    pools_checked += static_cast<int>(set.pools.size());
    for (int k : ks) {
      double recall = 0, mrr = 0;
      for (int r : ranks) {
        recall += r <= k ? 1.0 : 0.0;
        mrr += r <= k ? 1.0 / r : 0.0;
      }
      recall /= static_cast<double>(ranks.size());
      mrr /= static_cast<double>(ranks.size());
      rank_err = std::max({rank_err, std::abs(recall - rep.recall.at(k)), std::abs(mrr - rep.mrr.at(k))});
    }
  }

  auto tok = text_tokens;
  const std::vector<std::pair<double, double>> text = {
      {rouge_l(tok("a b c"), tok("a c")), 26.0 / 35.0},
      {bleu4(tok("the quick brown fox jumps"), tok("the quick brown fox jumps")).value, 1.0},
      {bleu4(tok("a b c d"), tok("a b c d e f g h")).value, std::exp(-1.0)},
      {meteor(tok("a"), tok("a")), 0.5},
      {meteor(tok("a b c d"), tok("a b c d")), 0.9921875},
  };
  double text_err = 0;
  for (const auto& [got, want] : text) text_err = std::max(text_err, std::abs(got - want));

  const double secs = sw.seconds();
  o.pass = auc_mismatch == 0 && rank_err <= 1e-12 && text_err <= 1e-12 && secs < 10.0;
  o.detail = "auc mismatches " + std::to_string(auc_mismatch) + "/100, recall/mrr max diff " + sci(rank_err) +
             " over " + std::to_string(pools_checked) + " pools, text max diff " + sci(text_err);
  o.values = {{"auc_mismatches", auc_mismatch}, {"rank_metric_max_diff", rank_err},
              {"pools", pools_checked}, {"text_max_diff", text_err}};
  return o;
}

// ------------------------------------------------------------------ 2

Outcome gcn_oracle() {
  Stopwatch sw;
  Outcome o;
  std::mt19937_64 rng(202);
  double layer_err = 0, perm_err = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 8;
    const Acfg g = testing::random_acfg(n, std::uniform_real_distribution<double>(0.1, 0.6)(rng), rng);
    const GcnOptions opts{(t / 8) % 2 == 0, (t / 16) % 2 == 0};
    GcnParams p = make_gcn_params(6, 5, rng);
    p.encoder_bias = Vector::Constant(6, 0.1);
    const GraphBatch batch = make_graph_batch({&g}, opts);
    const GcnTape tape = gcn_forward(batch, p);
    const auto dense = testing::dense_gcn_states(g, p, opts.self_loops, opts.symmetrize);
    for (size_t l = 0; l < dense.size(); ++l)
      layer_err = std::max(layer_err, (tape.states[l] - dense[l]).cwiseAbs().maxCoeff());
    layer_err = std::max(layer_err, (Matrix(batch.propagation) -
                                     testing::dense_propagation(n, g.edges, opts.self_loops, opts.symmetrize))
                                        .cwiseAbs()
                                        .maxCoeff());

    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Acfg q;
    q.node_features = Matrix(n, kBlockFeatureDim);
    for (int i = 0; i < n; ++i) q.node_features.row(perm[i]) = g.node_features.row(i);
    for (const auto& [from, to] : g.edges) q.edges.emplace_back(perm[from], perm[to]);
    perm_err = std::max(perm_err, (gcn_forward(g, p, opts) - gcn_forward(q, p, opts)).cwiseAbs().maxCoeff());
  }
  const double secs = sw.seconds();
  o.pass = layer_err <= 1e-10 && perm_err <= 1e-9 && secs < 30.0;
  o.detail = "200 graphs, layer max diff " + sci(layer_err) + ", permutation max diff " + sci(perm_err);
  o.values = {{"layer_max_diff", layer_err}, {"permutation_max_diff", perm_err}};
  return o;
}

// ------------------------------------------------------------------ 3

double encoder_loss_gradient_error(std::mt19937_64& rng) {
  SemEncoder enc = make_sem_encoder(12, 5, rng);
  std::uniform_int_distribution<int> token(1, 11), len(1, 8);
  std::vector<int> a(static_cast<size_t>(len(rng))), b(static_cast<size_t>(len(rng)));
  for (int& x : a) x = token(rng);
  for (int& x : b) x = token(rng);
  const ContrastiveGrad g = contrastive_loss_grad(encode(a, enc), encode(b, enc));
  Matrix analytic = Matrix::Zero(12, 5);
  encode_backward(a, g.grad_source, analytic);
  encode_backward(b, g.grad_binary, analytic);
  Matrix numeric(12, 5);
  const double h = 1e-5;
  for (Eigen::Index i = 0; i < enc.embedding.size(); ++i) {
    double& v = enc.embedding.data()[i];
    const double keep = v;
    v = keep + h;
    const double up = contrastive_loss(encode(a, enc), encode(b, enc));
    v = keep - h;
    const double down = contrastive_loss(encode(a, enc), encode(b, enc));
    v = keep;
    numeric.data()[i] = (up - down) / (2 * h);
  }
  return testing::relative_error(analytic, numeric);
}

Outcome gradient_checks() {
  Stopwatch sw;
  Outcome o;
  SyntheticConfig sc;
  sc.groups = 3;
  sc.variants = 1;
  sc.train_variants = 1;
  sc.seed = 303;
  const Corpus corpus = make_synthetic_benchmark(sc).train;
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> small(3, 6), graph(8, 12), layers(1, 3);
  std::bernoulli_distribution coin(0.5);
  double model_err = 0, mnr_err = 0, enc_err = 0;
  int tensors = 0, silent = 0, kinks = 0;
  for (int t = 0; t < 20; ++t) {
    ModelConfig cfg;
    cfg.sem_dim = small(rng);
    cfg.graph_dim = graph(rng);
    cfg.gcn_layers = layers(rng);
    cfg.output_dim = small(rng);
    cfg.vocab_size = 40;
    cfg.oov_buckets = 4;
    cfg.gcn = {coin(rng), coin(rng)};
    cfg.normalize_sources = coin(rng);
    cfg.seed = 1000 + static_cast<uint64_t>(t);
    SimModel m = make_model(corpus, cfg);
    m.encoder.frozen = false;
    m.gcn.encoder_bias.setConstant(0.05);
    std::vector<FunctionInputs> inputs;
    for (const auto& r : corpus.records) inputs.push_back(m.prepare(r));
    const Matrix r = testing::random_matrix(static_cast<Eigen::Index>(inputs.size()), cfg.output_dim, rng);
    for (const auto& c : testing::model_gradient_check(m, inputs, r)) {
      ++tensors;
      silent += !c.informative;
      kinks += c.kinks;
      model_err = std::max(model_err, c.relative_error);
    }
    const int n = 2 + t % 6;
    const Matrix a = testing::random_matrix(n, 6, rng), p = testing::random_matrix(n, 6, rng);
    const double tau = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    for (LossForm form : {LossForm::kLiteral, LossForm::kStandard})
      mnr_err = std::max(mnr_err, testing::mnr_gradient_error(a, p, tau, form));
    enc_err = std::max(enc_err, encoder_loss_gradient_error(rng));
  }
  const double secs = sw.seconds();
  o.pass = model_err <= 1e-4 && mnr_err <= 1e-4 && enc_err <= 1e-4 && silent == 0 && secs < 120.0;
  o.detail = "20 configs, " + std::to_string(tensors) + " model tensors max rel err " + sci(model_err) +
             (silent ? " (" + std::to_string(silent) + " without signal)" : "") + ", " + std::to_string(kinks) +
             " ReLU-kink coordinates skipped, ranking loss " +
             sci(mnr_err) + ", encoder loss " + sci(enc_err);
  o.values = {{"model_tensors", tensors}, {"tensors_without_signal", silent}, {"kink_coordinates", kinks},
              {"model_max_rel_err", model_err},
              {"ranking_loss_max_rel_err", mnr_err}, {"encoder_loss_max_rel_err", enc_err}};
  return o;
}

// ------------------------------------------------------------------ 4

Outcome loss_closed_forms() {
  Outcome o;
  std::mt19937_64 rng(404);
  double err = 0;
  for (int n : {2, 3, 8}) {
    const Vector row = testing::random_vector(7, rng);
    const Matrix same = row.transpose().replicate(n, 1);
    for (double tau : {0.05, 0.5, 1.0}) {
      err = std::max(err, std::abs(mnr_loss(same, same, tau, LossForm::kLiteral).value - std::log(n - 1.0)));
      err = std::max(err, std::abs(mnr_loss(same, same, tau, LossForm::kStandard).value - std::log(n)));
    }
  }
  const Matrix id = Matrix::Identity(2, 2);
  const double literal = mnr_loss(id, id, 1.0, LossForm::kLiteral).value;
  const double standard = mnr_loss(id, id, 1.0, LossForm::kStandard).value;
  err = std::max({err, std::abs(literal + 1.0), std::abs(standard - std::log1p(std::exp(-1.0)))});
  o.pass = err <= 1e-12;
  o.detail = "identical embeddings N in {2,3,8} and the N=2 mixed case, max diff " + sci(err) +
             " (literal " + fmt(literal, 6) + ", standard " + fmt(standard, 6) + ")";
  o.values = {{"max_diff", err}, {"mixed_literal", literal}, {"mixed_standard", standard}};
  return o;
}

// ------------------------------------------------------------------ 5

Outcome discriminator_fidelity(const std::string& table_path) {
  Outcome o;
  const CryptoRegistry& reg = default_registry();
  int forms = 0, closure_fail = 0, category_fail = 0;
  std::vector<std::string> failures;
  std::istringstream table(read_file(table_path));
  std::string line;
  while (std::getline(table, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
    cols.resize(3);
    const std::string& canonical = cols[1];
    std::vector<std::string> all = {canonical};
    std::stringstream as(cols[2]);
    for (std::string a; std::getline(as, a, '|');) all.push_back(a);
    const auto idx = reg.find_class(canonical);
    const std::map<std::string, CryptoCategory> expected_category = {
        {"primitive", CryptoCategory::kPrimitive}, {"block_mode", CryptoCategory::kBlockMode},
        {"ae_mode", CryptoCategory::kAeMode}};
    if (!idx) {
      ++category_fail;
      failures.push_back("missing class " + canonical);
    } else if (const auto it = expected_category.find(cols[0]); it != expected_category.end()) {
      const auto& cls = reg.classes()[*idx];
      if (cls.category != it->second || !cls.in_vector) {
        ++category_fail;
        failures.push_back(canonical + " category");
      }
    }
    for (const auto& form : all) {
      ++forms;
      if (classify_text(form, reg) != std::set<std::string>{canonical}) {
        ++closure_fail;
        failures.push_back(form + " -> " + canonical);
      }
    }
  }
  auto primitive_hits = [](const std::string& text, const CryptoRegistry& r) {
    int hits = 0;
    for (const auto& h : r.scan(text)) hits += r.classes()[h.class_index].category == CryptoCategory::kPrimitive;
    return hits;
  };
  const CryptoRegistry no_curve = reg.with_disabled({"curve"});
  const int control_hits = primitive_hits("aesthetic", reg) + primitive_hits("curved", no_curve) +
                           primitive_hits("an aesthetic, curved design", no_curve) +
                           primitive_hits("desk codec shared", reg) + primitive_hits("the curve", no_curve);
  o.pass = forms > 0 && closure_fail == 0 && category_fail == 0 && control_hits == 0 && reg.vector_size() == 61;
  o.detail = std::to_string(forms) + " forms, closure failures " + std::to_string(closure_fail) +
             ", category failures " + std::to_string(category_fail) + ", negative-control hits " +
             std::to_string(control_hits);
  for (size_t i = 0; i < std::min<size_t>(5, failures.size()); ++i) o.detail += "; " + failures[i];
  o.values = {{"forms", forms}, {"closure_failures", closure_fail}, {"category_failures", category_fail},
              {"negative_control_hits", control_hits}};
  return o;
}

// ------------------------------------------------------------- 6, 7, 8

constexpr int kSimSteps = 400;
constexpr int kEncoderSteps = 300;

struct Eval {
  double auc = 0, recall1 = 0, recall10 = 0;
  size_t queries = 0;
};

Eval evaluate_xm(const std::vector<FunctionEmbedding>& heldout) {
  const PoolSet set = build_pools(heldout, {SubTask::kXM, 101, 7});
  const BcsdReport rep = summarize_pools(set, evaluate_pools(set, EmbeddingIndex(heldout)), {1, 10});
  return {rep.auc, rep.recall.at(1), rep.recall.at(10), rep.queries};
}

struct Trained {
  SimModel model;
  std::vector<double> losses;
  std::optional<EncoderTrainResult> encoder;
};

Trained train(const SyntheticBenchmark& b, ModelConfig cfg, bool train_encoder) {
  Trained t{make_model(b.train, cfg), {}, std::nullopt};
  if (train_encoder) {
    EncoderTrainConfig ec;
    ec.steps = kEncoderSteps;
    t.encoder = train_contrastive(b.source_pairs, t.model.tokenizer, t.model.encoder, ec);
    t.model.encoder = t.encoder->encoder;
  }
  TrainConfig tc;
  tc.steps = kSimSteps;
  t.losses = train_sim(b.train, t.model, tc).losses;
  return t;
}

double window_mean(const std::vector<double>& v, bool tail) {
  const size_t w = std::min<size_t>(100, v.size());
  double s = 0;
  for (size_t i = 0; i < w; ++i) s += v[tail ? v.size() - w + i : i];
  return s / static_cast<double>(w);
}

struct BenchRun {
  SyntheticBenchmark bench;
  std::optional<Trained> frozen;
  std::vector<FunctionEmbedding> heldout, distractors;
  Eval base;
  std::string base_hash, base_embeddings;
};

Outcome end_to_end(BenchRun& run) {
  Stopwatch sw;
  Outcome o;
  SyntheticConfig sc;
  sc.distractor_groups = 400;
  run.bench = make_synthetic_benchmark(sc);

  run.frozen = train(run.bench, ModelConfig{}, false);
  run.heldout = run.frozen->model.embed_all(run.bench.heldout.records);
  run.distractors = run.frozen->model.embed_all(run.bench.distractors.records);
  run.base = evaluate_xm(run.heldout);
  run.base_hash = run.frozen->model.hash();
  std::ostringstream emb;
  write_embeddings(emb, run.heldout);
  run.base_embeddings = emb.str();

  const Trained enc = train(run.bench, ModelConfig{}, true);
  const Eval te = evaluate_xm(enc.model.embed_all(run.bench.heldout.records));

  const double secs = sw.seconds();
  auto ok = [](const Eval& e) { return e.auc >= 0.95 && e.recall1 >= 0.85; };
  o.pass = ok(run.base) && ok(te) && secs <= 600.0;
  o.detail = std::to_string(run.bench.train.records.size()) + " train / " +
             std::to_string(run.bench.heldout.records.size()) + " held-out functions, " +
             std::to_string(run.base.queries) + " XM pools of 101; frozen random encoder AUC " +
             fmt(run.base.auc) + " R@1 " + fmt(run.base.recall1) + "; trained encoder AUC " + fmt(te.auc) +
             " R@1 " + fmt(te.recall1) + " (encoder loss " + fmt(enc.encoder->initial_loss) + " -> " +
             fmt(enc.encoder->final_loss, 6) + ")";
  o.values = {{"queries", run.base.queries},
              {"frozen", {{"auc", run.base.auc}, {"recall@1", run.base.recall1}, {"recall@10", run.base.recall10},
                          {"loss_first100", window_mean(run.frozen->losses, false)},
                          {"loss_last100", window_mean(run.frozen->losses, true)}}},
              {"trained", {{"auc", te.auc}, {"recall@1", te.recall1}, {"recall@10", te.recall10},
                           {"encoder_loss_initial", enc.encoder->initial_loss},
                           {"encoder_loss_final", enc.encoder->final_loss},
                           {"loss_first100", window_mean(enc.losses, false)},
                           {"loss_last100", window_mean(enc.losses, true)}}},
              {"checkpoint", run.base_hash}};
  return o;
}

Outcome pool_trend(const BenchRun& run) {
  Outcome o;
  if (!run.frozen) return {false, "end-to-end run unavailable", {}};
  auto all = run.heldout;
  all.insert(all.end(), run.distractors.begin(), run.distractors.end());
  const std::vector<int> sizes = {10, 100, 1000};
  std::map<int, double> mean;
  for (uint64_t seed = 1; seed <= 5; ++seed)
    for (const SweepRow& row : pool_sweep(all, sizes, seed)) mean[row.pool_size] += row.recall_at_1 / 5.0;
  o.pass = mean[10] >= mean[100] && mean[100] >= mean[1000];
  o.detail = "mean R@1 over 5 seeds: 10 -> " + fmt(mean[10]) + ", 100 -> " + fmt(mean[100]) + ", 1000 -> " +
             fmt(mean[1000]) + " (" + std::to_string(all.size()) + " candidates)";
  for (int s : sizes) o.values["mean_recall@1_" + std::to_string(s)] = mean[s];
  return o;
}

Outcome ablation(const BenchRun& run) {
  Outcome o;
  if (!run.frozen) return {false, "end-to-end run unavailable", {}};
  std::map<std::string, double> drop;
  for (const std::string source : {"semantic", "structure", "crypto"}) {
    ModelConfig cfg;
    cfg.use_semantic = source != "semantic";
    cfg.use_structure = source != "structure";
    cfg.use_crypto = source != "crypto";
    const Trained t = train(run.bench, cfg, false);
    drop[source] = run.base.recall1 - evaluate_xm(t.model.embed_all(run.bench.heldout.records)).recall1;
    o.values["recall@1_without_" + source] = run.base.recall1 - drop[source];
  }
  o.pass = drop["semantic"] > drop["structure"] && drop["semantic"] > drop["crypto"];
  o.detail = "R@1 drop without semantic " + fmt(drop["semantic"]) + ", structure " + fmt(drop["structure"]) +
             ", crypto " + fmt(drop["crypto"]) + " (full " + fmt(run.base.recall1) + ")";
  return o;
}

// ------------------------------------------------------------------ 9

struct PipelineRun {
  std::map<std::string, std::string> files;
  std::vector<std::string> failures;
};

PipelineRun cli_pipeline(const fs::path& dir, const std::string& threads) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto p = [&](const std::string& name) { return (dir / name).string(); };

  SyntheticConfig sc;
  sc.groups = 40;
  sc.seed = 909;
  const SyntheticBenchmark b = make_synthetic_benchmark(sc);
  write_corpus(p("train.jsonl"), b.train);
  write_corpus(p("heldout.jsonl"), b.heldout);
  std::string pairs, pred, ref;
  for (const auto& [src, bin] : b.source_pairs) pairs += json{{"source", src}, {"binary", bin}}.dump() + "\n";
  for (const auto& r : b.heldout.records) {
    pred += "computes " + r.name + " with aes in cbc mode\n";
    ref += "computes " + r.name + " using aes\n";
  }
  write_file(p("pairs.jsonl"), pairs);
  write_file(p("pred.txt"), pred);
  write_file(p("ref.txt"), ref);
  const auto& h = b.heldout.records;
  write_file(p("vuln.jsonl"), json{{"cve", "CVE-0000-0001"},
                                   {"library", "demo"},
                                   {"embeddings", "emb.jsonl"},
                                   {"vulnerable", {h[0].id}},
                                   {"patched", {h[2].id}},
                                   {"ground_truth", {h[1].id}},
                                   {"patched_targets", {h[3].id}}}
                                      .dump() +
                                  "\n");

  const std::vector<std::vector<std::string>> steps = {
      {"ingest", "--in", p("train.jsonl"), "--out", p("corpus.jsonl")},
      {"dedup", "--in", p("corpus.jsonl"), "--out", p("dedup.jsonl")},
      {"classify", "--in", p("dedup.jsonl"), "--out", p("classes.jsonl")},
      {"featurize", "--in", p("dedup.jsonl"), "--out", p("features.jsonl")},
      {"train-encoder", "--pairs", p("pairs.jsonl"), "--corpus", p("dedup.jsonl"), "--out", p("encoder.bin"),
       "--steps", "30", "--sem-dim", "32", "--graph-dim", "32", "--output-dim", "64", "--trace",
       p("encoder_trace.txt")},
      {"train-sim", "--corpus", p("dedup.jsonl"), "--model", p("encoder.bin"), "--out", p("model.bin"), "--steps",
       "60", "--batch", "16", "--trace", p("sim_trace.txt")},
      {"embed", "--in", p("heldout.jsonl"), "--model", p("model.bin"), "--out", p("emb.jsonl")},
      {"index", "--embeddings", p("emb.jsonl"), "--out", p("index.bin")},
      {"query", "--index", p("index.bin"), "--embedding", h[0].id, "-k", "5", "--out", p("query.txt")},
      {"pools", "--index", p("index.bin"), "--pool-size", "21", "--out", p("pools.jsonl")},
      {"eval-bcsd", "--pools", p("pools.jsonl"), "--index", p("index.bin"), "--out", p("bcsd.txt")},
      {"pool-sweep", "--embeddings", p("emb.jsonl"), "--sizes", "5,10,20", "--seeds", "1,2", "--out",
       p("sweep.txt")},
      {"eval-text", "--pred", p("pred.txt"), "--ref", p("ref.txt"), "--out", p("text.txt")},
      {"vuln-scan", "--vuln-db", p("vuln.jsonl"), "--target", p("index.bin"), "--known", p("index.bin"), "--out",
       p("vuln.txt")},
  };
  PipelineRun run;
  for (auto args : steps) {
    args.insert(args.begin(), {"--threads", threads});
    std::ostringstream out, err;
    if (cli::dispatch(args, out, err) != 0) run.failures.push_back(args[2] + ": " + err.str());
  }
  for (const auto& entry : fs::directory_iterator(dir))
    run.files[entry.path().filename().string()] = read_file(entry.path().string());
  return run;
}

Outcome reproducibility(const BenchRun& run) {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "foc-acceptance";
  const PipelineRun a = cli_pipeline(root / "a", "1");
  const PipelineRun b = cli_pipeline(root / "b", "4");
  std::vector<std::string> differ;
  for (const auto& [name, bytes] : a.files) {
    const auto it = b.files.find(name);
    if (it == b.files.end() || it->second != bytes) differ.push_back(name);
  }
  if (a.files.size() != b.files.size()) differ.push_back("(file sets)");

  bool replay_ok = false;
  if (run.frozen) {
    const Trained again = train(run.bench, ModelConfig{}, false);
    std::ostringstream emb;
    write_embeddings(emb, again.model.embed_all(run.bench.heldout.records));
    replay_ok = again.model.hash() == run.base_hash && emb.str() == run.base_embeddings;
  }
  fs::remove_all(root);

  o.pass = a.failures.empty() && b.failures.empty() && differ.empty() && replay_ok;
  o.detail = std::to_string(a.files.size()) + " pipeline files from 14 commands, " +
             std::to_string(differ.size()) + " differ between 1 and 4 workers; training replay " +
             (replay_ok ? "identical" : "differs");
  for (const auto& f : a.failures) o.detail += "; failed " + f;
  for (const auto& d : differ) o.detail += "; " + d;
  o.values = {{"files", a.files.size()}, {"differing", differ}, {"replay_identical", replay_ok}};
  return o;
}

}  // namespace
}  // namespace foc

int main(int argc, char** argv) {
  using namespace foc;
  std::string table = FOC_ACCEPTANCE_DATA "/crypto_classes.tsv";
  std::string out_path;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--out") {
      out_path = argv[i + 1];
    } else if (flag == "--classes") {
      table = argv[i + 1];
    } else {
      std::cerr << "usage: foc_acceptance [--out results.jsonl] [--classes table.tsv]\n";
      return 2;
    }
  }

  BenchRun bench;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"metric oracles", metric_oracles},
      {"GCN dense oracle", gcn_oracle},
      {"gradient checks", gradient_checks},
      {"loss closed forms", loss_closed_forms},
      {"discriminator fidelity", [&] { return discriminator_fidelity(table); }},
      {"end-to-end synthetic benchmark", [&] { return end_to_end(bench); }},
      {"pool-size trend", [&] { return pool_trend(bench); }},
      {"ablation ordering", [&] { return ablation(bench); }},
      {"reproducibility", [&] { return reproducibility(bench); }},
  };
  std::string results;
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Stopwatch sw;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), {}};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << i + 1 << "  " << criteria[i].first << ": " << o.detail
              << " [" << fmt(sw.seconds(), 1) << " s]" << std::endl;
    results += json{{"criterion", i + 1}, {"name", criteria[i].first}, {"pass", o.pass}, {"values", o.values}}
                   .dump() +
               "\n";
  }
  if (!out_path.empty()) write_file(out_path, results);
  std::cout << (failed ? std::to_string(failed) + " of 9 criteria failed" : "all 9 criteria passed") << "\n";
  return failed ? 1 : 0;
}
