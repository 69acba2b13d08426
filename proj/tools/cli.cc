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

#include "cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "foc/binary_io.h"
#include "foc/common.h"
#include "foc/corpus_io.h"
#include "foc/crypto_registry.h"
#include "foc/dedup.h"
#include "foc/embedding.h"
#include "foc/features.h"
#include "foc/metrics.h"
#include "foc/output_header.h"
#include "foc/parallel.h"
#include "foc/search.h"
#include "foc/sem_encoder.h"
#include "foc/sim_model.h"
#include "foc/sim_train.h"
#include "foc/text_metrics.h"
#include "foc/vulnscan.h"

namespace foc::cli {
namespace {

using json = nlohmann::json;

// Options whose values are file paths. Headers record only the file name so
// that reruns in another directory produce the same bytes.
const std::set<std::string> kPathOptions = {
    "in",     "out",  "corpus", "model",    "pairs",  "embeddings", "index", "pools",
    "pred",   "ref",  "vuln-db", "target",  "trace",  "map",        "registry", "known"};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<std::string>& parts, const char* sep = ",") {
  std::string s;
  for (size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

// Effective settings of the running subcommand, as echoed into headers.
std::map<std::string, std::string> effective_config(const CLI::App& sub) {
  std::map<std::string, std::string> cfg;
  cfg["command"] = sub.get_name();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "out") continue;
    std::string value;
    if (opt->count() > 0) {
      value = join(opt->results());
    } else {
      value = opt->get_default_str();
      if (value.empty()) continue;
      if (value.front() == '[' && value.back() == ']') value = value.substr(1, value.size() - 2);
    }
    if (kPathOptions.count(name)) value = std::filesystem::path(value).filename().string();
    cfg[name] = value;
  }
  return cfg;
}

OutputHeader make_header(const CLI::App& sub, std::string checkpoint = "none") {
  OutputHeader h = default_header();
  h.checkpoint_hash = std::move(checkpoint);
  h.config = effective_config(sub);
  return h;
}

// Header of a line-delimited file, when its first line is one.
std::optional<OutputHeader> peek_header(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  if (!in || !std::getline(in, line)) return std::nullopt;
  try {
    const json j = json::parse(line);
    if (is_header_line(j)) return OutputHeader::from_json(j);
  } catch (const json::exception&) {
  }
  return std::nullopt;
}

std::string upstream_checkpoint(const std::string& path) {
  const auto h = peek_header(path);
  return h ? h->checkpoint_hash : "none";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void close_out(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw IoError("failed writing " + path);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

CryptoRegistry load_registry(const std::string& path, const std::vector<std::string>& disabled) {
  CryptoRegistry base = path.empty() ? default_registry() : CryptoRegistry::load(path);
  if (disabled.empty()) return base;
  return base.with_disabled(std::set<std::string>(disabled.begin(), disabled.end()));
}

std::vector<FunctionEmbedding> load_embeddings_or_index(const std::string& embeddings,
                                                        const std::string& index) {
  if (!embeddings.empty() && !index.empty())
    throw ConfigError("give either --embeddings or --index, not both");
  if (!embeddings.empty()) return read_embeddings(embeddings);
  if (!index.empty()) return EmbeddingIndex::load(index).entries();
  throw ConfigError("one of --embeddings or --index is required");
}

// Table of left-aligned columns padded to the widest cell.
std::string aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> width;
  for (const auto& row : rows)
    for (size_t c = 0; c < row.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], row[c].size());
    }
  std::string s;
  for (const auto& row : rows) {
    std::string line;
    for (size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(width[c] - row[c].size() + 2, ' ');
    }
    s += line + "\n";
  }
  return s;
}

// Writes the aligned text report to `path` and its line-delimited twin to
// `path` + ".jsonl".
void write_report(const std::string& path, const OutputHeader& header, const std::string& body,
                  const std::vector<json>& rows) {
  write_file(path, header.to_comment_block() + body);
  std::string lines = header.to_json_line() + "\n";
  for (const auto& r : rows) lines += r.dump() + "\n";
  write_file(path + ".jsonl", lines);
}

struct Context {
  std::ostream& out;
  std::ostream& err;
};

// ---------------------------------------------------------------- commands

struct IngestArgs {
  std::string in, out;
};

void run_ingest(const CLI::App& sub, const IngestArgs& a, Context& ctx) {
  const IngestResult r = ingest(a.in);
  for (const auto& d : r.diagnostics) ctx.err << "warning: " << d << "\n";
  const OutputHeader h = make_header(sub);
  write_corpus(a.out, r.corpus, &h);
  ctx.out << "ingested " << r.corpus.records.size() << " records, skipped " << r.skipped << "\n";
}

struct DedupArgs {
  std::string in, out, mode = "both";
  double threshold = 0.95;
  int num_perm = 256;
  int shingle = 5;
};

void run_dedup(const CLI::App& sub, const DedupArgs& a, Context& ctx) {
  const IngestResult r = ingest(a.in);
  for (const auto& d : r.diagnostics) ctx.err << "warning: " << d << "\n";
  Corpus c = r.corpus;
  const size_t before = c.records.size();
  if (a.mode == "exact" || a.mode == "both") c = dedup_exact(c);
  const size_t after_exact = c.records.size();
  if (a.mode == "minhash" || a.mode == "both") {
    MinHashOptions opts;
    opts.threshold = a.threshold;
    opts.num_perm = a.num_perm;
    opts.shingle_size = a.shingle;
    c = dedup_minhash(c, opts);
  }
  const OutputHeader h = make_header(sub);
  write_corpus(a.out, c, &h);
  ctx.out << "kept " << c.records.size() << " of " << before << " records (exact removed "
          << before - after_exact << ", minhash removed " << after_exact - c.records.size() << ")\n";
}

struct ClassifyArgs {
  std::string in, out, field = "pseudo_code", registry;
  std::vector<std::string> disable;
};

void run_classify(const CLI::App& sub, const ClassifyArgs& a, Context& ctx) {
  const IngestResult r = ingest(a.in);
  const CryptoRegistry reg = load_registry(a.registry, a.disable);
  const auto& records = r.corpus.records;
  std::vector<std::optional<json>> rows(records.size());
  parallel_for(records.size(), [&](size_t i) {
    const FunctionRecord& rec = records[i];
    const std::string* text = a.field == "summary" ? (rec.summary ? &*rec.summary : nullptr)
                                                   : &rec.pseudo_code;
    if (!text) return;
    // Classes plus per-form hit counts, so noisy aliases can be spotted and
    // passed to --disable.
    std::map<std::string, int> forms;
    std::set<std::string> classes;
    for (const auto& hit : reg.scan(*text)) {
      ++forms[hit.matched_form];
      classes.insert(reg.classes()[hit.class_index].canonical);
    }
    rows[i] = json{{"id", rec.id}, {"classes", classes}, {"forms", forms}};
  });
  auto out = open_out(a.out);
  out << make_header(sub).to_json_line() << "\n";
  size_t written = 0, with_class = 0;
  for (const auto& row : rows) {
    if (!row) continue;
    out << row->dump() << "\n";
    ++written;
    with_class += !(*row)["classes"].empty();
  }
  close_out(out, a.out);
  ctx.out << "classified " << written << " records, " << with_class << " with at least one class";
  if (written < records.size()) ctx.out << ", " << records.size() - written << " lacking the field";
  ctx.out << "\n";
}

struct FeaturizeArgs {
  std::string in, out, map, vocab = "build", registry;
};

void run_featurize(const CLI::App& sub, const FeaturizeArgs& a, Context& ctx) {
  const IngestResult r = ingest(a.in);
  OpcodeCategoryMap map;
  CryptoRegistry reg = load_registry(a.registry, {});
  std::string checkpoint = "none";
  if (a.vocab == "build") {
    map = build_vocab(r.corpus, a.map.empty() ? default_opcode_map() : OpcodeCategoryMap::load(a.map));
  } else {
    if (!a.map.empty()) throw ConfigError("--map cannot be combined with a checkpoint vocabulary");
    const SimModel model = SimModel::load(a.vocab);
    map = model.opcodes;
    if (a.registry.empty()) reg = model.registry;
    checkpoint = model.hash();
  }
  const auto& records = r.corpus.records;
  std::vector<std::string> lines(records.size());
  std::vector<std::string> errors(records.size());
  parallel_for(records.size(), [&](size_t i) {
    try {
      const Acfg g = build_acfg(records[i], map);
      json nodes = json::array();
      for (Eigen::Index n = 0; n < g.node_features.rows(); ++n) {
        json row = json::array();
        for (Eigen::Index k = 0; k < g.node_features.cols(); ++k)
          row.push_back(static_cast<long>(g.node_features(n, k)));
        nodes.push_back(std::move(row));
      }
      json crypto = json::array();
      const Vector cv = crypto_features(records[i], reg);
      for (Eigen::Index k = 0; k < cv.size(); ++k) crypto.push_back(static_cast<long>(cv[k]));
      lines[i] = json{{"id", records[i].id}, {"nodes", nodes}, {"edges", g.edges}, {"crypto", crypto}}.dump();
    } catch (const Error& e) {
      errors[i] = records[i].id + ": " + e.what();
    }
  });
  auto out = open_out(a.out);
  out << make_header(sub, checkpoint).to_json_line() << "\n";
  size_t written = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (!errors[i].empty()) {
      ctx.err << "warning: " << errors[i] << "\n";
      continue;
    }
    out << lines[i] << "\n";
    ++written;
  }
  close_out(out, a.out);
  ctx.out << "featurized " << written << " records\n";
}

// Settings of a freshly created model.
struct ModelArgs {
  ModelConfig config;
  std::string use_semantic, use_structure, use_crypto;  // empty = keep
};

bool parse_bool(const std::string& name, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("--" + name + " expects true or false, got '" + v + "'");
}

void apply_ablation(const ModelArgs& m, ModelConfig& cfg) {
  if (!m.use_semantic.empty()) cfg.use_semantic = parse_bool("use-semantic", m.use_semantic);
  if (!m.use_structure.empty()) cfg.use_structure = parse_bool("use-structure", m.use_structure);
  if (!m.use_crypto.empty()) cfg.use_crypto = parse_bool("use-crypto", m.use_crypto);
}

void add_model_options(CLI::App* sub, ModelArgs& m) {
  sub->add_option("--sem-dim", m.config.sem_dim, "Token embedding width (new models)");
  sub->add_option("--graph-dim", m.config.graph_dim, "GCN width (new models)");
  sub->add_option("--gcn-layers", m.config.gcn_layers, "GCN depth (new models)");
  sub->add_option("--output-dim", m.config.output_dim, "Function embedding width (new models)");
  sub->add_option("--vocab-size", m.config.vocab_size, "Tokenizer vocabulary (new models)");
  sub->add_option("--oov-buckets", m.config.oov_buckets, "Hashed overflow buckets (new models)");
  sub->add_option("--gcn-self-loops", m.config.gcn.self_loops, "Add self-loops (new models)");
  sub->add_option("--gcn-symmetrize", m.config.gcn.symmetrize, "Undirected CFG edges (new models)");
  sub->add_option("--normalize-sources", m.config.normalize_sources,
                  "Unit-normalize each source before fusion (new models)");
  sub->add_option("--model-seed", m.config.seed, "Initialization seed (new models)");
  sub->add_option("--use-semantic", m.use_semantic, "Feed the semantic embedding (true|false)");
  sub->add_option("--use-structure", m.use_structure, "Feed the GCN readout (true|false)");
  sub->add_option("--use-crypto", m.use_crypto, "Feed the crypto features (true|false)");
}

void write_trace(const std::string& path, const OutputHeader& header, const std::vector<double>& losses) {
  std::string s = header.to_comment_block();
  s += "# step loss\n";
  for (size_t i = 0; i < losses.size(); ++i) s += std::to_string(i + 1) + " " + exact(losses[i]) + "\n";
  write_file(path, s);
}

struct TrainEncoderArgs {
  std::string pairs, out, model, corpus, trace;
  EncoderTrainConfig train;
  ModelArgs model_args;
};

void run_train_encoder(const CLI::App& sub, TrainEncoderArgs& a, Context& ctx) {
  std::vector<std::pair<std::string, std::string>> pairs;
  size_t line_no = 0;
  for (const auto& line : read_lines(a.pairs)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      if (is_header_line(j)) continue;
      pairs.emplace_back(j.at("source").get<std::string>(), j.at("binary").get<std::string>());
    } catch (const json::exception& e) {
      throw IoError(a.pairs + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::vector<std::string> texts;
  for (const auto& [s, b] : pairs) {
    texts.push_back(s);
    texts.push_back(b);
  }
  std::optional<SimModel> model;
  if (!a.model.empty()) {
    model.emplace(SimModel::load(a.model));
  } else {
    ModelConfig cfg = a.model_args.config;
    if (!a.corpus.empty()) {
      const Corpus corpus = ingest(a.corpus).corpus;
      model.emplace(make_model(corpus, cfg));
      for (const auto& r : corpus.records) texts.push_back(r.pseudo_code);
    } else {
      OpcodeCategoryMap map = default_opcode_map();
      map.set_vocab({}, {});
      model.emplace(cfg, Tokenizer(cfg.vocab_size, cfg.oov_buckets), std::move(map), default_registry());
    }
    model->tokenizer.build(texts);
  }
  model->encoder.frozen = false;
  const EncoderTrainResult r = train_contrastive(pairs, model->tokenizer, model->encoder, a.train);
  model->encoder = r.encoder;
  model->save(a.out);
  if (!a.trace.empty()) write_trace(a.trace, make_header(sub, model->hash()), r.step_losses);
  ctx.out << "pairs " << pairs.size() - r.skipped_pairs << " (skipped " << r.skipped_pairs
          << "), loss " << fmt(r.initial_loss) << " -> " << fmt(r.final_loss)
          << (r.improved ? "" : " (no improvement)") << "\n";
  ctx.out << "checkpoint " << model->hash() << "\n";
}

struct TrainSimArgs {
  std::string corpus, model, out, trace, loss_form = "standard", freeze = "true";
  TrainConfig train;
  ModelArgs model_args;
};

void run_train_sim(const CLI::App& sub, TrainSimArgs& a, Context& ctx) {
  const IngestResult r = ingest(a.corpus);
  for (const auto& d : r.diagnostics) ctx.err << "warning: " << d << "\n";
  const auto form = parse_loss_form(a.loss_form);
  if (!form) throw ConfigError("unknown loss form '" + a.loss_form + "'");
  a.train.form = *form;
  a.train.freeze_encoder = parse_bool("freeze-encoder", a.freeze);
  SimModel model = a.model.empty() ? make_model(r.corpus, a.model_args.config) : SimModel::load(a.model);
  apply_ablation(a.model_args, model.config);
  const TrainResult result = train_sim(r.corpus, model, a.train);
  model.save(a.out);
  const std::string hash = model.hash();
  if (!a.trace.empty()) write_trace(a.trace, make_header(sub, hash), result.losses);
  if (result.non_monotone) ctx.err << "warning: fixed-batch loss rose within the first 10 steps\n";
  const size_t n = result.losses.size(), w = std::min<size_t>(100, n);
  double first = 0, last = 0;
  for (size_t i = 0; i < w; ++i) {
    first += result.losses[i] / static_cast<double>(w);
    last += result.losses[n - w + i] / static_cast<double>(w);
  }
  ctx.out << "steps " << n << ", loss form " << to_string(a.train.form) << ", mean loss first "
          << w << " " << fmt(first) << ", last " << w << " " << fmt(last) << "\n";
  ctx.out << "checkpoint " << hash << "\n";
}

struct EmbedArgs {
  std::string in, model, out;
};

void run_embed(const CLI::App& sub, const EmbedArgs& a, Context& ctx) {
  const IngestResult r = ingest(a.in);
  for (const auto& d : r.diagnostics) ctx.err << "warning: " << d << "\n";
  const SimModel model = SimModel::load(a.model);
  const auto embs = model.embed_all(r.corpus.records);
  const OutputHeader h = make_header(sub, model.hash());
  write_embeddings(a.out, embs, &h);
  ctx.out << "embedded " << embs.size() << " functions\n";
}

struct IndexArgs {
  std::string embeddings, out;
};

void run_index(const CLI::App& sub, const IndexArgs& a, Context& ctx) {
  EmbeddingIndex index(read_embeddings(a.embeddings), make_header(sub, upstream_checkpoint(a.embeddings)));
  index.save(a.out);
  ctx.out << "indexed " << index.size() << " embeddings of dimension " << index.dim() << "\n";
}

struct QueryArgs {
  std::string index, embedding, out, exclude_self = "false";
  int k = 10;
};

void run_query(const CLI::App& sub, const QueryArgs& a, Context& ctx) {
  const EmbeddingIndex index = EmbeddingIndex::load(a.index);
  const bool exclude = parse_bool("exclude-self", a.exclude_self);
  std::vector<FunctionEmbedding> queries;
  if (std::filesystem::is_regular_file(a.embedding)) {
    queries = read_embeddings(a.embedding);
  } else {
    const auto i = index.find(a.embedding);
    if (!i) throw PreconditionError("'" + a.embedding + "' is neither a file nor an id in the index");
    queries.push_back(index.entries()[*i]);
  }
  std::string body = "query\trank\tid\tscore\n";
  for (const auto& q : queries) {
    const auto hits = index.query(q, a.k, exclude);
    for (size_t r = 0; r < hits.size(); ++r)
      body += q.id + "\t" + std::to_string(r + 1) + "\t" + hits[r].id + "\t" + exact(hits[r].score) + "\n";
  }
  if (a.out.empty()) {
    ctx.out << body;
  } else {
    write_file(a.out, make_header(sub, index.header().checkpoint_hash).to_comment_block() + body);
    ctx.out << "answered " << queries.size() << " queries\n";
  }
}

struct PoolsArgs {
  std::string embeddings, index, out, subtask = "XM";
  int pool_size = 101;
  uint64_t seed = 7;
};

void run_pools(const CLI::App& sub, const PoolsArgs& a, Context& ctx) {
  const auto task = parse_subtask(a.subtask);
  if (!task) throw ConfigError("unknown subtask '" + a.subtask + "'");
  PoolSpec spec{*task, a.pool_size, a.seed};
  const PoolSet set = build_pools(load_embeddings_or_index(a.embeddings, a.index), spec);
  const std::string upstream = !a.embeddings.empty() ? upstream_checkpoint(a.embeddings)
                                                     : EmbeddingIndex::load(a.index).header().checkpoint_hash;
  write_pools(a.out, set, make_header(sub, upstream));
  ctx.out << "built " << set.pools.size() << " " << to_string(spec.task) << " pools, skipped "
          << set.skipped.size() << " queries\n";
}

struct EvalBcsdArgs {
  std::string pools, index, out;
  std::vector<int> ks = {1, 10};
};

void run_eval_bcsd(const CLI::App& sub, const EvalBcsdArgs& a, Context& ctx) {
  const PoolSet set = read_pools(a.pools);
  const EmbeddingIndex index = EmbeddingIndex::load(a.index);
  const auto outcomes = evaluate_pools(set, index);
  const BcsdReport rep = summarize_pools(set, outcomes, a.ks);
  OutputHeader h = make_header(sub, index.header().checkpoint_hash);
  h.config["subtask"] = std::string(to_string(set.spec.task));
  h.config["pool_size"] = std::to_string(set.spec.pool_size);
  h.config["pool_seed"] = std::to_string(set.spec.seed);

  std::vector<std::vector<std::string>> table = {{"metric", "value"},
                                                 {"queries", std::to_string(rep.queries)},
                                                 {"skipped", std::to_string(rep.skipped)},
                                                 {"auc", fmt(rep.auc)}};
  json summary = {{"queries", rep.queries}, {"skipped", rep.skipped}, {"auc", rep.auc}};
  for (const auto& [k, v] : rep.recall) {
    table.push_back({"recall@" + std::to_string(k), fmt(v)});
    summary["recall@" + std::to_string(k)] = v;
  }
  for (const auto& [k, v] : rep.mrr) {
    table.push_back({"mrr@" + std::to_string(k), fmt(v)});
    summary["mrr@" + std::to_string(k)] = v;
  }
  std::vector<json> rows;
  for (size_t i = 0; i < outcomes.size(); ++i) {
    json row = {{"query", set.pools[i].query},
                {"positive", set.pools[i].positive},
                {"positive_score", outcomes[i].positive_score}};
    row["rank"] = outcomes[i].ranked.rank ? json(*outcomes[i].ranked.rank) : json(nullptr);
    rows.push_back(std::move(row));
  }
  rows.push_back({{"summary", summary}});
  write_report(a.out, h, aligned(table), rows);
  ctx.out << aligned(table);
}

struct EvalTextArgs {
  std::string pred, ref, out;
};

void run_eval_text(const CLI::App& sub, const EvalTextArgs& a, Context& ctx) {
  const auto pred = read_lines(a.pred), ref = read_lines(a.ref);
  const TextReport rep = evaluate_text(pred, ref);
  OutputHeader h = make_header(sub);
  h.config["aggregation"] = "macro";
  h.config["bleu_smoothing"] = "zero precision -> 1/(2*candidate n-grams)";
  const std::vector<std::vector<std::string>> table = {
      {"metric", "value"},
      {"examples", std::to_string(rep.examples.size())},
      {"rouge_l", fmt(rep.mean.rouge_l)},
      {"bleu4", fmt(rep.mean.bleu4)},
      {"meteor", fmt(rep.mean.meteor)},
      {"bleu_smoothed", std::to_string(rep.smoothed_count)}};
  std::vector<json> rows;
  for (size_t i = 0; i < rep.examples.size(); ++i) {
    const auto& s = rep.examples[i];
    rows.push_back({{"example", i + 1},
                    {"rouge_l", s.rouge_l},
                    {"bleu4", s.bleu4},
                    {"meteor", s.meteor},
                    {"bleu_smoothed", s.bleu_smoothed}});
  }
  rows.push_back({{"summary",
                   {{"examples", rep.examples.size()},
                    {"rouge_l", rep.mean.rouge_l},
                    {"bleu4", rep.mean.bleu4},
                    {"meteor", rep.mean.meteor},
                    {"bleu_smoothed", rep.smoothed_count}}}});
  write_report(a.out, h, aligned(table), rows);
  ctx.out << aligned(table);
}

struct VulnScanArgs {
  std::string vuln_db, target, out, known;
  int k = 10;
};

void run_vuln_scan(const CLI::App& sub, const VulnScanArgs& a, Context& ctx) {
  const auto db = load_vuln_db(a.vuln_db);
  const EmbeddingIndex target = EmbeddingIndex::load(a.target);
  const auto reports = detect(db, target, a.k);
  OutputHeader h = make_header(sub, target.header().checkpoint_hash);

  std::vector<std::vector<std::string>> table = {{"cve", "library", "found"}};
  std::vector<json> rows;
  std::string details;
  int vuln_total = 0, vuln_right = 0, patched_total = 0, patched_right = 0, ties = 0;
  for (size_t n = 0; n < reports.size(); ++n) {
    const DetectReport& r = reports[n];
    table.push_back({r.cve, r.library, std::to_string(r.found) + "/" + std::to_string(r.total)});
    json files = json::array();
    for (const auto& f : r.files) {
      json fj = {{"file", f.file}, {"has_ground_truth", f.has_ground_truth}, {"hit", f.hit}};
      fj["best_rank"] = f.best_rank ? json(*f.best_rank) : json(nullptr);
      files.push_back(std::move(fj));
    }
    for (const auto& d : r.diagnostics) {
      ctx.err << "warning: " << r.cve << ": " << d << "\n";
      details += "# " + r.cve + ": " + d + "\n";
    }
    json distinctions = json::array();
    auto judge = [&](const std::vector<std::string>& ids, VulnLabel expected) {
      for (const auto& id : ids) {
        const auto i = target.find(id);
        if (!i) continue;
        const Distinction d = distinguish(db[n], target.entries()[*i].vector);
        const bool right = d.label == expected;
        (expected == VulnLabel::kVulnerable ? vuln_total : patched_total) += 1;
        (expected == VulnLabel::kVulnerable ? vuln_right : patched_right) += right;
        ties += d.tie;
        distinctions.push_back({{"id", id},
                                {"expected", to_string(expected)},
                                {"label", to_string(d.label)},
                                {"tie", d.tie},
                                {"vulnerable_score", d.vulnerable_score},
                                {"patched_score", d.patched_score}});
      }
    };
    judge(db[n].ground_truth, VulnLabel::kVulnerable);
    judge(db[n].patched_targets, VulnLabel::kPatched);
    rows.push_back({{"cve", r.cve},
                    {"library", r.library},
                    {"found", r.found},
                    {"total", r.total},
                    {"files", files},
                    {"distinctions", distinctions}});
  }
  std::string body = aligned(table);
  json summary = {{"vulnerable_correct", vuln_right}, {"vulnerable_total", vuln_total},
                  {"patched_correct", patched_right},  {"patched_total", patched_total},
                  {"ties", ties}};
  body += "\ndistinction: vulnerable " + std::to_string(vuln_right) + "/" + std::to_string(vuln_total) +
          ", patched " + std::to_string(patched_right) + "/" + std::to_string(patched_total) +
          ", ties " + std::to_string(ties) + "\n";
  if (!a.known.empty()) {
    const RetrievalReport kr = known_function_retrieval(EmbeddingIndex::load(a.known), target);
    body += "known-function retrieval: queries " + std::to_string(kr.queries) + ", recall@1 " +
            fmt(kr.recall_at_1) + ", recall@10 " + fmt(kr.recall_at_10) + "\n";
    summary["known_queries"] = kr.queries;
    summary["known_recall@1"] = kr.recall_at_1;
    summary["known_recall@10"] = kr.recall_at_10;
  }
  rows.push_back({{"summary", summary}});
  write_report(a.out, h, body + details, rows);
  ctx.out << body;
}

struct PoolSweepArgs {
  std::string embeddings, index, out;
  std::vector<int> sizes = {10, 100, 1000};
  std::vector<uint64_t> seeds = {1};
};

void run_pool_sweep(const CLI::App& sub, const PoolSweepArgs& a, Context& ctx) {
  const auto embs = load_embeddings_or_index(a.embeddings, a.index);
  const std::string upstream = !a.embeddings.empty() ? upstream_checkpoint(a.embeddings)
                                                     : EmbeddingIndex::load(a.index).header().checkpoint_hash;
  std::vector<std::vector<std::string>> table = {{"pool_size", "seed", "queries", "recall@1"}};
  std::vector<json> rows;
  std::map<int, std::vector<double>> by_size;
  for (uint64_t seed : a.seeds)
    for (const SweepRow& row : pool_sweep(embs, a.sizes, seed)) {
      table.push_back({std::to_string(row.pool_size), std::to_string(seed), std::to_string(row.queries),
                       fmt(row.recall_at_1)});
      rows.push_back({{"pool_size", row.pool_size}, {"seed", seed}, {"queries", row.queries},
                      {"recall@1", row.recall_at_1}});
      by_size[row.pool_size].push_back(row.recall_at_1);
    }
  std::vector<std::vector<std::string>> means = {{"pool_size", "mean_recall@1"}};
  for (int size : a.sizes) {
    double m = 0;
    for (double v : by_size[size]) m += v / static_cast<double>(by_size[size].size());
    means.push_back({std::to_string(size), fmt(m)});
    rows.push_back({{"pool_size", size}, {"mean_recall@1", m}});
  }
  const std::string body = aligned(table) + "\n" + aligned(means);
  write_report(a.out, make_header(sub, upstream), body, rows);
  ctx.out << body;
}

// ------------------------------------------------------------ config file

// Flat "key = value" lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> out;
  size_t line_no = 0;
  for (std::string line : read_lines(path)) {
    ++line_no;
    if (const size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const size_t b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ": line " + std::to_string(line_no) + ": expected key = value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

// Extracts "--config <file>" and appends every file setting the command line
// does not already give. Keys unknown to every command are an error; keys
// that belong to other commands are ignored so one file can serve a whole
// pipeline.
void apply_config_file(CLI::App& app, std::vector<std::string>& args) {
  std::string path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return;
  CLI::App* chosen = nullptr;
  for (const auto& a : args)
    if (!a.empty() && a[0] != '-') {
      chosen = app.get_subcommand_no_throw(a);
      break;
    }
  for (const auto& [key, value] : parse_config_file(path)) {
    const std::string flag = "--" + key;
    bool known = app.get_option_no_throw(flag) != nullptr;
    for (const CLI::App* sub : app.get_subcommands({}))
      known = known || sub->get_option_no_throw(flag) != nullptr;
    if (!known) throw ConfigError(path + ": unknown setting '" + key + "'");
    if (has_flag(args, flag)) continue;
    if (app.get_option_no_throw(flag)) {
      args.insert(args.begin(), {flag, value});
    } else if (chosen && chosen->get_option_no_throw(flag)) {
      args.push_back(flag);
      args.push_back(value);
    }
  }
}

}  // namespace

int dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"foc: function embeddings for binary code similarity and crypto triage", "foc"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = FOC_THREADS or all cores)");
  app.add_option("--config", "Flat key = value settings file; flags win");  // handled before parsing

  Context ctx{out, err};
  std::function<void()> action;

  IngestArgs ingest_a;
  auto* ingest_cmd = app.add_subcommand("ingest", "Read a line-delimited corpus, dropping malformed lines");
  ingest_cmd->add_option("--in", ingest_a.in, "Corpus file")->required();
  ingest_cmd->add_option("--out", ingest_a.out, "Cleaned corpus file")->required();
  ingest_cmd->callback([&] { action = [&] { run_ingest(*ingest_cmd, ingest_a, ctx); }; });

  DedupArgs dedup_a;
  auto* dedup_cmd = app.add_subcommand("dedup", "Remove exact and near-duplicate functions");
  dedup_cmd->add_option("--in", dedup_a.in, "Corpus file")->required();
  dedup_cmd->add_option("--out", dedup_a.out, "Deduplicated corpus file")->required();
  dedup_cmd->add_option("--mode", dedup_a.mode, "exact, minhash, or both")
      ->check(CLI::IsMember({"exact", "minhash", "both"}));
  dedup_cmd->add_option("--minhash-threshold", dedup_a.threshold, "Estimated Jaccard threshold")
      ->check(CLI::Range(0.0, 1.0));
  dedup_cmd->add_option("--num-perm", dedup_a.num_perm, "MinHash permutations")->check(CLI::PositiveNumber);
  dedup_cmd->add_option("--shingle-size", dedup_a.shingle, "Tokens per shingle")->check(CLI::PositiveNumber);
  dedup_cmd->callback([&] { action = [&] { run_dedup(*dedup_cmd, dedup_a, ctx); }; });

  ClassifyArgs classify_a;
  auto* classify_cmd = app.add_subcommand("classify", "Keyword crypto classes per function");
  classify_cmd->add_option("--in", classify_a.in, "Corpus file")->required();
  classify_cmd->add_option("--out", classify_a.out, "Line-delimited classes")->required();
  classify_cmd->add_option("--field", classify_a.field, "Text to scan")
      ->check(CLI::IsMember({"pseudo_code", "summary"}));
  classify_cmd->add_option("--registry", classify_a.registry, "Registry file (default: shipped)");
  classify_cmd->add_option("--disable", classify_a.disable, "Alias forms to ignore")->delimiter(',');
  classify_cmd->callback([&] { action = [&] { run_classify(*classify_cmd, classify_a, ctx); }; });

  FeaturizeArgs feat_a;
  auto* feat_cmd = app.add_subcommand("featurize", "Block and function statistical features");
  feat_cmd->add_option("--in", feat_a.in, "Corpus file")->required();
  feat_cmd->add_option("--out", feat_a.out, "Line-delimited features")->required();
  feat_cmd->add_option("--map", feat_a.map, "Opcode category file (default: shipped)");
  feat_cmd->add_option("--vocab", feat_a.vocab, "'build' or a checkpoint whose vocabularies to use");
  feat_cmd->add_option("--registry", feat_a.registry, "Registry file (default: shipped)");
  feat_cmd->callback([&] { action = [&] { run_featurize(*feat_cmd, feat_a, ctx); }; });

  TrainEncoderArgs enc_a;
  auto* enc_cmd = app.add_subcommand("train-encoder", "Align source and pseudo-code token embeddings");
  enc_cmd->add_option("--pairs", enc_a.pairs, "Line-delimited {\"source\", \"binary\"} pairs")->required();
  enc_cmd->add_option("--out", enc_a.out, "Checkpoint to write")->required();
  enc_cmd->add_option("--model", enc_a.model, "Checkpoint to start from");
  enc_cmd->add_option("--corpus", enc_a.corpus, "Corpus for the vocabularies of a new model");
  enc_cmd->add_option("--trace", enc_a.trace, "Per-step loss trace");
  enc_cmd->add_option("--steps", enc_a.train.steps, "Optimizer steps")->check(CLI::PositiveNumber);
  enc_cmd->add_option("--batch", enc_a.train.batch_size, "Pairs per step")->check(CLI::PositiveNumber);
  enc_cmd->add_option("--lr", enc_a.train.learning_rate, "Learning rate");
  enc_cmd->add_option("--weight-decay", enc_a.train.weight_decay, "Decoupled weight decay");
  enc_cmd->add_option("--seed", enc_a.train.seed, "Shuffling seed");
  add_model_options(enc_cmd, enc_a.model_args);
  enc_cmd->callback([&] { action = [&] { run_train_encoder(*enc_cmd, enc_a, ctx); }; });

  TrainSimArgs sim_a;
  auto* sim_cmd = app.add_subcommand("train-sim", "Train the GCN and fusion layer on similar pairs");
  sim_cmd->add_option("--corpus", sim_a.corpus, "Training corpus")->required();
  sim_cmd->add_option("--model", sim_a.model, "Checkpoint to start from (default: new model)");
  sim_cmd->add_option("--out", sim_a.out, "Checkpoint to write")->required();
  sim_cmd->add_option("--trace", sim_a.trace, "Loss trace: step and loss per line");
  sim_cmd->add_option("--steps", sim_a.train.steps, "Optimizer steps")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--batch", sim_a.train.batch_size, "Similar pairs per batch")->check(CLI::Range(2, 1 << 20));
  sim_cmd->add_option("--lr", sim_a.train.learning_rate, "Learning rate");
  sim_cmd->add_option("--weight-decay", sim_a.train.weight_decay, "Decoupled weight decay");
  sim_cmd->add_option("--tau", sim_a.train.tau, "Softmax temperature")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--loss-form", sim_a.loss_form, "literal or standard");
  sim_cmd->add_option("--freeze-encoder", sim_a.freeze, "Keep token embeddings fixed (true|false)");
  sim_cmd->add_option("--seed", sim_a.train.seed, "Pair sampling seed");
  sim_cmd->add_option("--fixed-batch", sim_a.train.fixed_batch, "Reuse the first batch every step");
  add_model_options(sim_cmd, sim_a.model_args);
  sim_cmd->callback([&] { action = [&] { run_train_sim(*sim_cmd, sim_a, ctx); }; });

  EmbedArgs embed_a;
  auto* embed_cmd = app.add_subcommand("embed", "Embed every function of a corpus");
  embed_cmd->add_option("--in", embed_a.in, "Corpus file")->required();
  embed_cmd->add_option("--model", embed_a.model, "Checkpoint")->required();
  embed_cmd->add_option("--out", embed_a.out, "Line-delimited embeddings")->required();
  embed_cmd->callback([&] { action = [&] { run_embed(*embed_cmd, embed_a, ctx); }; });

  IndexArgs index_a;
  auto* index_cmd = app.add_subcommand("index", "Build a binary embedding index");
  index_cmd->add_option("--embeddings", index_a.embeddings, "Line-delimited embeddings")->required();
  index_cmd->add_option("--out", index_a.out, "Index file")->required();
  index_cmd->callback([&] { action = [&] { run_index(*index_cmd, index_a, ctx); }; });

  QueryArgs query_a;
  auto* query_cmd = app.add_subcommand("query", "Top-k cosine search");
  query_cmd->add_option("--index", query_a.index, "Index file")->required();
  query_cmd->add_option("--embedding", query_a.embedding, "Embeddings file or an id in the index")->required();
  query_cmd->add_option("-k", query_a.k, "Results per query")->check(CLI::PositiveNumber);
  query_cmd->add_option("--exclude-self", query_a.exclude_self, "Drop the query's own id (true|false)");
  query_cmd->add_option("--out", query_a.out, "Result file (default: standard output)");
  query_cmd->callback([&] { action = [&] { run_query(*query_cmd, query_a, ctx); }; });

  PoolsArgs pools_a;
  auto* pools_cmd = app.add_subcommand("pools", "Build evaluation pools for a sub-task");
  pools_cmd->add_option("--embeddings", pools_a.embeddings, "Line-delimited embeddings");
  pools_cmd->add_option("--index", pools_a.index, "Index file");
  pools_cmd->add_option("--out", pools_a.out, "Pools file")->required();
  pools_cmd->add_option("--subtask", pools_a.subtask, "XO, XC, XC+XB, XA, or XM");
  pools_cmd->add_option("--pool-size", pools_a.pool_size, "Candidates per query")->check(CLI::Range(2, 1 << 30));
  pools_cmd->add_option("--seed", pools_a.seed, "Sampling seed");
  pools_cmd->callback([&] { action = [&] { run_pools(*pools_cmd, pools_a, ctx); }; });

  EvalBcsdArgs bcsd_a;
  auto* bcsd_cmd = app.add_subcommand("eval-bcsd", "AUC, Recall@k and MRR@k over pools");
  bcsd_cmd->add_option("--pools", bcsd_a.pools, "Pools file")->required();
  bcsd_cmd->add_option("--index", bcsd_a.index, "Index file")->required();
  bcsd_cmd->add_option("--k", bcsd_a.ks, "Cutoffs")->delimiter(',');
  bcsd_cmd->add_option("--out", bcsd_a.out, "Report (plus a .jsonl twin)")->required();
  bcsd_cmd->callback([&] { action = [&] { run_eval_bcsd(*bcsd_cmd, bcsd_a, ctx); }; });

  EvalTextArgs text_a;
  auto* text_cmd = app.add_subcommand("eval-text", "ROUGE-L, BLEU-4 and METEOR of generated summaries");
  text_cmd->add_option("--pred", text_a.pred, "Generated texts, one per line")->required();
  text_cmd->add_option("--ref", text_a.ref, "Reference texts, one per line")->required();
  text_cmd->add_option("--out", text_a.out, "Report (plus a .jsonl twin)")->required();
  text_cmd->callback([&] { action = [&] { run_eval_text(*text_cmd, text_a, ctx); }; });

  VulnScanArgs vuln_a;
  auto* vuln_cmd = app.add_subcommand("vuln-scan", "Vulnerable-function detection and distinction");
  vuln_cmd->add_option("--vuln-db", vuln_a.vuln_db, "Vulnerability database")->required();
  vuln_cmd->add_option("--target", vuln_a.target, "Index of the scanned binaries")->required();
  vuln_cmd->add_option("--out", vuln_a.out, "Report (plus a .jsonl twin)")->required();
  vuln_cmd->add_option("-k", vuln_a.k, "Top-k hit rule")->check(CLI::PositiveNumber);
  vuln_cmd->add_option("--known", vuln_a.known, "Index of known functions for retrieval");
  vuln_cmd->callback([&] { action = [&] { run_vuln_scan(*vuln_cmd, vuln_a, ctx); }; });

  PoolSweepArgs sweep_a;
  auto* sweep_cmd = app.add_subcommand("pool-sweep", "Recall@1 of XM pools across pool sizes");
  sweep_cmd->add_option("--embeddings", sweep_a.embeddings, "Line-delimited embeddings");
  sweep_cmd->add_option("--index", sweep_a.index, "Index file");
  sweep_cmd->add_option("--sizes", sweep_a.sizes, "Pool sizes")->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep_a.seeds, "Sampling seeds")->delimiter(',');
  sweep_cmd->add_option("--out", sweep_a.out, "Report (plus a .jsonl twin)")->required();
  sweep_cmd->callback([&] { action = [&] { run_pool_sweep(*sweep_cmd, sweep_a, ctx); }; });

  try {
    std::vector<std::string> args = raw_args;
    apply_config_file(app, args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n";
    CLI::App* shown = &app;
    for (CLI::App* sub : app.get_subcommands()) shown = sub;
    err << shown->help();
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return 1;
  }

  try {
    if (threads > 0) set_worker_count(threads);
    action();
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace foc::cli
