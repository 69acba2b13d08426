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

#include "foc/synthetic.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

#include "foc/common.h"
#include "foc/crypto_registry.h"
#include "foc/opcode_map.h"

namespace foc {
namespace {

using Rng = std::mt19937_64;

Rng derive(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
  std::seed_seq seq{seed, seed >> 32, a, b, c};
  return Rng(seq);
}

uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

size_t uniform(Rng& rng, size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng); }
bool chance(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

std::string word(Rng& rng, int syllables) {
  static constexpr std::string_view kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p",
                                                 "r", "s", "t", "v", "z", "br", "st", "tr", "gl"};
  static constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
  std::string w;
  for (int s = 0; s < syllables; ++s) {
    w += kOnsets[uniform(rng, std::size(kOnsets))];
    w += kVowels[uniform(rng, std::size(kVowels))];
  }
  return w;
}

std::string hex(uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Insn {
  OpcodeCategory category;
  int index;  // rendered as the index-th mnemonic (mod list size) of the arch
};
constexpr int kInsnIndexRange = 64;

struct Cfg {
  std::vector<std::vector<Insn>> blocks;
  std::vector<Edge> edges;
};

// Statement text with $0..$9 standing for locals, plus the callee it calls.
struct Statement {
  std::string text;
  std::string callee;
};

struct GroupTemplate {
  std::string project;
  std::string source_file;
  std::string name;
  Cfg cfg;
  std::array<double, 3> body_weights;  // General, Arithmetic, Logic
  std::vector<Statement> statements;
  std::vector<std::string> source_locals;
};

constexpr int kLocals = 6;
constexpr int kShapeTemplates = 8;

// Edge skeletons shared by all groups: a chain plus a few skips and loops.
std::vector<std::pair<int, std::vector<Edge>>> make_shapes(uint64_t seed) {
  Rng rng = derive(seed, 0x5a4e);
  std::vector<std::pair<int, std::vector<Edge>>> shapes;
  for (int t = 0; t < kShapeTemplates; ++t) {
    const int n = 3 + static_cast<int>(uniform(rng, 10));
    std::set<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace(i, i + 1);
    const int extras = static_cast<int>(uniform(rng, static_cast<size_t>(n)));
    for (int k = 0; k < extras; ++k) {
      const int a = static_cast<int>(uniform(rng, static_cast<size_t>(n)));
      const int b = static_cast<int>(uniform(rng, static_cast<size_t>(n)));
      if (a != b) edges.emplace(a, b);
    }
    shapes.emplace_back(n, std::vector<Edge>(edges.begin(), edges.end()));
  }
  return shapes;
}

Insn body_insn(Rng& rng, const std::array<double, 3>& weights) {
  std::discrete_distribution<int> cat(weights.begin(), weights.end());
  return {static_cast<OpcodeCategory>(cat(rng)),
          static_cast<int>(uniform(rng, kInsnIndexRange))};
}

GroupTemplate make_group(uint64_t seed, uint64_t tag, int g,
                         const std::vector<std::pair<int, std::vector<Edge>>>& shapes,
                         const std::vector<std::string>& crypto_words) {
  Rng rng = derive(seed, tag, static_cast<uint64_t>(g));
  GroupTemplate t;
  const std::string stem = word(rng, 2);
  t.project = "proj" + std::to_string(g % 17);
  t.source_file = "src/" + word(rng, 2) + ".c";
  t.name = stem + "_" + word(rng, 2) + "_" + std::to_string(tag) + "_" + std::to_string(g);

  const auto& [n, edges] = shapes[uniform(rng, shapes.size())];
  for (double& w : t.body_weights) w = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
  t.cfg.edges = edges;
  std::vector<int> out_degree(static_cast<size_t>(n), 0);
  for (const auto& e : edges) ++out_degree[static_cast<size_t>(e.first)];
  for (int b = 0; b < n; ++b) {
    std::vector<Insn> block;
    const size_t len = 2 + uniform(rng, 10);
    for (size_t k = 0; k < len; ++k) block.push_back(body_insn(rng, t.body_weights));
    // Every block ends in a control transfer (a return for exits).
    block.push_back({OpcodeCategory::kBranch, out_degree[static_cast<size_t>(b)] > 0
                                                  ? static_cast<int>(uniform(rng, kInsnIndexRange))
                                                  : 0});
    t.cfg.blocks.push_back(std::move(block));
  }

  std::vector<std::string> globals, callees, constants;
  for (int k = 0; k < 3; ++k) globals.push_back(stem + "_" + word(rng, 2));
  for (int k = 0; k < 3; ++k) callees.push_back(word(rng, 2) + "_" + word(rng, 2));
  for (int k = 0; k < 3; ++k) constants.push_back(hex(rng() & 0xffffffffull));
  const std::string crypto_callee =
      crypto_words[uniform(rng, crypto_words.size())] + "_" + word(rng, 2);
  for (int k = 0; k < kLocals; ++k) t.source_locals.push_back(word(rng, 2));

  auto pick = [&](const std::vector<std::string>& v) { return v[uniform(rng, v.size())]; };
  auto local = [&]() { return "$" + std::to_string(uniform(rng, kLocals)); };
  const size_t count = 8 + uniform(rng, 7);
  for (size_t s = 0; s < count; ++s) {
    Statement st;
    switch (uniform(rng, 7)) {
      case 0:
        st.callee = pick(callees);
        st.text = local() + " = " + st.callee + "(" + local() + ", " + pick(constants) + ");";
        break;
      case 1:
        st.text = pick(globals) + "[" + local() + "] ^= " + local() + ";";
        break;
      case 2:
        st.text = local() + " = (" + local() + " << " + std::to_string(1 + uniform(rng, 15)) +
                  ") ^ " + pick(constants) + ";";
        break;
      case 3:
        st.text = "if (" + local() + " > " + pick(constants) + ") { " + local() + " = " +
                  pick(globals) + "; }";
        break;
      case 4: {
        const std::string i = local();
        st.text = "for (" + i + " = 0; " + i + " < " + std::to_string(4 + uniform(rng, 60)) + "; " +
                  i + "++) " + local() + " += " + pick(globals) + "[" + i + "];";
        break;
      }
      case 5:
        st.callee = pick(callees);
        st.text = st.callee + "(" + pick(globals) + ", " + local() + ");";
        break;
      default:
        st.callee = crypto_callee;
        st.text = local() + " = " + st.callee + "(" + local() + ");";
        break;
    }
    t.statements.push_back(std::move(st));
  }
  t.statements.push_back({"return " + local() + ";", ""});
  return t;
}

std::string fill_locals(const std::string& text, const std::vector<std::string>& names) {
  std::string out;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '$' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      out += names[static_cast<size_t>(text[i + 1] - '0')];
      ++i;
    } else {
      out += text[i];
    }
  }
  return out;
}

Cfg perturb(const Cfg& base, const SyntheticConfig& config, const std::array<double, 3>& weights,
            Rng& rng) {
  Cfg cfg;
  for (const auto& block : base.blocks) {
    std::vector<Insn> out;
    for (size_t k = 0; k < block.size(); ++k) {
      Insn insn = block[k];
      const bool terminator = k + 1 == block.size();
      if (!terminator && chance(rng, config.indel_rate)) continue;
      if (chance(rng, config.substitution_rate) && !(terminator && insn.index == 0))
        insn.index = static_cast<int>(uniform(rng, kInsnIndexRange));
      if (!terminator && chance(rng, config.indel_rate)) out.push_back(body_insn(rng, weights));
      out.push_back(insn);
    }
    cfg.blocks.push_back(std::move(out));
  }
  cfg.edges = base.edges;

  // Split blocks: the tail becomes a new block that inherits the out-edges.
  const size_t original = cfg.blocks.size();
  for (size_t b = 0; b < original; ++b) {
    if (cfg.blocks[b].size() < 2 || !chance(rng, config.split_rate)) continue;
    const size_t at = 1 + uniform(rng, cfg.blocks[b].size() - 1);
    const int tail = static_cast<int>(cfg.blocks.size());
    std::vector<Insn> rest(cfg.blocks[b].begin() + static_cast<long>(at), cfg.blocks[b].end());
    cfg.blocks[b].resize(at);
    cfg.blocks.push_back(std::move(rest));
    for (auto& e : cfg.edges)
      if (e.first == static_cast<int>(b)) e.first = tail;
    cfg.edges.emplace_back(static_cast<int>(b), tail);
  }

  // Permute every block but the entry.
  std::vector<int> order(cfg.blocks.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin() + 1, order.end(), rng);
  std::vector<int> position(order.size());
  for (size_t i = 0; i < order.size(); ++i) position[static_cast<size_t>(order[i])] = static_cast<int>(i);
  Cfg permuted;
  for (int old : order) permuted.blocks.push_back(std::move(cfg.blocks[static_cast<size_t>(old)]));
  for (const auto& [a, b] : cfg.edges)
    permuted.edges.emplace_back(position[static_cast<size_t>(a)], position[static_cast<size_t>(b)]);
  std::sort(permuted.edges.begin(), permuted.edges.end());
  return permuted;
}

// One decompiler naming scheme for every build; only the numbering moves.
std::vector<std::string> decompiler_locals(Rng& rng) {
  std::vector<int> numbers(kLocals);
  std::iota(numbers.begin(), numbers.end(), 1 + static_cast<int>(uniform(rng, 3)));
  std::shuffle(numbers.begin(), numbers.end(), rng);
  std::vector<std::string> names;
  for (int n : numbers) names.push_back("v" + std::to_string(n));
  return names;
}

FunctionRecord render(const GroupTemplate& t, const std::string& id_prefix, int variant,
                      const SyntheticConfig& config, std::string* source_out) {
  Rng rng = derive(config.seed, 0x7a41, fnv1a(id_prefix),
                   static_cast<uint64_t>(variant));
  const BuildProfile profile = build_profile(variant);
  const OpcodeCategoryMap& map = default_opcode_map();

  FunctionRecord r;
  r.id = id_prefix + "-v" + std::to_string(variant);
  r.project = t.project;
  r.binary = t.project + "-" + std::string(to_string(profile.arch)) + std::to_string(profile.bits) +
             "-" + profile.compiler + "-" + std::string(to_string(profile.opt)) + ".so";
  r.source_file = t.source_file;
  r.name = t.name;
  r.arch = profile.arch;
  r.bits = profile.bits;
  r.compiler = profile.compiler;
  r.compiler_version = profile.compiler_version;
  r.opt = profile.opt;

  const Cfg cfg = perturb(t.cfg, config, t.body_weights, rng);
  std::array<std::vector<std::string>, 4> mnemonics;
  for (int c = 0; c < 4; ++c)
    mnemonics[static_cast<size_t>(c)] = map.opcodes_in(profile.arch, static_cast<OpcodeCategory>(c));
  for (const auto& block : cfg.blocks) {
    BasicBlock out;
    for (const Insn& insn : block) {
      const auto& list = mnemonics[static_cast<size_t>(insn.category)];
      out.push_back(list[static_cast<size_t>(insn.index) % list.size()]);
    }
    r.blocks.push_back(std::move(out));
  }
  r.edges = cfg.edges;

  const auto locals = decompiler_locals(rng);
  std::string body;
  for (size_t s = 0; s < t.statements.size(); ++s) {
    const bool last = s + 1 == t.statements.size();
    if (!last && chance(rng, config.drop_rate)) continue;
    body += "  " + fill_locals(t.statements[s].text, locals) + "\n";
    if (!t.statements[s].callee.empty()) r.callees.push_back(t.statements[s].callee);
  }
  std::string decl = "  int";
  for (size_t k = 0; k < locals.size(); ++k) decl += (k ? ", " : " ") + locals[k];
  r.pseudo_code = "int sub_" + hex(0x400000 + (rng() & 0xfffff0)).substr(2) + "(int a1, int a2) {\n" +
                  decl + ";\n" + body + "}\n";

  if (source_out) {
    std::string src = "int " + t.name + "(int a1, int a2) {\n  int";
    for (size_t k = 0; k < t.source_locals.size(); ++k) src += (k ? ", " : " ") + t.source_locals[k];
    src += ";\n";
    for (const auto& st : t.statements) src += "  " + fill_locals(st.text, t.source_locals) + "\n";
    *source_out = src + "}\n";
  }
  return r;
}

}  // namespace

BuildProfile build_profile(int variant) {
  static const BuildProfile kProfiles[] = {
      {"gcc", "9.4", Opt::kO0, Arch::kX86, 64},
      {"clang", "12.0", Opt::kO2, Arch::kArm, 32},
      {"gcc", "11.2", Opt::kO1, Arch::kMips, 64},
      {"clang", "14.0", Opt::kO3, Arch::kX86, 32},
      {"gcc", "7.5", Opt::kOs, Arch::kArm, 64},
      {"clang", "9.0", Opt::kO0, Arch::kMips, 32},
  };
  return kProfiles[static_cast<size_t>(variant) % std::size(kProfiles)];
}

SyntheticBenchmark make_synthetic_benchmark(const SyntheticConfig& config) {
  if (config.groups < 0 || config.distractor_groups < 0 || config.variants < 1 ||
      config.train_variants < 0 || config.train_variants > config.variants)
    throw PreconditionError("invalid synthetic benchmark configuration");
  const auto shapes = make_shapes(config.seed);
  std::vector<std::string> crypto_words;
  for (const auto& c : default_registry().classes())
    if (c.in_vector && c.category == CryptoCategory::kPrimitive && crypto_words.size() < 24)
      crypto_words.push_back(c.canonical);

  SyntheticBenchmark out;
  auto group_id = [](char tag, int g) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%c%04d", tag, g);
    return std::string(buf);
  };
  for (int g = 0; g < config.groups; ++g) {
    const GroupTemplate t = make_group(config.seed, 1, g, shapes, crypto_words);
    for (int v = 0; v < config.variants; ++v) {
      if (v < config.train_variants) {
        std::string source;
        out.train.records.push_back(render(t, group_id('g', g), v, config, &source));
        out.source_pairs.emplace_back(std::move(source), out.train.records.back().pseudo_code);
      } else {
        out.heldout.records.push_back(render(t, group_id('g', g), v, config, nullptr));
      }
    }
  }
  for (int g = 0; g < config.distractor_groups; ++g) {
    const GroupTemplate t = make_group(config.seed, 2, g, shapes, crypto_words);
    for (int v = config.train_variants; v < config.variants; ++v)
      out.distractors.records.push_back(render(t, group_id('d', g), v, config, nullptr));
  }
  out.train.provenance.source_path = out.heldout.provenance.source_path =
      out.distractors.provenance.source_path = "synthetic:" + std::to_string(config.seed);
  return out;
}

}  // namespace foc
