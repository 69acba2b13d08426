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

#include "foc/crypto_registry.h"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "foc/common.h"

namespace foc {
namespace {

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = ascii_lower(c);
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

struct Row {
  const char* canonical;
  CryptoCategory category;
  std::vector<std::string> aliases;
  bool in_vector;
};

std::vector<CryptoClass> default_classes() {
  using C = CryptoCategory;
  constexpr auto P = C::kPrimitive;
  // Vector classes in bag order: primitives, block modes, AE modes.
  const std::vector<Row> rows = {
      {"3des", P, {"triple-des", "triple des", "tripledes", "desede", "des-ede"}, true},
      {"aes", P, {"rijndael", "advanced encryption standard", "aes128", "aes192", "aes256", "aes512"}, true},
      {"aria", P, {"korean algorithm"}, true},
      {"blake2", P, {"blake2b", "blake2s"}, true},
      {"blowfish", P, {"bf", "blowfish-cipher"}, true},
      {"camellia", P, {"ntt cipher"}, true},
      {"cast", P, {"cast-128", "cast5", "cast-256", "cast6", "cast128", "cast256"}, true},
      {"chacha20", P, {"chacha"}, true},
      {"cmac", P, {"cipher-mac", "cipher based mac"}, true},
      {"curve25519", P, {"curve-25519", "x25519", "ristretto255", "montgomery curve"}, true},
      {"curve448", P, {"curve-448", "x448", "goldilocks"}, true},
      {"des", P, {"data encryption standard"}, true},
      {"dh", P, {"diffie hellman", "diffie-hellman", "dhke", "diffiehellman", "dh-key-exchange"}, true},
      {"dsa", P, {"digital signature algorithm"}, true},
      {"ecc", P, {"ec", "elliptic", "curve", "elliptic curve cryptography"}, true},
      {"ecdh", P, {"elliptic curve diffie-hellman", "ec diffie-hellman"}, true},
      {"ecdsa", P, {"elliptic curve dsa", "ec dsa"}, true},
      {"ecjpake", P, {"elliptic curve j-pake", "ec j-pake"}, true},
      {"ed448", P, {"ed-448", "edwards448"}, true},
      {"ed25519", P, {"ed-25519", "edwards25519"}, true},
      {"hmac", P, {"hash mac", "hash-based mac"}, true},
      {"idea", P, {"international data encryption algorithm"}, true},
      {"md4", P, {"message digest 4"}, true},
      {"md5", P, {"message digest 5"}, true},
      {"mdc2", P, {"mdc-2", "message digest cipher 2"}, true},
      {"poly1305", P, {"poly-1305", "mac-poly1305"}, true},
      {"rc2", P, {"rivest cipher 2"}, true},
      {"rc4", P, {"rivest cipher 4", "arc4", "alleged rc4"}, true},
      {"ripemd160", P, {"ripemd-160", "ripe md", "ripe-md", "rmd160"}, true},
      {"rsa", P, {"rivest-shamir-adleman"}, true},
      {"salsa20", P, {"salsa"}, true},
      {"sha1", P, {"sha-1", "secure hash algorithm 1"}, true},
      {"sha224", P, {"sha-224", "secure hash algorithm 224"}, true},
      {"sha256", P, {"sha-256", "secure hash algorithm 256"}, true},
      {"sha384", P, {"sha-384", "secure hash algorithm 384"}, true},
      {"sha512", P, {"sha-512", "secure hash algorithm 512"}, true},
      {"sha3", P, {"keccak", "secure hash algorithm 3"}, true},
      {"siphash", P, {"sip hash"}, true},
      {"sm2", P, {"chinese sm2"}, true},
      {"sm3", P, {"chinese sm3"}, true},
      {"sm4", P, {"chinese sm4"}, true},
      {"tea", P, {"tiny encryption algorithm"}, true},
      {"umac", P, {"universal mac"}, true},
      {"whirlpool", P, {"whirlpool hash"}, true},
      {"xtea", P, {"x-tea", "extended tea"}, true},
      {"cbc", C::kBlockMode, {}, true},
      {"pcbc", C::kBlockMode, {}, true},
      {"cfb", C::kBlockMode, {}, true},
      {"ctr", C::kBlockMode, {}, true},
      {"ecb", C::kBlockMode, {}, true},
      {"ofb", C::kBlockMode, {}, true},
      {"ocf", C::kBlockMode, {}, true},
      {"xts", C::kBlockMode, {}, true},
      {"ccm", C::kAeMode, {}, true},
      {"gcm", C::kAeMode, {}, true},
      {"sgcm", C::kAeMode, {}, true},
      {"cwc", C::kAeMode, {}, true},
      {"eax", C::kAeMode, {}, true},
      {"ocb", C::kAeMode, {}, true},
      {"siv", C::kAeMode, {}, true},
      {"iapm", C::kAeMode, {}, true},
      // Present in the alias table only; reported but outside the bag.
      {"safer", P, {"safer-sk64", "safer-sk128", "safer-k64", "safer-k128", "secure and fast encryption routine"}, false},
      {"seed", P, {"seed_c", "seed_enc", "seed_dec", "seedc", "seed c", "seed enc", "seed dec"}, false},
      {"pmac", P, {"parallel message authentication code", "parallel mac"}, false},
      {"aesni", P, {"aes-ni"}, false},
      {"tiger", P, {"tiger2"}, false},
      {"omac", P, {"one-key mac", "one key mac", "offset mac"}, false},
      {"rc5", P, {"rivest cipher 5"}, false},
      {"rc6", P, {"rivest cipher 6"}, false},
      {"twofish", P, {"two fish", "2fish"}, false},
      {"serpent", P, {"serpent cipher"}, false},
      {"mars", P, {"ibm mars"}, false},
  };
  std::vector<CryptoClass> classes;
  classes.reserve(rows.size());
  for (const auto& row : rows)
    classes.push_back({row.canonical, row.category, row.aliases, row.in_vector});
  return classes;
}

}  // namespace

struct CryptoRegistry::Trie {
  struct Node {
    std::unordered_map<char, int> next;
    int terminal = -1;
  };
  std::vector<Node> nodes{Node{}};
  std::vector<std::pair<std::string, size_t>> forms;  // form, class index

  void insert(const std::string& form, size_t cls) {
    int cur = 0;
    for (char c : form) {
      auto it = nodes[cur].next.find(c);
      if (it == nodes[cur].next.end()) {
        nodes.push_back(Node{});
        const int id = static_cast<int>(nodes.size()) - 1;
        nodes[cur].next.emplace(c, id);
        cur = id;
      } else {
        cur = it->second;
      }
    }
    nodes[cur].terminal = static_cast<int>(forms.size());
    forms.emplace_back(form, cls);
  }
};

std::string_view to_string(CryptoCategory category) {
  switch (category) {
    case CryptoCategory::kPrimitive: return "Primitive";
    case CryptoCategory::kBlockMode: return "BlockMode";
    case CryptoCategory::kAeMode: return "AEMode";
  }
  return "Primitive";
}

std::optional<CryptoCategory> parse_crypto_category(std::string_view s) {
  if (s == "Primitive") return CryptoCategory::kPrimitive;
  if (s == "BlockMode") return CryptoCategory::kBlockMode;
  if (s == "AEMode") return CryptoCategory::kAeMode;
  return std::nullopt;
}

CryptoRegistry::CryptoRegistry(std::vector<CryptoClass> classes,
                               std::set<std::string> disabled_forms)
    : classes_(std::move(classes)) {
  for (const auto& f : disabled_forms) disabled_.insert(lowercase(f));
  bool seen_nonvector = false;
  for (size_t c = 0; c < classes_.size(); ++c) {
    auto& cls = classes_[c];
    cls.canonical = lowercase(cls.canonical);
    for (auto& a : cls.aliases) a = lowercase(a);
    if (cls.in_vector) {
      if (seen_nonvector)
        throw ConfigError("vector class '" + cls.canonical + "' follows a non-vector class");
      ++vector_size_;
    } else {
      seen_nonvector = true;
    }
    std::vector<std::string> forms = cls.aliases;
    forms.insert(forms.begin(), cls.canonical);
    for (const auto& form : forms) {
      if (form.empty() || !is_word_char(form.front()) || !is_word_char(form.back()))
        throw ConfigError("form '" + form + "' of class '" + cls.canonical +
                          "' must start and end with a letter or digit");
      auto [it, inserted] = form_to_class_.emplace(form, c);
      if (!inserted && it->second != c)
        throw ConfigError("form '" + form + "' is claimed by both '" +
                          classes_[it->second].canonical + "' and '" + cls.canonical + "'");
      if (!inserted && form == cls.canonical)
        throw ConfigError("duplicate canonical class '" + form + "'");
    }
  }
  auto trie = std::make_shared<Trie>();
  for (size_t c = 0; c < classes_.size(); ++c) {
    if (!disabled_.count(classes_[c].canonical)) trie->insert(classes_[c].canonical, c);
    for (const auto& alias : classes_[c].aliases)
      if (!disabled_.count(alias)) trie->insert(alias, c);
  }
  trie_ = std::move(trie);
}

std::optional<size_t> CryptoRegistry::find_class(std::string_view canonical) const {
  const std::string key = lowercase(canonical);
  for (size_t c = 0; c < classes_.size(); ++c)
    if (classes_[c].canonical == key) return c;
  return std::nullopt;
}

std::optional<size_t> CryptoRegistry::class_of_form(std::string_view form) const {
  auto it = form_to_class_.find(lowercase(form));
  if (it == form_to_class_.end()) return std::nullopt;
  return it->second;
}

CryptoRegistry CryptoRegistry::with_disabled(const std::set<std::string>& forms) const {
  std::set<std::string> all = disabled_;
  all.insert(forms.begin(), forms.end());
  return CryptoRegistry(classes_, all);
}

std::vector<ClassHit> CryptoRegistry::scan(std::string_view text) const {
  const Trie& trie = *trie_;
  const std::string lower = lowercase(text);
  const size_t n = lower.size();
  std::vector<ClassHit> hits;
  size_t i = 0;
  while (i < n) {
    while (i < n && !is_word_char(lower[i])) ++i;
    if (i >= n) break;
    int node = 0;
    int best_form = -1;
    size_t best_end = 0;
    for (size_t j = i; j < n; ++j) {
      auto it = trie.nodes[node].next.find(lower[j]);
      if (it == trie.nodes[node].next.end()) break;
      node = it->second;
      const int term = trie.nodes[node].terminal;
      if (term >= 0 && (j + 1 == n || !is_word_char(lower[j + 1]))) {
        best_form = term;
        best_end = j + 1;
      }
    }
    if (best_form >= 0) {
      const auto& [form, cls] = trie.forms[best_form];
      hits.push_back({cls, form, i});
      i = best_end;
    } else {
      while (i < n && is_word_char(lower[i])) ++i;
    }
  }
  return hits;
}

std::string CryptoRegistry::to_file_text() const {
  std::ostringstream out;
  for (const auto& cls : classes_) {
    out << cls.canonical << '\t' << to_string(cls.category) << '\t';
    for (size_t a = 0; a < cls.aliases.size(); ++a) out << (a ? "|" : "") << cls.aliases[a];
    if (!cls.in_vector) out << "\tnonvector";
    out << '\n';
  }
  return out.str();
}

CryptoRegistry CryptoRegistry::from_file_text(std::string_view text) {
  std::vector<CryptoClass> classes;
  size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() < 2 || fields.size() > 4)
      throw ConfigError("registry line " + std::to_string(line_no) + ": expected 3 tab-separated fields");
    CryptoClass cls;
    cls.canonical = fields[0];
    const auto category = parse_crypto_category(fields[1]);
    if (!category)
      throw ConfigError("registry line " + std::to_string(line_no) + ": unknown category '" + fields[1] + "'");
    cls.category = *category;
    if (fields.size() >= 3 && !fields[2].empty())
      for (auto& alias : split(fields[2], '|'))
        if (!alias.empty()) cls.aliases.push_back(alias);
    if (fields.size() == 4) {
      if (fields[3] == "nonvector") cls.in_vector = false;
      else if (fields[3] != "vector")
        throw ConfigError("registry line " + std::to_string(line_no) + ": unknown flag '" + fields[3] + "'");
    }
    classes.push_back(std::move(cls));
  }
  return CryptoRegistry(std::move(classes));
}

CryptoRegistry CryptoRegistry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open registry file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_file_text(buf.str());
}

const CryptoRegistry& default_registry() {
  static const CryptoRegistry registry(default_classes());
  return registry;
}

std::set<std::string> classify_text(std::string_view text, const CryptoRegistry& registry) {
  std::set<std::string> out;
  for (const auto& hit : registry.scan(text)) out.insert(registry.classes()[hit.class_index].canonical);
  return out;
}

bool labels_agree(std::string_view summary, std::string_view source,
                  const CryptoRegistry& registry) {
  return classify_text(summary, registry) == classify_text(source, registry);
}

std::vector<int> keyword_bow(std::string_view text, const CryptoRegistry& registry) {
  std::vector<int> bow(registry.vector_size(), 0);
  for (const auto& hit : registry.scan(text))
    if (hit.class_index < registry.vector_size()) ++bow[hit.class_index];
  return bow;
}

}  // namespace foc
