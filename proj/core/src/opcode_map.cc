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

#include "foc/opcode_map.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "foc/common.h"

namespace foc {
namespace {

constexpr std::array<std::string_view, 4> kCategoryNames = {"General", "Arithmetic",
                                                            "Logic", "Branch"};

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

std::vector<std::string_view> words(std::string_view list) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < list.size()) {
    while (i < list.size() && list[i] == ' ') ++i;
    size_t j = i;
    while (j < list.size() && list[j] != ' ') ++j;
    if (j > i) out.push_back(list.substr(i, j - i));
    i = j;
  }
  return out;
}

struct ArchTable {
  Arch arch;
  std::string_view general, arithmetic, logic, branch;
};

// clang-format off
const ArchTable kX86 = {
    Arch::kX86,
    "mov movzx movsx movsxd movabs push pop pushf popf pushfd popfd pusha popa "
    "cmp lea nop xchg cmpxchg cmpxchg8b cmpxchg16b leave enter cdq cqo cwd cwde "
    "cdqe cbw bswap movsb movsw movsd movsq stosb stosw stosd stosq lodsb lodsw "
    "lodsd scasb cmpsb cld std clc stc cmc lahf sahf int int3 hlt ud2 cpuid "
    "rdtsc endbr64 endbr32 sete setne seta setae setb setbe setg setge setl "
    "setle sets setns seto setno setp setnp cmove cmovne cmova cmovae cmovb "
    "cmovbe cmovg cmovge cmovl cmovle cmovs cmovns movaps movups movapd movupd "
    "movdqa movdqu movq movd movss movhps movlps movhlps movlhps movntdq movnti "
    "prefetcht0 prefetchnta lfence mfence sfence pause fld fst fstp fild fist "
    "fistp fxch fldz fld1 fcom fcomp fucom fucomi fucomip fcomi ucomiss ucomisd "
    "comiss comisd cvtsi2sd cvtsi2ss cvttsd2si cvttss2si cvtsd2ss cvtss2sd "
    "pshufd pshufb shufps unpcklps punpcklbw punpckldq punpcklqdq pinsrd pextrd "
    "pmovmskb movmskps xlatb syscall sysenter vmovdqu vmovdqa vmovups vmovaps",
    "add sub mul imul div idiv inc dec neg adc sbb xadd addss addsd addps addpd "
    "subss subsd subps subpd mulss mulsd mulps mulpd divss divsd divps divpd "
    "sqrtss sqrtsd paddb paddw paddd paddq psubb psubw psubd psubq pmulld pmullw "
    "pmuludq pmuldq pmaddwd fadd faddp fsub fsubp fsubr fmul fmulp fdiv fdivp "
    "fdivr fsqrt fabs fchs minss maxss minsd maxsd pavgb adcx adox mulx vpaddd "
    "vpaddq vpsubd",
    "and or xor not shl shr sar sal rol ror rcl rcr shld shrd test bt bts btr "
    "btc bsf bsr andn pand pandn por pxor psllw pslld psllq psrlw psrld psrlq "
    "psraw psrad pslldq psrldq andps andpd orps orpd xorps xorpd andnps rorx "
    "sarx shlx shrx popcnt lzcnt tzcnt aesenc aesenclast aesdec aesdeclast "
    "aeskeygenassist aesimc pclmulqdq sha1rnds4 sha1nexte sha1msg1 sha1msg2 "
    "sha256rnds2 sha256msg1 sha256msg2 vpxor vpand vpor vpslld vpsrld vprold",
    "jmp je jne jz jnz ja jae jb jbe jg jge jl jle js jns jo jno jp jnp jc jnc "
    "jcxz jecxz jrcxz call ret retn retf loop loope loopne iret iretq"};

const ArchTable kArm = {
    Arch::kArm,
    "mov movs movw movt movk movz movn ldr ldrb ldrh ldrsb ldrsh ldrsw ldrd "
    "ldrex ldur ldurb ldurh ldp ldm ldmia ldmfd ldmdb str strb strh strd strex "
    "stur sturb sturh stp stm stmia stmfd stmdb push pop cmp cmn adr adrp nop "
    "svc swi mrs msr dmb dsb isb csel cset csetm csinc csinv csneg vmov vldr vstr "
    "vpush vpop vldm vstm fmov sxtb sxth sxtw uxtb uxth ubfx sbfx bfi bfc ubfm "
    "sbfm bfxil rev rev16 rev32 clz ld1 st1 dup ins umov smov it ite itt "
    "itee ldaxr stlxr ldxr stxr ldar stlr prfm yield wfi wfe bkpt hint fcmp "
    "fcsel fcvt scvtf ucvtf fcvtzs fcvtzu vcmp vcvt vmrs",
    "add adds adc adcs sub subs sbc sbcs rsb rsbs rsc mul muls mla mls umull "
    "smull umlal smlal umulh smulh madd msub mneg smaddl umaddl smsubl umsubl "
    "sdiv udiv neg negs qadd qsub uadd8 usub8 sadd16 ssub16 vadd vsub vmul vdiv "
    "vmla vmls vneg vabs vsqrt fadd fsub fmul fdiv fmadd fmsub fnmul fneg fabs "
    "fsqrt addw subw addv uaddlv umull2 smull2 uadalp usat ssat cinc cneg",
    "and ands orr orrs eor eors bic bics orn eon mvn mvns tst teq lsl lsls lsr "
    "lsrs asr asrs ror rors rrx lslv lsrv asrv rorv extr vand vorr veor vbic "
    "vmvn vshl vshr aese aesd aesmc aesimc sha1c sha1h sha1m sha1p sha256h "
    "sha256h2 sha256su0 sha256su1 ushr shl sshr ext tbl not",
    "b bl bx blx beq bne bcs bcc bmi bpl bvs bvc bhi bls bge blt bgt ble bal "
    "bhs blo b.eq b.ne b.lt b.ge b.gt b.le b.hi b.ls b.cs b.cc b.mi b.pl b.hs "
    "b.lo cbz cbnz tbz tbnz br blr ret"};

const ArchTable kMips = {
    Arch::kMips,
    "move lw lb lbu lh lhu lwl lwr lwu ld ldl ldr sw sb sh swl swr sd sdl sdr "
    "lui li la lwc1 swc1 ldc1 sdc1 mfhi mflo mthi mtlo mfc0 mtc0 mfc1 mtc1 dmfc1 "
    "dmtc1 slt slti sltu sltiu nop syscall break sync ll sc lld scd mov.s mov.d "
    "cvt.s.d cvt.d.s cvt.d.w cvt.s.w trunc.w.d c.eq.d c.lt.d c.le.d c.eq.s "
    "c.lt.s movn movz teq tne seb seh wsbh ext ins dext dins",
    "add addu addi addiu dadd daddu daddi daddiu sub subu dsub dsubu mult multu "
    "dmult dmultu div divu ddiv ddivu mul madd maddu msub msubu neg negu add.s "
    "add.d sub.s sub.d mul.s mul.d div.s div.d neg.s neg.d abs.s abs.d sqrt.s "
    "sqrt.d",
    "and andi or ori xor xori nor not sll srl sra sllv srlv srav dsll dsrl dsra "
    "dsll32 dsrl32 dsra32 dsllv dsrlv dsrav rotr rotrv drotr clz clo",
    "b bal beq bne beqz bnez blez bgtz bltz bgez bltzal bgezal beql bnel blezl "
    "bgtzl bltzl bgezl j jal jr jalr jr.hb jalr.hb bc1t bc1f"};
// clang-format on

OpcodeCategoryMap make_default_map() {
  OpcodeCategoryMap map;
  for (const ArchTable* table : {&kX86, &kArm, &kMips}) {
    const std::array<std::pair<std::string_view, OpcodeCategory>, 4> lists = {{
        {table->general, OpcodeCategory::kGeneral},
        {table->arithmetic, OpcodeCategory::kArithmetic},
        {table->logic, OpcodeCategory::kLogic},
        {table->branch, OpcodeCategory::kBranch},
    }};
    for (const auto& [list, category] : lists)
      for (auto op : words(list)) map.add(table->arch, op, category);
  }
  map.add_strip_suffix(Arch::kArm, ".w");
  map.add_strip_suffix(Arch::kArm, ".n");
  return map;
}

std::string lowercase_trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> top_k(const std::map<std::string, long>& counts, size_t k) {
  std::vector<std::pair<std::string, long>> items(counts.begin(), counts.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> out;
  for (size_t i = 0; i < items.size() && i < k; ++i) out.push_back(items[i].first);
  return out;
}

}  // namespace

std::string_view to_string(OpcodeCategory category) {
  return kCategoryNames[static_cast<size_t>(category)];
}

std::optional<OpcodeCategory> parse_opcode_category(std::string_view s) {
  for (size_t i = 0; i < kCategoryNames.size(); ++i)
    if (kCategoryNames[i] == s) return static_cast<OpcodeCategory>(i);
  return std::nullopt;
}

OpcodeCategoryMap::OpcodeCategoryMap() { set_vocab({}, {}); }

void OpcodeCategoryMap::add(Arch arch, std::string_view opcode, OpcodeCategory category) {
  const std::string op = lowercase_trim(opcode);
  if (op.empty()) throw ConfigError("empty opcode in category map");
  auto& table = categories_[static_cast<size_t>(arch)];
  auto [it, inserted] = table.emplace(op, category);
  if (!inserted && it->second != category)
    throw ConfigError("opcode '" + op + "' on " + std::string(to_string(arch)) +
                      " mapped to both " + std::string(to_string(it->second)) + " and " +
                      std::string(to_string(category)));
}

void OpcodeCategoryMap::add_strip_suffix(Arch arch, std::string_view suffix) {
  auto& list = suffixes_[static_cast<size_t>(arch)];
  const std::string s = lowercase_trim(suffix);
  if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(s);
}

std::string OpcodeCategoryMap::normalize(Arch arch, std::string_view opcode) const {
  std::string op = lowercase_trim(opcode);
  for (const auto& suffix : suffixes_[static_cast<size_t>(arch)]) {
    if (op.size() > suffix.size() && op.compare(op.size() - suffix.size(), suffix.size(), suffix) == 0) {
      op.resize(op.size() - suffix.size());
      break;
    }
  }
  return op;
}

std::optional<OpcodeCategory> OpcodeCategoryMap::lookup(Arch arch, std::string_view normalized) const {
  const auto& table = categories_[static_cast<size_t>(arch)];
  auto it = table.find(std::string(normalized));
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> OpcodeCategoryMap::opcodes_in(OpcodeCategory category) const {
  std::set<std::string> ops;
  for (const auto& table : categories_)
    for (const auto& [op, cat] : table)
      if (cat == category) ops.insert(op);
  return {ops.begin(), ops.end()};
}

std::vector<std::string> OpcodeCategoryMap::opcodes_in(Arch arch, OpcodeCategory category) const {
  std::vector<std::string> ops;
  for (const auto& [op, cat] : categories_[static_cast<size_t>(arch)])
    if (cat == category) ops.push_back(op);
  std::sort(ops.begin(), ops.end());
  return ops;
}

std::optional<int> OpcodeCategoryMap::general_slot(std::string_view op) const {
  auto it = general_index_.find(std::string(op));
  if (it == general_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> OpcodeCategoryMap::arith_slot(std::string_view op) const {
  auto it = arith_index_.find(std::string(op));
  if (it == arith_index_.end()) return std::nullopt;
  return it->second;
}

bool OpcodeCategoryMap::has_vocab() const {
  return !general_index_.empty() || !arith_index_.empty();
}

void OpcodeCategoryMap::set_vocab(std::vector<std::string> general, std::vector<std::string> arith) {
  auto install = [&](std::vector<std::string>& list, size_t size, OpcodeCategory category,
                     std::unordered_map<std::string, int>& index, const char* what) {
    if (list.size() > size)
      throw ConfigError(std::string(what) + " vocabulary has " + std::to_string(list.size()) +
                        " entries, limit " + std::to_string(size));
    list.resize(size);
    index.clear();
    const auto allowed = opcodes_in(category);
    for (size_t i = 0; i < list.size(); ++i) {
      if (list[i].empty()) continue;
      if (!std::binary_search(allowed.begin(), allowed.end(), list[i]))
        throw ConfigError(std::string(what) + " vocabulary entry '" + list[i] +
                          "' is not a " + std::string(to_string(category)) + " opcode");
      if (!index.emplace(list[i], static_cast<int>(i)).second)
        throw ConfigError(std::string(what) + " vocabulary repeats '" + list[i] + "'");
    }
  };
  install(general, kGeneralVocabSize, OpcodeCategory::kGeneral, general_index_, "general");
  install(arith, kArithVocabSize, OpcodeCategory::kArithmetic, arith_index_, "arithmetic");
  general_vocab_ = std::move(general);
  arith_vocab_ = std::move(arith);
}

std::string OpcodeCategoryMap::to_file_text() const {
  std::ostringstream out;
  for (size_t a = 0; a < categories_.size(); ++a) {
    const auto arch = to_string(static_cast<Arch>(a));
    std::vector<std::pair<std::string, OpcodeCategory>> rows(categories_[a].begin(),
                                                             categories_[a].end());
    std::sort(rows.begin(), rows.end());
    for (const auto& [op, cat] : rows) out << arch << '\t' << op << '\t' << to_string(cat) << '\n';
    for (const auto& suffix : suffixes_[a]) out << arch << '\t' << suffix << "\tSuffix\n";
  }
  return out.str();
}

OpcodeCategoryMap OpcodeCategoryMap::from_file_text(std::string_view text) {
  OpcodeCategoryMap map;
  size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, '\t');
    const std::string where = "category map line " + std::to_string(line_no);
    if (fields.size() != 3) throw ConfigError(where + ": expected arch<TAB>opcode<TAB>category");
    const auto arch = parse_arch(fields[0]);
    if (!arch) throw ConfigError(where + ": unknown arch '" + fields[0] + "'");
    if (fields[2] == "Suffix") {
      map.add_strip_suffix(*arch, fields[1]);
      continue;
    }
    const auto category = parse_opcode_category(fields[2]);
    if (!category) throw ConfigError(where + ": unknown category '" + fields[2] + "'");
    map.add(*arch, fields[1], *category);
  }
  return map;
}

OpcodeCategoryMap OpcodeCategoryMap::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open category map '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_file_text(buf.str());
}

std::string OpcodeCategoryMap::vocab_text() const {
  std::ostringstream out;
  for (const auto& op : general_vocab_) out << "general\t" << op << '\n';
  for (const auto& op : arith_vocab_) out << "arith\t" << op << '\n';
  return out.str();
}

void OpcodeCategoryMap::set_vocab_text(std::string_view text) {
  std::vector<std::string> general, arith;
  for (auto line : split(text, '\n')) {
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2) throw ConfigError("malformed vocabulary line '" + line + "'");
    if (fields[0] == "general") general.push_back(fields[1]);
    else if (fields[0] == "arith") arith.push_back(fields[1]);
    else throw ConfigError("unknown vocabulary kind '" + fields[0] + "'");
  }
  set_vocab(std::move(general), std::move(arith));
}

const OpcodeCategoryMap& default_opcode_map() {
  static const OpcodeCategoryMap map = make_default_map();
  return map;
}

OpcodeCategoryMap build_vocab(const Corpus& corpus, OpcodeCategoryMap map) {
  if (corpus.records.empty()) throw PreconditionError("cannot build a vocabulary from an empty corpus");
  std::map<std::string, long> general, arith;
  for (const auto& record : corpus.records) {
    for (const auto& block : record.blocks) {
      for (const auto& raw : block) {
        const std::string op = map.normalize(record.arch, raw);
        const auto category = map.lookup(record.arch, op);
        if (category == OpcodeCategory::kGeneral) ++general[op];
        else if (category == OpcodeCategory::kArithmetic) ++arith[op];
      }
    }
  }
  map.set_vocab(top_k(general, OpcodeCategoryMap::kGeneralVocabSize),
                top_k(arith, OpcodeCategoryMap::kArithVocabSize));
  return map;
}

}  // namespace foc
