// Copyright 2026 The regdisp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "regdisp/vasm.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <sstream>

#include "regdisp/error.h"

namespace regdisp {

namespace {

constexpr OpcodeInfo kOpcodeTable[] = {
    // mnemonic       format                  mask   rd_dst vector
    {"li", Format::kRdImm, false, false, false},
    {"add", Format::kRdRsRs, false, false, false},
    {"addi", Format::kRdRsImm, false, false, false},
    {"sub", Format::kRdRsRs, false, false, false},
    {"mul", Format::kRdRsRs, false, false, false},
    {"slli", Format::kRdRsImm, false, false, false},
    {"bge", Format::kBranch2, false, false, false},
    {"blt", Format::kBranch2, false, false, false},
    {"bnez", Format::kBranch1, false, false, false},
    {"j", Format::kJump, false, false, false},
    {"halt", Format::kNone, false, false, false},
    {"vsetvli", Format::kVsetvli, false, false, false},
    {"vle32.v", Format::kVLoad, true, false, true},
    {"vse32.v", Format::kVStore, true, false, true},
    {"vlse32.v", Format::kVLoadStrided, true, false, true},
    {"vsse32.v", Format::kVStoreStrided, true, false, true},
    {"vadd.vv", Format::kVV, true, false, true},
    {"vsub.vv", Format::kVV, true, false, true},
    {"vmul.vv", Format::kVV, true, false, true},
    {"vmacc.vv", Format::kVV, true, true, true},
    {"vmadd.vv", Format::kVV, true, true, true},
    {"vmax.vv", Format::kVV, true, false, true},
    {"vmv.v.v", Format::kVMove, false, false, true},
    {"vmv.v.x", Format::kVSplat, false, false, true},
    // Reductions only write element 0; the rest of vd is tail-undisturbed.
    {"vredsum.vs", Format::kVV, true, true, true},
    {"vfadd.vv", Format::kVV, true, false, true},
    {"vfmul.vv", Format::kVV, true, false, true},
    {"vfmacc.vv", Format::kVV, true, true, true},
    {"vfmax.vv", Format::kVV, true, false, true},
    {"vfredosum.vs", Format::kVV, true, true, true},
    // Mask results are tail-undisturbed past vl.
    {"vmslt.vx", Format::kVX, true, true, true},
};

static_assert(std::size(kOpcodeTable) ==
              static_cast<std::size_t>(Opcode::kVmsltVX) + 1);

enum class TokKind { kWord, kComma, kLParen, kRParen, kColon };

struct Token {
  TokKind kind;
  std::string_view text;
  int col;
};

std::vector<Token> lex_line(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const char ch = line[i];
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++i;
      continue;
    }
    const int col = static_cast<int>(i) + 1;
    switch (ch) {
      case ',':
        tokens.push_back({TokKind::kComma, line.substr(i, 1), col});
        ++i;
        continue;
      case '(':
        tokens.push_back({TokKind::kLParen, line.substr(i, 1), col});
        ++i;
        continue;
      case ')':
        tokens.push_back({TokKind::kRParen, line.substr(i, 1), col});
        ++i;
        continue;
      case ':':
        tokens.push_back({TokKind::kColon, line.substr(i, 1), col});
        ++i;
        continue;
      default:
        break;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r' && line[j] != ',' && line[j] != '(' &&
           line[j] != ')' && line[j] != ':') {
      ++j;
    }
    tokens.push_back({TokKind::kWord, line.substr(i, j - i), col});
    i = j;
  }
  return tokens;
}

bool is_label_name(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) ||
                     s[0] == '_')) {
    return false;
  }
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s.remove_prefix(2);
  }
  if (s.empty()) return std::nullopt;
  std::uint64_t magnitude = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), magnitude,
                                   base);
  if (ec != std::errc() || ptr != s.data() + s.size() ||
      magnitude > (1ull << 62)) {
    return std::nullopt;
  }
  const auto value = static_cast<std::int64_t>(magnitude);
  return negative ? -value : value;
}

// One source line split into an optional label and the remaining tokens.
struct SourceLine {
  int number = 0;
  std::vector<Token> tokens;
  std::size_t body_start = 0;
  std::optional<Token> label;
};

std::vector<SourceLine> split_lines(std::string_view text) {
  std::vector<SourceLine> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++number;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    SourceLine sl;
    sl.number = number;
    sl.tokens = lex_line(line);
    if (sl.tokens.empty()) continue;
    if (sl.tokens.size() >= 2 && sl.tokens[0].kind == TokKind::kWord &&
        sl.tokens[1].kind == TokKind::kColon) {
      sl.label = sl.tokens[0];
      sl.body_start = 2;
    }
    lines.push_back(std::move(sl));
  }
  return lines;
}

class LineParser {
 public:
  LineParser(const SourceLine& line,
             const std::map<std::string, std::uint32_t>& labels)
      : line_(line), labels_(labels), pos_(line.body_start) {}

  Instruction parse_instruction() {
    const Token& mn = next_word("mnemonic");
    auto op = opcode_from_mnemonic(mn.text);
    if (!op) {
      fail(AsmError::Kind::kUnknownMnemonic, mn,
           "unknown mnemonic '" + std::string(mn.text) + "'");
    }
    Instruction inst;
    inst.opcode = *op;
    const OpcodeInfo& info = opcode_info(*op);
    switch (info.format) {
      case Format::kNone:
        break;
      case Format::kRdImm:
        inst.rd = xreg();
        comma();
        inst.imm = imm(std::numeric_limits<std::int32_t>::min(),
                       std::numeric_limits<std::uint32_t>::max());
        break;
      case Format::kRdRsRs:
        inst.rd = xreg();
        comma();
        inst.rs1 = xreg();
        comma();
        inst.rs2 = xreg();
        break;
      case Format::kRdRsImm:
        inst.rd = xreg();
        comma();
        inst.rs1 = xreg();
        comma();
        if (*op == Opcode::kSlli) {
          inst.imm = imm(0, 31);
        } else {
          inst.imm = imm(std::numeric_limits<std::int32_t>::min(),
                         std::numeric_limits<std::int32_t>::max());
        }
        break;
      case Format::kBranch2:
        inst.rs1 = xreg();
        comma();
        inst.rs2 = xreg();
        comma();
        label(inst);
        break;
      case Format::kBranch1:
        inst.rs1 = xreg();
        comma();
        label(inst);
        break;
      case Format::kJump:
        label(inst);
        break;
      case Format::kVsetvli:
        inst.rd = xreg();
        comma();
        inst.rs1 = xreg();
        comma();
        inst.sew = sew();
        break;
      case Format::kVLoad:
        inst.vd = vreg();
        comma();
        inst.rs1 = mem();
        break;
      case Format::kVStore:
        inst.vs1 = vreg();
        comma();
        inst.rs1 = mem();
        break;
      case Format::kVLoadStrided:
        inst.vd = vreg();
        comma();
        inst.rs1 = mem();
        comma();
        inst.rs2 = xreg();
        break;
      case Format::kVStoreStrided:
        inst.vs1 = vreg();
        comma();
        inst.rs1 = mem();
        comma();
        inst.rs2 = xreg();
        break;
      case Format::kVV:
        inst.vd = vreg();
        comma();
        inst.vs1 = vreg();
        comma();
        inst.vs2 = vreg();
        break;
      case Format::kVMove:
        inst.vd = vreg();
        comma();
        inst.vs1 = vreg();
        break;
      case Format::kVSplat:
        inst.vd = vreg();
        comma();
        inst.rs1 = xreg();
        break;
      case Format::kVX:
        inst.vd = vreg();
        comma();
        inst.vs1 = vreg();
        comma();
        inst.rs1 = xreg();
        break;
    }
    if (pos_ < line_.tokens.size() && peek().kind == TokKind::kComma) {
      const Token& c = line_.tokens[pos_++];
      const Token& m = next_word("mask operand");
      if (m.text != "v0.t") {
        fail(AsmError::Kind::kSyntax, m, "expected 'v0.t'");
      }
      if (!info.maskable) {
        fail(AsmError::Kind::kSyntax, c,
             "'" + std::string(info.mnemonic) + "' cannot be masked");
      }
      inst.masked = true;
    }
    if (pos_ < line_.tokens.size()) {
      fail(AsmError::Kind::kSyntax, peek(), "unexpected trailing token");
    }
    inst.reads_dest = info.reads_dest || inst.masked;
    return inst;
  }

  DataSegment parse_data() {
    ++pos_;  // .data
    DataSegment seg;
    const Token& addr_tok = next_word("address");
    auto addr = parse_int(addr_tok.text);
    if (!addr || *addr < 0) {
      fail(AsmError::Kind::kSyntax, addr_tok, "bad address");
    }
    seg.addr = static_cast<Addr>(*addr);
    while (pos_ < line_.tokens.size()) {
      if (!seg.bytes.empty()) comma();
      const Token& t = next_word("byte");
      auto v = parse_int(t.text);
      if (!v || *v < 0 || *v > 255) {
        fail(AsmError::Kind::kSyntax, t, "byte out of range [0, 255]");
      }
      seg.bytes.push_back(static_cast<std::uint8_t>(*v));
    }
    if (seg.bytes.empty()) {
      fail(AsmError::Kind::kSyntax, addr_tok, ".data needs at least one byte");
    }
    return seg;
  }

  [[noreturn]] void fail(AsmError::Kind kind, const Token& at,
                         const std::string& message) const {
    throw AsmError(kind, line_.number, at.col, message);
  }

 private:
  const Token& peek() const { return line_.tokens[pos_]; }

  int end_col() const {
    if (line_.tokens.empty()) return 1;
    const Token& last = line_.tokens.back();
    return last.col + static_cast<int>(last.text.size());
  }

  const Token& next_word(const char* what) {
    if (pos_ >= line_.tokens.size()) {
      throw AsmError(AsmError::Kind::kSyntax, line_.number, end_col(),
                     std::string("expected ") + what);
    }
    const Token& t = line_.tokens[pos_];
    if (t.kind != TokKind::kWord) {
      fail(AsmError::Kind::kSyntax, t, std::string("expected ") + what);
    }
    ++pos_;
    return t;
  }

  void expect(TokKind kind, const char* what) {
    if (pos_ >= line_.tokens.size()) {
      throw AsmError(AsmError::Kind::kSyntax, line_.number, end_col(),
                     std::string("expected ") + what);
    }
    if (line_.tokens[pos_].kind != kind) {
      fail(AsmError::Kind::kSyntax, line_.tokens[pos_],
           std::string("expected ") + what);
    }
    ++pos_;
  }

  void comma() { expect(TokKind::kComma, "','"); }

  std::uint8_t reg(char prefix, const char* what) {
    const Token& t = next_word(what);
    if (t.text.size() < 2 || t.text[0] != prefix ||
        !std::all_of(t.text.begin() + 1, t.text.end(), [](char c) {
          return std::isdigit(static_cast<unsigned char>(c));
        })) {
      fail(AsmError::Kind::kSyntax, t,
           std::string("expected ") + what + ", got '" + std::string(t.text) +
               "'");
    }
    auto v = parse_int(t.text.substr(1));
    if (!v || *v > 31) {
      fail(AsmError::Kind::kBadRegister, t,
           "register '" + std::string(t.text) + "' out of range [0, 31]");
    }
    return static_cast<std::uint8_t>(*v);
  }

  std::uint8_t vreg() { return reg('v', "vector register"); }
  std::uint8_t xreg() { return reg('x', "scalar register"); }

  std::uint8_t mem() {
    expect(TokKind::kLParen, "'('");
    const std::uint8_t r = xreg();
    expect(TokKind::kRParen, "')'");
    return r;
  }

  std::int64_t imm(std::int64_t lo, std::int64_t hi) {
    const Token& t = next_word("immediate");
    auto v = parse_int(t.text);
    if (!v) fail(AsmError::Kind::kSyntax, t, "bad immediate");
    if (*v < lo || *v > hi) {
      fail(AsmError::Kind::kSyntax, t, "immediate out of range");
    }
    return *v;
  }

  Sew sew() {
    const Token& t = next_word("element width");
    if (t.text == "e8") return Sew::k8;
    if (t.text == "e16") return Sew::k16;
    if (t.text == "e32") return Sew::k32;
    fail(AsmError::Kind::kSyntax, t, "expected e8, e16 or e32");
  }

  void label(Instruction& inst) {
    const Token& t = next_word("label");
    if (!is_label_name(t.text)) {
      fail(AsmError::Kind::kSyntax, t, "bad label name");
    }
    auto it = labels_.find(std::string(t.text));
    if (it == labels_.end()) {
      fail(AsmError::Kind::kUndefinedLabel, t,
           "undefined label '" + std::string(t.text) + "'");
    }
    inst.label = it->first;
    inst.target = it->second;
  }

  const SourceLine& line_;
  const std::map<std::string, std::uint32_t>& labels_;
  std::size_t pos_;
};

bool is_data_directive(const SourceLine& line) {
  return line.body_start < line.tokens.size() &&
         line.tokens[line.body_start].text == ".data";
}

}  // namespace

AsmError::AsmError(Kind kind, int line, int col, const std::string& message)
    : Error("line " + std::to_string(line) + ", col " + std::to_string(col) +
            ": " + message),
      kind_(kind),
      line_(line),
      col_(col) {}

const OpcodeInfo& opcode_info(Opcode op) {
  return kOpcodeTable[static_cast<std::size_t>(op)];
}

std::optional<Opcode> opcode_from_mnemonic(std::string_view mnemonic) {
  for (std::size_t i = 0; i < std::size(kOpcodeTable); ++i) {
    if (kOpcodeTable[i].mnemonic == mnemonic) return static_cast<Opcode>(i);
  }
  return std::nullopt;
}

Program parse(std::string_view text) {
  const std::vector<SourceLine> lines = split_lines(text);
  Program program;

  // Pass 1: label addresses.
  std::uint32_t index = 0;
  for (const SourceLine& line : lines) {
    if (line.label) {
      const Token& t = *line.label;
      if (!is_label_name(t.text)) {
        throw AsmError(AsmError::Kind::kSyntax, line.number, t.col,
                       "bad label name '" + std::string(t.text) + "'");
      }
      auto [it, inserted] = program.labels.emplace(std::string(t.text), index);
      if (!inserted) {
        throw AsmError(AsmError::Kind::kSyntax, line.number, t.col,
                       "duplicate label '" + std::string(t.text) + "'");
      }
    }
    if (line.body_start < line.tokens.size() && !is_data_directive(line)) {
      ++index;
    }
  }

  // Pass 2: encode.
  for (const SourceLine& line : lines) {
    if (line.body_start >= line.tokens.size()) continue;
    LineParser lp(line, program.labels);
    if (is_data_directive(line)) {
      DataSegment seg = lp.parse_data();
      for (const DataSegment& other : program.data_segments) {
        if (seg.addr < other.end() && other.addr < seg.end()) {
          lp.fail(AsmError::Kind::kSyntax, line.tokens[line.body_start],
                  "data segment overlaps an earlier segment");
        }
      }
      program.data_segments.push_back(std::move(seg));
    } else {
      program.instructions.push_back(lp.parse_instruction());
    }
  }
  return program;
}

std::string disassemble(const Instruction& inst) {
  const OpcodeInfo& info = opcode_info(inst.opcode);
  std::ostringstream out;
  auto v = [](const std::optional<std::uint8_t>& r) {
    return "v" + std::to_string(r.value_or(0));
  };
  auto x = [](const std::optional<std::uint8_t>& r) {
    return "x" + std::to_string(r.value_or(0));
  };
  out << info.mnemonic;
  switch (info.format) {
    case Format::kNone:
      break;
    case Format::kRdImm:
      out << " " << x(inst.rd) << ", " << inst.imm;
      break;
    case Format::kRdRsRs:
      out << " " << x(inst.rd) << ", " << x(inst.rs1) << ", " << x(inst.rs2);
      break;
    case Format::kRdRsImm:
      out << " " << x(inst.rd) << ", " << x(inst.rs1) << ", " << inst.imm;
      break;
    case Format::kBranch2:
      out << " " << x(inst.rs1) << ", " << x(inst.rs2) << ", " << inst.label;
      break;
    case Format::kBranch1:
      out << " " << x(inst.rs1) << ", " << inst.label;
      break;
    case Format::kJump:
      out << " " << inst.label;
      break;
    case Format::kVsetvli:
      out << " " << x(inst.rd) << ", " << x(inst.rs1) << ", e"
          << sew_bits(inst.sew);
      break;
    case Format::kVLoad:
      out << " " << v(inst.vd) << ", (" << x(inst.rs1) << ")";
      break;
    case Format::kVStore:
      out << " " << v(inst.vs1) << ", (" << x(inst.rs1) << ")";
      break;
    case Format::kVLoadStrided:
      out << " " << v(inst.vd) << ", (" << x(inst.rs1) << "), " << x(inst.rs2);
      break;
    case Format::kVStoreStrided:
      out << " " << v(inst.vs1) << ", (" << x(inst.rs1) << "), "
          << x(inst.rs2);
      break;
    case Format::kVV:
      out << " " << v(inst.vd) << ", " << v(inst.vs1) << ", " << v(inst.vs2);
      break;
    case Format::kVMove:
      out << " " << v(inst.vd) << ", " << v(inst.vs1);
      break;
    case Format::kVSplat:
      out << " " << v(inst.vd) << ", " << x(inst.rs1);
      break;
    case Format::kVX:
      out << " " << v(inst.vd) << ", " << v(inst.vs1) << ", " << x(inst.rs1);
      break;
  }
  if (inst.masked) out << ", v0.t";
  return out.str();
}

std::string disassemble(const Program& program) {
  std::ostringstream out;
  for (const DataSegment& seg : program.data_segments) {
    out << ".data 0x" << std::hex << seg.addr << std::dec;
    for (std::size_t i = 0; i < seg.bytes.size(); ++i) {
      out << (i == 0 ? " " : ",") << static_cast<int>(seg.bytes[i]);
    }
    out << "\n";
  }
  // Labels sorted by name within one index; std::map iteration gives that.
  std::vector<std::vector<std::string>> labels_at(
      program.instructions.size() + 1);
  for (const auto& [name, idx] : program.labels) {
    labels_at[std::min<std::size_t>(idx, program.instructions.size())]
        .push_back(name);
  }
  for (std::size_t i = 0; i <= program.instructions.size(); ++i) {
    for (const std::string& name : labels_at[i]) out << name << ":\n";
    if (i < program.instructions.size()) {
      out << "    " << disassemble(program.instructions[i]) << "\n";
    }
  }
  return out.str();
}

OperandList vector_operands(const Instruction& inst, bool dest_read) {
  OperandList ops;
  if (inst.vs1) ops.push({*inst.vs1, true, false});
  if (inst.vs2) ops.push({*inst.vs2, true, false});
  if (inst.vd) ops.push({*inst.vd, dest_read, true});
  return ops;
}

}  // namespace regdisp
