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

#ifndef REGDISP_VASM_H_
#define REGDISP_VASM_H_

// Mini vector assembly: a small RV32 + RVV subset in a line-oriented text
// format.
//
//   # comment
//   .data 0x10000 1,2,3,0xff      byte payload at an absolute address
//   loop:                         label (may prefix an instruction)
//       vsetvli x8, x6, e32
//       vle32.v v1, (x10)
//       vmacc.vv v3, v1, v2, v0.t
//       bnez x6, loop
//
// Vector operands are written destination first, then vs1, then vs2, and
// two-operand arithmetic computes `vs1 op vs2`. Stores carry their data
// register in the vs1 slot.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "regdisp/config.h"
#include "regdisp/vector_value.h"

namespace regdisp {

enum class Opcode : std::uint8_t {
  // Scalar.
  kLi,
  kAdd,
  kAddi,
  kSub,
  kMul,
  kSlli,
  kBge,
  kBlt,
  kBnez,
  kJ,
  kHalt,
  // Vector configuration.
  kVsetvli,
  // Vector memory.
  kVle32,
  kVse32,
  kVlse32,
  kVsse32,
  // Vector integer.
  kVaddVV,
  kVsubVV,
  kVmulVV,
  kVmaccVV,
  kVmaddVV,
  kVmaxVV,
  kVmvVV,
  kVmvVX,
  kVredsumVS,
  // Vector f32.
  kVfaddVV,
  kVfmulVV,
  kVfmaccVV,
  kVfmaxVV,
  kVfredosumVS,
  // Mask producing.
  kVmsltVX,
};

// Assembly syntax shapes.
enum class Format : std::uint8_t {
  kNone,           // halt
  kRdImm,          // li rd, imm
  kRdRsRs,         // add rd, rs1, rs2
  kRdRsImm,        // addi rd, rs1, imm
  kBranch2,        // blt rs1, rs2, label
  kBranch1,        // bnez rs1, label
  kJump,           // j label
  kVsetvli,        // vsetvli rd, rs1, e32
  kVLoad,          // vle32.v vd, (rs1)
  kVStore,         // vse32.v vs1, (rs1)
  kVLoadStrided,   // vlse32.v vd, (rs1), rs2
  kVStoreStrided,  // vsse32.v vs1, (rs1), rs2
  kVV,             // vadd.vv vd, vs1, vs2
  kVMove,          // vmv.v.v vd, vs1
  kVSplat,         // vmv.v.x vd, rs1
  kVX,             // vmslt.vx vd, vs1, rs1
};

struct OpcodeInfo {
  std::string_view mnemonic;
  Format format;
  bool maskable;
  // The old destination value feeds the result regardless of masking.
  bool reads_dest;
  bool is_vector;
};

const OpcodeInfo& opcode_info(Opcode op);
std::optional<Opcode> opcode_from_mnemonic(std::string_view mnemonic);

struct Instruction {
  Opcode opcode = Opcode::kHalt;
  std::optional<std::uint8_t> vd, vs1, vs2;
  std::optional<std::uint8_t> rd, rs1, rs2;
  std::int64_t imm = 0;
  Sew sew = Sew::k32;  // vsetvli only
  std::string label;   // branch target name
  std::uint32_t target = 0;
  bool masked = false;
  bool reads_dest = false;

  bool operator==(const Instruction&) const = default;
};

struct DataSegment {
  Addr addr = 0;
  std::vector<std::uint8_t> bytes;

  Addr end() const { return addr + bytes.size(); }
  bool operator==(const DataSegment&) const = default;
};

struct Program {
  std::vector<Instruction> instructions;
  std::map<std::string, std::uint32_t> labels;
  std::vector<DataSegment> data_segments;

  bool operator==(const Program&) const = default;
};

// Two-pass assembly: labels first, then instructions. Throws AsmError at the
// first problem found.
Program parse(std::string_view text);

// Canonical text; parse(disassemble(p)) == p.
std::string disassemble(const Program& program);
std::string disassemble(const Instruction& instruction);

struct RegisterUsageReport {
  // Distinct vector registers referenced; v0 is left out when it only ever
  // serves as a mask.
  int active_registers = 0;
  double utilization_pct = 0.0;
  std::map<int, int> per_register_counts;
  // References to v0 in a mask role (`v0.t` or a mask-producing write).
  int v0_mask_references = 0;
  bool v0_counted = false;
};

RegisterUsageReport analyze_registers(const Program& program);

// Vector register operands in dispersion resolution order (vs1, vs2, vd).
struct VectorOperand {
  std::uint8_t arch = 0;
  bool is_read = false;
  bool is_written = false;
};

struct OperandList {
  std::array<VectorOperand, 3> items{};
  int count = 0;

  void push(VectorOperand op) { items[count++] = op; }
  const VectorOperand* begin() const { return items.data(); }
  const VectorOperand* end() const { return items.data() + count; }
};

// `dest_read` says whether the destination's old value must be fetched.
OperandList vector_operands(const Instruction& inst, bool dest_read);

}  // namespace regdisp

#endif  // REGDISP_VASM_H_
