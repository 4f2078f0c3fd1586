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

#include "regdisp/pipeline.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "regdisp/error.h"

namespace regdisp {

namespace {

std::uint32_t sew_mask(Sew sew) {
  return sew == Sew::k32 ? 0xFFFFFFFFu : (1u << sew_bits(sew)) - 1;
}

std::int32_t sign_extend(std::uint32_t v, Sew sew) {
  switch (sew) {
    case Sew::k8:
      return static_cast<std::int8_t>(v);
    case Sew::k16:
      return static_cast<std::int16_t>(v);
    case Sew::k32:
      break;
  }
  return static_cast<std::int32_t>(v);
}

[[noreturn]] void decode_fault(std::uint32_t pc, const Instruction& inst,
                               const std::string& why) {
  throw SimError(SimError::Kind::kDecodeFault,
                 "pc " + std::to_string(pc) + " '" + disassemble(inst) +
                     "': " + why);
}

}  // namespace

Machine::Machine(const ValidatedConfig& config, const Program& program)
    : config_(config),
      program_(program),
      mem_(config),
      vrf_(make_vrf(config)),
      vl_(config->vlen_bits / 32) {}

void Machine::load_data(std::span<const DataSegment> segments) {
  const Addr spill_lo = config_->spill_base_addr;
  const Addr spill_hi = spill_lo + config_->spill_region_bytes();
  for (const DataSegment& seg : segments) {
    if (seg.addr < spill_hi && spill_lo < seg.end()) {
      std::ostringstream msg;
      msg << "data segment at 0x" << std::hex << seg.addr
          << " overlaps the reserved vector register region";
      throw SimError(SimError::Kind::kDataOverlapsSpill, msg.str());
    }
    mem_.poke(seg.addr, seg.bytes);
  }
}

void Machine::prewarm() {
  const RegisterUsageReport usage = analyze_registers(program_);
  std::vector<int> regs;
  for (const auto& [reg, count] : usage.per_register_counts) {
    if (reg != 0) regs.push_back(reg);
  }
  vrf_->prewarm(regs, mem_);
}

int Machine::timed_span(Addr addr, std::size_t len, bool write) {
  const Addr line = config_->line_bytes;
  int latency = 0;
  while (len > 0) {
    const std::size_t chunk =
        std::min<std::size_t>(len, line - addr % line);
    latency += mem_.access(addr, chunk, write).latency_cycles;
    addr += chunk;
    len -= chunk;
  }
  return latency;
}

void Machine::step() {
  if (halted_ || pc_ >= program_.instructions.size()) {
    throw SimError(SimError::Kind::kInvalidPc,
                   "pc " + std::to_string(pc_) + " is outside the program (" +
                       std::to_string(program_.instructions.size()) +
                       " instructions)");
  }
  const Instruction& inst = program_.instructions[pc_];
  std::uint32_t next_pc = pc_ + 1;
  last_resolution_ = Resolution{};
  const std::uint64_t stall_before = stats_.stall_cycles;
  const std::uint64_t extra_before = stats_.memory_extra_cycles;

  switch (inst.opcode) {
    case Opcode::kLi:
      set_x(inst.rd, static_cast<std::uint32_t>(inst.imm));
      break;
    case Opcode::kAdd:
      set_x(inst.rd, get_x(inst.rs1) + get_x(inst.rs2));
      break;
    case Opcode::kAddi:
      set_x(inst.rd, get_x(inst.rs1) + static_cast<std::uint32_t>(inst.imm));
      break;
    case Opcode::kSub:
      set_x(inst.rd, get_x(inst.rs1) - get_x(inst.rs2));
      break;
    case Opcode::kMul:
      set_x(inst.rd, get_x(inst.rs1) * get_x(inst.rs2));
      break;
    case Opcode::kSlli:
      set_x(inst.rd, get_x(inst.rs1) << inst.imm);
      break;
    case Opcode::kBge:
      if (static_cast<std::int32_t>(get_x(inst.rs1)) >=
          static_cast<std::int32_t>(get_x(inst.rs2))) {
        next_pc = inst.target;
      }
      break;
    case Opcode::kBlt:
      if (static_cast<std::int32_t>(get_x(inst.rs1)) <
          static_cast<std::int32_t>(get_x(inst.rs2))) {
        next_pc = inst.target;
      }
      break;
    case Opcode::kBnez:
      if (get_x(inst.rs1) != 0) next_pc = inst.target;
      break;
    case Opcode::kJ:
      next_pc = inst.target;
      break;
    case Opcode::kHalt:
      halted_ = true;
      next_pc = pc_;
      break;
    case Opcode::kVsetvli: {
      sew_ = inst.sew;
      const auto max = static_cast<std::uint32_t>(vlmax());
      const std::uint32_t avl = (inst.rs1 && *inst.rs1 == 0) ? max : get_x(inst.rs1);
      vl_ = static_cast<int>(std::min(avl, max));
      set_x(inst.rd, static_cast<std::uint32_t>(vl_));
      break;
    }
    default:
      if (!opcode_info(inst.opcode).is_vector) {
        decode_fault(pc_, inst, "unhandled opcode");
      }
      execute_vector(inst);
      break;
  }

  ++stats_.instructions_retired;
  stats_.cycles += 1 + (stats_.stall_cycles - stall_before) +
                   (stats_.memory_extra_cycles - extra_before);
  stats_.l1_hits = mem_.hits();
  stats_.l1_misses = mem_.misses();
  pc_ = next_pc;
}

void Machine::execute_vector(const Instruction& inst) {
  const OpcodeInfo& info = opcode_info(inst.opcode);
  const int vlmax_now = vlmax();
  const bool dest_read =
      config_->dest_fetch == DestFetch::kPaperFaithful || inst.reads_dest ||
      vl_ < vlmax_now;

  // ID: resolve operand locations; stall for dispersion micro-ops.
  Resolution res = vrf_->resolve(vector_operands(inst, dest_read));
  stats_.vrf_lookups += res.hits + res.misses;
  stats_.vrf_hits += res.hits;
  stats_.vrf_misses += res.misses;
  for (const MicroOp& op : res.micro_ops) {
    if (op.kind == MicroOp::Kind::kStore) {
      res.stall_cycles += mem_.write_vector(op.addr, vrf_->slot_data(op.slot));
      ++stats_.spills;
    } else {
      auto [value, latency] = mem_.read_vector(op.addr);
      vrf_->slot_data(op.slot) = value;
      res.stall_cycles += latency;
      ++stats_.fills;
    }
  }
  stats_.stall_cycles += res.stall_cycles;

  // EX.
  int k = 0;
  std::optional<PhysReg> p_vs1, p_vs2, p_vd;
  if (inst.vs1) p_vs1 = res.phys[k++];
  if (inst.vs2) p_vs2 = res.phys[k++];
  if (inst.vd) p_vd = res.phys[k++];
  last_resolution_ = std::move(res);

  const VectorValue mask = vrf_->read_phys(PhysReg{PhysReg::kV0Slot, 0});
  auto active = [&](int i) { return !inst.masked || mask.mask_bit(i); };
  const Sew sew = sew_;
  const int vl = vl_;

  auto need_e32 = [&] {
    if (sew != Sew::k32) decode_fault(pc_, inst, "requires SEW=32");
  };

  switch (inst.opcode) {
    case Opcode::kVle32:
    case Opcode::kVlse32: {
      need_e32();
      VectorValue out = vrf_->read_phys(*p_vd);
      const Addr base = get_x(inst.rs1);
      const bool strided = inst.opcode == Opcode::kVlse32;
      const auto stride = strided
                              ? static_cast<std::int64_t>(
                                    static_cast<std::int32_t>(get_x(inst.rs2)))
                              : 4;
      if (base % 4 != 0 || stride % 4 != 0) {
        throw MemoryError(MemoryError::Kind::kMisaligned,
                          "vector element access is not 4-byte aligned");
      }
      int latency = 0;
      if (vl > 0) {
        if (!strided) {
          latency = timed_span(base, static_cast<std::size_t>(vl) * 4, false);
        } else {
          // One access per run of consecutive elements in the same line.
          const Addr line = config_->line_bytes;
          Addr run_line = ~Addr{0};
          for (int i = 0; i < vl; ++i) {
            const Addr a = base + static_cast<Addr>(i * stride);
            if (a / line != run_line) {
              run_line = a / line;
              latency += mem_.access(a, 4, false).latency_cycles;
            }
          }
        }
      }
      for (int i = 0; i < vl; ++i) {
        if (!active(i)) continue;
        out.set(Sew::k32, i,
                mem_.peek_u32(base + static_cast<Addr>(i * stride)));
      }
      vrf_->write_phys(*p_vd, out);
      stats_.memory_extra_cycles += latency > 0 ? latency - 1 : 0;
      return;
    }
    case Opcode::kVse32:
    case Opcode::kVsse32: {
      need_e32();
      const VectorValue data = vrf_->read_phys(*p_vs1);
      const Addr base = get_x(inst.rs1);
      const bool strided = inst.opcode == Opcode::kVsse32;
      const auto stride = strided
                              ? static_cast<std::int64_t>(
                                    static_cast<std::int32_t>(get_x(inst.rs2)))
                              : 4;
      if (base % 4 != 0 || stride % 4 != 0) {
        throw MemoryError(MemoryError::Kind::kMisaligned,
                          "vector element access is not 4-byte aligned");
      }
      int latency = 0;
      if (vl > 0) {
        if (!strided) {
          latency = timed_span(base, static_cast<std::size_t>(vl) * 4, true);
        } else {
          const Addr line = config_->line_bytes;
          Addr run_line = ~Addr{0};
          for (int i = 0; i < vl; ++i) {
            const Addr a = base + static_cast<Addr>(i * stride);
            if (a / line != run_line) {
              run_line = a / line;
              latency += mem_.access(a, 4, true).latency_cycles;
            }
          }
        }
      }
      for (int i = 0; i < vl; ++i) {
        if (!active(i)) continue;
        const std::uint32_t v = data.get(Sew::k32, i);
        const std::uint8_t b[4] = {
            static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
            static_cast<std::uint8_t>(v >> 16),
            static_cast<std::uint8_t>(v >> 24)};
        mem_.poke(base + static_cast<Addr>(i * stride), b);
      }
      stats_.memory_extra_cycles += latency > 0 ? latency - 1 : 0;
      return;
    }
    default:
      break;
  }

  VectorValue out = vrf_->read_phys(*p_vd);
  const std::uint32_t m = sew_mask(sew);

  switch (inst.opcode) {
    case Opcode::kVaddVV:
    case Opcode::kVsubVV:
    case Opcode::kVmulVV:
    case Opcode::kVmaccVV:
    case Opcode::kVmaddVV:
    case Opcode::kVmaxVV: {
      const VectorValue& a = vrf_->read_phys(*p_vs1);
      const VectorValue& b = vrf_->read_phys(*p_vs2);
      for (int i = 0; i < vl; ++i) {
        if (!active(i)) continue;
        const std::uint32_t x = a.get(sew, i);
        const std::uint32_t y = b.get(sew, i);
        const std::uint32_t d = out.get(sew, i);
        std::uint32_t r = 0;
        switch (inst.opcode) {
          case Opcode::kVaddVV: r = x + y; break;
          case Opcode::kVsubVV: r = x - y; break;
          case Opcode::kVmulVV: r = x * y; break;
          case Opcode::kVmaccVV: r = x * y + d; break;
          case Opcode::kVmaddVV: r = x * d + y; break;
          default:
            r = sign_extend(x, sew) >= sign_extend(y, sew) ? x : y;
            break;
        }
        out.set(sew, i, r & m);
      }
      break;
    }
    case Opcode::kVmvVV: {
      const VectorValue& a = vrf_->read_phys(*p_vs1);
      for (int i = 0; i < vl; ++i) out.set(sew, i, a.get(sew, i));
      break;
    }
    case Opcode::kVmvVX: {
      const std::uint32_t v = get_x(inst.rs1) & m;
      for (int i = 0; i < vl; ++i) out.set(sew, i, v);
      break;
    }
    case Opcode::kVredsumVS: {
      if (vl == 0) break;
      const VectorValue& src = vrf_->read_phys(*p_vs1);
      std::uint32_t acc = vrf_->read_phys(*p_vs2).get(sew, 0);
      for (int i = 0; i < vl; ++i) {
        if (active(i)) acc += src.get(sew, i);
      }
      out.set(sew, 0, acc & m);
      break;
    }
    case Opcode::kVfaddVV:
    case Opcode::kVfmulVV:
    case Opcode::kVfmaccVV:
    case Opcode::kVfmaxVV: {
      need_e32();
      const VectorValue& a = vrf_->read_phys(*p_vs1);
      const VectorValue& b = vrf_->read_phys(*p_vs2);
      for (int i = 0; i < vl; ++i) {
        if (!active(i)) continue;
        const float x = a.get_f32(i);
        const float y = b.get_f32(i);
        float r;
        switch (inst.opcode) {
          case Opcode::kVfaddVV: r = x + y; break;
          case Opcode::kVfmulVV: r = x * y; break;
          case Opcode::kVfmaccVV: r = std::fma(x, y, out.get_f32(i)); break;
          default: r = std::fmax(x, y); break;
        }
        out.set_f32(i, r);
      }
      break;
    }
    case Opcode::kVfredosumVS: {
      need_e32();
      if (vl == 0) break;
      const VectorValue& src = vrf_->read_phys(*p_vs1);
      float acc = vrf_->read_phys(*p_vs2).get_f32(0);
      for (int i = 0; i < vl; ++i) {
        if (active(i)) acc = acc + src.get_f32(i);
      }
      out.set_f32(0, acc);
      break;
    }
    case Opcode::kVmsltVX: {
      const VectorValue& a = vrf_->read_phys(*p_vs1);
      const std::int32_t s = sign_extend(get_x(inst.rs1) & m, sew);
      for (int i = 0; i < vl; ++i) {
        if (!active(i)) continue;
        out.set_mask_bit(i, a.get_signed(sew, i) < s);
      }
      break;
    }
    default:
      decode_fault(pc_, inst, "unhandled vector opcode");
  }
  (void)info;
  vrf_->write_phys(*p_vd, out);
}

RunResult run(const Program& program, const ValidatedConfig& config,
              std::span<const DataSegment> inputs, const RunOptions& options) {
  Machine machine(config, program);
  machine.load_data(program.data_segments);
  machine.load_data(inputs);
  if (options.warm_start) machine.prewarm();

  RunResult result;
  if (options.checkpoint_instructions && *options.checkpoint_instructions == 0) {
    result.checkpoint = machine.stats();
  }
  while (!machine.halted()) {
    if (machine.stats().cycles > options.max_cycles) {
      throw SimError(SimError::Kind::kCycleLimitExceeded,
                     "cycle limit of " + std::to_string(options.max_cycles) +
                         " exceeded at pc " + std::to_string(machine.pc()));
    }
    const std::uint32_t pc = machine.pc();
    machine.step();
    const ExecStats& s = machine.stats();
    if (options.trace) {
      const Resolution& r = machine.last_resolution();
      *options.trace << pc << ", "
                     << opcode_info(program.instructions[pc].opcode).mnemonic
                     << ", " << r.hits << ", " << r.misses << ", "
                     << r.micro_ops.size() << ", " << s.cycles << "\n";
    }
    if (options.check_invariants) {
      auto violations = machine.vrf().check_invariants();
      if (machine.vl() > machine.vlmax()) violations.push_back("vl > VLMAX");
      if (!violations.empty()) {
        std::string msg = "invariant violated after pc " + std::to_string(pc);
        for (const auto& v : violations) msg += "; " + v;
        throw Error(msg);
      }
    }
    if (options.checkpoint_instructions &&
        s.instructions_retired == *options.checkpoint_instructions) {
      result.checkpoint = s;
    }
    if (options.on_retire) options.on_retire(machine);
  }
  result.stats = machine.stats();
  result.memory = machine.memory().image();
  return result;
}

}  // namespace regdisp
