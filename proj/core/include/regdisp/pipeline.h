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

#ifndef REGDISP_PIPELINE_H_
#define REGDISP_PIPELINE_H_

// Single-issue IF/ID/EX machine. Every instruction costs one base cycle.
// Operand resolution happens in ID; a tag-array miss stalls the machine for
// the summed latency of the dispersion micro-ops. Program-level memory
// instructions add their access latency beyond the first cycle.
//
//   cycles = instructions_retired + stall_cycles + memory_extra_cycles

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "regdisp/config.h"
#include "regdisp/exec_stats.h"
#include "regdisp/memsys.h"
#include "regdisp/vasm.h"
#include "regdisp/vrf.h"

namespace regdisp {

class Machine {
 public:
  // `program` must outlive the machine.
  Machine(const ValidatedConfig& config, const Program& program);

  // Copies segments into memory; throws SimError when a segment touches the
  // reserved register region.
  void load_data(std::span<const DataSegment> segments);
  // Preloads every vector register the program references, ascending, into
  // free register-file slots at no cost.
  void prewarm();

  // Executes the instruction at pc. Throws SimError on an invalid pc.
  void step();

  bool halted() const { return halted_; }
  std::uint32_t pc() const { return pc_; }
  std::uint32_t scalar(int reg) const { return x_[reg]; }
  int vl() const { return vl_; }
  Sew sew() const { return sew_; }
  int vlmax() const { return config_->vlen_bits / sew_bits(sew_); }
  const ExecStats& stats() const { return stats_; }
  const MemorySystem& memory() const { return mem_; }
  MemorySystem& memory() { return mem_; }
  const VectorRegisterFile& vrf() const { return *vrf_; }
  VectorRegisterFile& vrf() { return *vrf_; }
  const ValidatedConfig& config() const { return config_; }

  VectorValue vreg(int arch) const {
    return vrf_->architectural_value(arch, mem_);
  }

  // Set after each step.
  const Resolution& last_resolution() const { return last_resolution_; }

 private:
  void set_x(std::optional<std::uint8_t> reg, std::uint32_t value) {
    if (reg && *reg != 0) x_[*reg] = value;
  }
  std::uint32_t get_x(std::optional<std::uint8_t> reg) const {
    return reg ? x_[*reg] : 0;
  }
  void execute_vector(const Instruction& inst);
  int timed_span(Addr addr, std::size_t len, bool write);

  ValidatedConfig config_;
  const Program& program_;
  MemorySystem mem_;
  std::unique_ptr<VectorRegisterFile> vrf_;
  std::array<std::uint32_t, 32> x_{};
  std::uint32_t pc_ = 0;
  int vl_ = 0;
  Sew sew_ = Sew::k32;
  bool halted_ = false;
  ExecStats stats_;
  Resolution last_resolution_;
};

struct RunOptions {
  std::uint64_t max_cycles = 200'000'000;
  bool warm_start = false;
  // Snapshot the counters when this many instructions have retired.
  std::optional<std::uint64_t> checkpoint_instructions;
  // One line per retired instruction:
  //   pc, mnemonic, hits, misses, microops, cycles_so_far
  std::ostream* trace = nullptr;
  // Throws if a register-file invariant breaks after any instruction.
  bool check_invariants = false;
  std::function<void(const Machine&)> on_retire;
};

struct RunResult {
  std::vector<std::uint8_t> memory;
  ExecStats stats;
  std::optional<ExecStats> checkpoint;
};

RunResult run(const Program& program, const ValidatedConfig& config,
              std::span<const DataSegment> inputs,
              const RunOptions& options = {});

}  // namespace regdisp

#endif  // REGDISP_PIPELINE_H_
