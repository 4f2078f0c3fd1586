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

namespace regdisp {

RegisterUsageReport analyze_registers(const Program& program) {
  RegisterUsageReport report;
  bool v0_as_data = false;
  for (const Instruction& inst : program.instructions) {
    const bool mask_write = inst.opcode == Opcode::kVmsltVX;
    const std::optional<std::uint8_t> regs[] = {inst.vd, inst.vs1, inst.vs2};
    for (int slot = 0; slot < 3; ++slot) {
      const auto& r = regs[slot];
      if (!r) continue;
      ++report.per_register_counts[*r];
      if (*r == 0) {
        if (mask_write && slot == 0) {
          ++report.v0_mask_references;
        } else {
          v0_as_data = true;
        }
      }
    }
    if (inst.masked) {
      ++report.per_register_counts[0];
      ++report.v0_mask_references;
    }
  }
  report.v0_counted = v0_as_data;
  for (const auto& [reg, count] : report.per_register_counts) {
    if (reg != 0 || v0_as_data) ++report.active_registers;
  }
  report.utilization_pct = 100.0 * report.active_registers / kNumArchVregs;
  return report;
}

}  // namespace regdisp
