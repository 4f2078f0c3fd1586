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

#ifndef REGDISP_EXEC_STATS_H_
#define REGDISP_EXEC_STATS_H_

#include <cstdint>

namespace regdisp {

// Counters accumulated over one simulation. The v0 slot is outside the
// tag array, so v0 accesses never count as VRF lookups.
struct ExecStats {
  std::uint64_t cycles = 0;
  std::uint64_t instructions_retired = 0;
  std::uint64_t vrf_lookups = 0;
  std::uint64_t vrf_hits = 0;
  std::uint64_t vrf_misses = 0;
  // Evictee stores issued by the dispersion control unit.
  std::uint64_t spills = 0;
  // Operand loads issued by the dispersion control unit.
  std::uint64_t fills = 0;
  // Cycles spent executing dispersion micro-ops.
  std::uint64_t stall_cycles = 0;
  // Program-level memory latency beyond the one base cycle.
  std::uint64_t memory_extra_cycles = 0;
  std::uint64_t l1_hits = 0;
  std::uint64_t l1_misses = 0;

  double hit_rate() const {
    return vrf_lookups == 0 ? 1.0
                            : static_cast<double>(vrf_hits) /
                                  static_cast<double>(vrf_lookups);
  }

  bool operator==(const ExecStats&) const = default;
};

// Counter-wise difference; used for steady-state windows.
inline ExecStats operator-(const ExecStats& a, const ExecStats& b) {
  ExecStats d;
  d.cycles = a.cycles - b.cycles;
  d.instructions_retired = a.instructions_retired - b.instructions_retired;
  d.vrf_lookups = a.vrf_lookups - b.vrf_lookups;
  d.vrf_hits = a.vrf_hits - b.vrf_hits;
  d.vrf_misses = a.vrf_misses - b.vrf_misses;
  d.spills = a.spills - b.spills;
  d.fills = a.fills - b.fills;
  d.stall_cycles = a.stall_cycles - b.stall_cycles;
  d.memory_extra_cycles = a.memory_extra_cycles - b.memory_extra_cycles;
  d.l1_hits = a.l1_hits - b.l1_hits;
  d.l1_misses = a.l1_misses - b.l1_misses;
  return d;
}

}  // namespace regdisp

#endif  // REGDISP_EXEC_STATS_H_
