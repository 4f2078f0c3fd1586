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

#ifndef REGDISP_EXPERIMENTS_H_
#define REGDISP_EXPERIMENTS_H_

// Experiment harness shared by the command-line driver, the benchmarks and
// the acceptance suite. Every cycle ratio is normalized to a Full register
// file at 256-bit vectors.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "regdisp/config.h"
#include "regdisp/exec_stats.h"
#include "regdisp/kernels.h"
#include "regdisp/pipeline.h"

namespace regdisp {

inline constexpr int kBaselineVlenBits = 256;
inline constexpr double kSteadyStateWarmup = 0.05;

MachineConfig baseline_config(const MachineConfig& base);
MachineConfig compact_config(const MachineConfig& base, int size);
// Full register file with the given vector length and matching lanes.
MachineConfig narrow_config(const MachineConfig& base, int vlen_bits);

struct KernelRun {
  ExecStats stats;
  std::optional<ExecStats> checkpoint;
  std::vector<std::uint8_t> memory;
  // Set when the output region differs from the scalar reference.
  std::optional<std::string> mismatch;
};

KernelRun run_kernel(const KernelCase& kernel, const ValidatedConfig& config,
                     const RunOptions& options = {});

// Counters accumulated after the first `warmup` fraction of retired
// instructions, for the Full model and for `config`.
struct SteadyState {
  ExecStats full_total;
  ExecStats other_total;
  ExecStats full_steady;
  ExecStats other_steady;

  double cycle_ratio() const {
    return static_cast<double>(other_steady.cycles) /
           static_cast<double>(full_steady.cycles);
  }
};

SteadyState steady_state(const KernelCase& kernel, const MachineConfig& config,
                         double warmup = kSteadyStateWarmup);

struct SweepRow {
  std::string kernel;
  VrfKind vrf_model = VrfKind::kFull;
  int cvrf_size = kNumArchVregs;
  int vlen_bits = kBaselineVlenBits;
  std::uint64_t cycles = 0;
  double hit_rate = 1.0;
  std::uint64_t spills = 0;
  std::uint64_t fills = 0;
  double cycles_normalized = 1.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

inline constexpr const char* kCsvHeader =
    "kernel,vrf_model,cvrf_size,vlen_bits,cycles,hit_rate,spills,fills,"
    "cycles_normalized";

// One simulation; throws Error when the output is wrong.
SweepRow run_single(const std::string& kernel, const MachineConfig& config,
                    std::uint64_t seed, std::ostream* trace = nullptr);

// Full baseline plus Compact(n) for every n in `sizes`, per kernel.
SweepResult sweep(const std::vector<std::string>& kernels,
                  const std::vector<int>& sizes, const MachineConfig& base,
                  std::uint64_t seed);

void sort_rows(SweepResult& result);
void write_csv(std::ostream& out, const SweepResult& result);
void write_table(std::ostream& out, const SweepResult& result);
// Row invariants and per-kernel hit-rate monotonicity; empty when all hold.
std::vector<std::string> check_sweep(const SweepResult& result);

struct MinSizeEntry {
  std::string kernel;
  int size = kNumArchVregs;
  double hit_rate = 0.0;
  bool reached = false;
};

// Smallest Compact size in [3, 32] whose whole-run hit rate exceeds
// `threshold`; threshold must lie in (0, 1).
std::vector<MinSizeEntry> min_size(const std::vector<std::string>& kernels,
                                   double threshold, const MachineConfig& base,
                                   std::uint64_t seed);
void write_min_size(std::ostream& out, const std::vector<MinSizeEntry>& rows,
                    double threshold);

struct EqualAreaEntry {
  std::string kernel;
  std::uint64_t baseline_cycles = 0;  // Full, 256-bit
  std::uint64_t compact_cycles = 0;   // Compact(8), 256-bit
  std::uint64_t narrow_cycles = 0;    // Full, 64-bit
  double compact_normalized() const {
    return static_cast<double>(compact_cycles) /
           static_cast<double>(baseline_cycles);
  }
  double narrow_normalized() const {
    return static_cast<double>(narrow_cycles) /
           static_cast<double>(baseline_cycles);
  }
  // How much faster the compact configuration is than the narrow one.
  double speedup() const {
    return static_cast<double>(narrow_cycles) /
           static_cast<double>(compact_cycles);
  }
};

inline constexpr int kEqualAreaCompactSize = 8;
inline constexpr int kEqualAreaNarrowVlen = 64;

std::vector<EqualAreaEntry> equal_area(const std::vector<std::string>& kernels,
                                       const MachineConfig& base,
                                       std::uint64_t seed);
void write_equal_area(std::ostream& out,
                      const std::vector<EqualAreaEntry>& rows);

}  // namespace regdisp

#endif  // REGDISP_EXPERIMENTS_H_
