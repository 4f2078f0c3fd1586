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

#include <gtest/gtest.h>

#include <sstream>

#include "regdisp/config.h"
#include "regdisp/error.h"
#include "regdisp/experiments.h"

namespace regdisp {
namespace {

SweepResult small_sweep(std::uint64_t seed = kDefaultSeed) {
  return sweep({"gemv", "dropout"}, {3, 4, 8}, MachineConfig{}, seed);
}

std::string csv_of(const SweepResult& r) {
  std::ostringstream out;
  write_csv(out, r);
  return out.str();
}

TEST(Csv, HeaderIsExact) {
  const std::string text = csv_of(small_sweep());
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "kernel,vrf_model,cvrf_size,vlen_bits,cycles,hit_rate,spills,fills,"
            "cycles_normalized");
}

TEST(Csv, RerunsAreByteIdentical) {
  EXPECT_EQ(csv_of(small_sweep()), csv_of(small_sweep()));
}

TEST(Csv, TimingDoesNotDependOnInputValues) {
  EXPECT_EQ(csv_of(small_sweep(1)), csv_of(small_sweep(2)));
}

TEST(Sweep, RowInvariants) {
  const SweepResult r = small_sweep();
  ASSERT_EQ(r.rows.size(), 2u * 4u);
  int baselines = 0;
  for (const SweepRow& row : r.rows) {
    EXPECT_GE(row.hit_rate, 0.0);
    EXPECT_LE(row.hit_rate, 1.0);
    EXPECT_GT(row.cycles, 0u);
    EXPECT_EQ(row.vlen_bits, 256);
    if (row.vrf_model == VrfKind::kFull) {
      ++baselines;
      EXPECT_EQ(row.cycles_normalized, 1.0);
      EXPECT_EQ(row.cvrf_size, 32);
      EXPECT_EQ(row.spills + row.fills, 0u);
    } else {
      EXPECT_GE(row.cycles_normalized, 1.0);
      EXPECT_GE(row.fills, static_cast<std::uint64_t>(0));
    }
  }
  EXPECT_EQ(baselines, 2);
  EXPECT_TRUE(check_sweep(r).empty());
}

TEST(Sweep, RowsAreSorted) {
  const SweepResult r = small_sweep();
  EXPECT_EQ(r.rows.front().kernel, "dropout");
  EXPECT_EQ(r.rows.back().kernel, "gemv");
  EXPECT_EQ(r.rows.back().vrf_model, VrfKind::kFull);
}

TEST(Sweep, CheckFlagsNonMonotoneHitRate) {
  SweepResult r = small_sweep();
  for (SweepRow& row : r.rows) {
    if (row.kernel == "gemv" && row.cvrf_size == 3) row.hit_rate = 0.9999;
  }
  EXPECT_FALSE(check_sweep(r).empty());
}

TEST(Sweep, CheckFlagsBaselineDrift) {
  SweepResult r = small_sweep();
  for (SweepRow& row : r.rows) {
    if (row.vrf_model == VrfKind::kFull) row.cycles_normalized = 1.5;
  }
  EXPECT_FALSE(check_sweep(r).empty());
}

TEST(Sweep, UnknownKernelIsAKernelError) {
  EXPECT_THROW(sweep({"fft"}, {3}, MachineConfig{}, 1), KernelError);
}

TEST(MinSize, ThresholdMustBeAProbability) {
  EXPECT_THROW(min_size({"gemv"}, 1.01, MachineConfig{}, 1), InvalidConfig);
  EXPECT_THROW(min_size({"gemv"}, 0.0, MachineConfig{}, 1), InvalidConfig);
}

TEST(MinSize, DropoutNeedsOnlyThreeRegisters) {
  const auto rows = min_size({"dropout"}, 0.95, MachineConfig{}, 1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].reached);
  EXPECT_EQ(rows[0].size, 3);
  EXPECT_GT(rows[0].hit_rate, 0.95);
}

TEST(MinSize, ReportFormat) {
  std::ostringstream out;
  write_min_size(out, {{"dropout", 3, 0.99916, true}}, 0.95);
  EXPECT_NE(out.str().find("dropout"), std::string::npos);
}

TEST(SteadyState, WindowExcludesWarmup) {
  MachineConfig c = compact_config(MachineConfig{}, 8);
  const SteadyState s = steady_state(build_kernel("matmul_tiled"), c);
  EXPECT_LT(s.other_steady.cycles, s.other_total.cycles);
  EXPECT_EQ(s.full_steady.instructions_retired,
            s.other_steady.instructions_retired);
  EXPECT_EQ(s.other_steady.vrf_misses, 0u);
  EXPECT_DOUBLE_EQ(s.cycle_ratio(), 1.0);
}

TEST(EqualArea, NarrowFullIsSlower) {
  const auto rows = equal_area({"dropout"}, MachineConfig{}, 1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_GT(rows[0].speedup(), 1.0);
  EXPECT_GT(rows[0].narrow_normalized(), 1.0);
}

TEST(ConfigHelpers, ShapeTheMachine) {
  MachineConfig base;
  base.mem_latency_cycles = 3;
  const MachineConfig c = compact_config(base, 6);
  EXPECT_EQ(c.vrf_model, VrfKind::kCompact);
  EXPECT_EQ(c.cvrf_size, 6);
  EXPECT_EQ(c.mem_latency_cycles, 3);
  const MachineConfig n = narrow_config(base, 64);
  EXPECT_EQ(n.vlen_bits, 64);
  EXPECT_EQ(n.lanes, 2);
  EXPECT_NO_THROW(validate(n));
  const MachineConfig b = baseline_config(c);
  EXPECT_EQ(b.vrf_model, VrfKind::kFull);
  EXPECT_EQ(b.vlen_bits, 256);
}

}  // namespace
}  // namespace regdisp
