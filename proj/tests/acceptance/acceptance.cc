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

// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "regdisp/config.h"
#include "regdisp/experiments.h"
#include "regdisp/kernels.h"
#include "regdisp/memsys.h"
#include "regdisp/pipeline.h"
#include "regdisp/vasm.h"
#include "regdisp/vrf.h"
#include "support/oracles.h"
#include "support/random_programs.h"

namespace {

using namespace regdisp;

// Pinned tolerances.
constexpr double kTransparencyBudgetSeconds = 120.0;
constexpr int kMaxUlps = 1;
constexpr double kSufficiencyCycleTolerance = 0.01;
constexpr double kSufficiencyHitRate = 0.99;
constexpr int kSufficiencyBudget = 8;
constexpr double kMonotoneSlack = 0.0;
constexpr double kMinSizeThreshold = 0.95;
constexpr int kMatmulMaxSize = 5;
constexpr double kEqualAreaMinSpeedup = 2.0;
constexpr double kEqualAreaBaselineTolerance = 0.05;
constexpr double kConvMaxPenalty = 0.25;
constexpr int kOracleTriples = 100'000;
constexpr int kOracleAccesses = 100'000;
constexpr int kStressInstructions = 10'000;
constexpr int kRoundTripPrograms = 1000;

constexpr int kSweepLo = 3;
constexpr int kSweepHi = 16;

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

bool same_outside_spill(const std::vector<std::uint8_t>& a,
                        const std::vector<std::uint8_t>& b, Addr spill_base) {
  return std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(spill_base),
                    b.begin());
}

int static_registers(const KernelCase& kc) {
  return analyze_registers(parse(kc.source)).active_registers;
}

Verdict functional_transparency() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const MachineConfig base;
  int runs = 0;
  for (const std::string& name : kernel_names()) {
    const KernelCase kc = build_kernel(name);
    const Program p = parse(kc.source);
    const ValidatedConfig fc = validate(base);
    const RunResult full = run(p, fc, kc.inputs);
    if (auto bad = compare_output(kc, full.memory, kMaxUlps)) {
      v.fail(name + " full vs golden: " + *bad);
    }
    for (int n = kSweepLo; n <= kSweepHi; ++n) {
      const RunResult c = run(p, validate(compact_config(base, n)), kc.inputs);
      ++runs;
      if (!same_outside_spill(c.memory, full.memory, base.spill_base_addr)) {
        v.fail(name + " compact(" + std::to_string(n) + ") differs from full");
      }
      if (auto bad = compare_output(kc, c.memory, kMaxUlps)) {
        v.fail(name + " compact(" + std::to_string(n) + ") vs golden: " + *bad);
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (secs >= kTransparencyBudgetSeconds) v.fail("took " + fmt("%.1f s", secs));
  if (v.pass) {
    v.detail = std::to_string(runs) + " compact runs identical to full and golden in " +
               fmt("%.2f s", secs);
  }
  return v;
}

Verdict sufficiency_at_eight() {
  Verdict v;
  std::ostringstream d;
  for (const std::string& name : kernel_names()) {
    const KernelCase kc = build_kernel(name);
    if (static_registers(kc) > kSufficiencyBudget) continue;
    const SteadyState s =
        steady_state(kc, compact_config(MachineConfig{}, kSufficiencyBudget));
    const double ratio = s.cycle_ratio();
    const double hit = s.other_steady.hit_rate();
    d << name << " ratio " << fmt("%.4f", ratio) << " hit " << fmt("%.4f", hit)
      << "; ";
    if (ratio > 1.0 + kSufficiencyCycleTolerance) {
      v.fail(name + " steady-state cycle ratio " + fmt("%.4f", ratio));
    }
    if (hit < kSufficiencyHitRate) {
      v.fail(name + " steady-state hit rate " + fmt("%.4f", hit));
    }
  }
  if (v.pass) v.detail = d.str();
  return v;
}

Verdict hit_rate_monotone() {
  Verdict v;
  std::vector<int> sizes;
  for (int n = kSweepLo; n <= kSweepHi; ++n) sizes.push_back(n);
  const SweepResult r = sweep(kernel_names(), sizes, MachineConfig{}, kDefaultSeed);
  std::map<std::string, std::vector<double>> by_kernel;
  for (const SweepRow& row : r.rows) {
    if (row.vrf_model == VrfKind::kCompact) by_kernel[row.kernel].push_back(row.hit_rate);
  }
  std::ostringstream d;
  for (const auto& [name, rates] : by_kernel) {
    for (std::size_t i = 1; i < rates.size(); ++i) {
      if (rates[i] + kMonotoneSlack < rates[i - 1]) {
        v.fail(name + " hit rate drops at size " +
               std::to_string(kSweepLo + static_cast<int>(i)));
      }
    }
    d << name << " " << fmt("%.3f", rates.front()) << "->"
      << fmt("%.3f", rates.back()) << "; ";
  }
  if (v.pass) v.detail = d.str();
  return v;
}

Verdict minimum_size() {
  Verdict v;
  const auto rows = min_size({"dropout", "matmul_tiled", "phase_rotation"},
                             kMinSizeThreshold, MachineConfig{}, kDefaultSeed);
  std::ostringstream d;
  for (const MinSizeEntry& e : rows) {
    d << e.kernel << " " << (e.reached ? std::to_string(e.size) : "none")
      << " (" << fmt("%.4f", e.hit_rate) << "); ";
    if (!e.reached) {
      v.fail(e.kernel + " never exceeds the threshold");
    } else if (e.kernel == "matmul_tiled" ? e.size > kMatmulMaxSize : e.size != 3) {
      v.fail(e.kernel + " needs size " + std::to_string(e.size));
    }
  }
  const RegisterUsageReport phase =
      analyze_registers(parse(build_kernel("phase_rotation").source));
  const int touched = phase.active_registers + (phase.v0_mask_references > 0 ? 1 : 0);
  d << "phase_rotation touches " << touched << " registers";
  if (touched != kNumArchVregs) {
    v.fail("phase_rotation touches only " + std::to_string(touched) + " registers");
  }
  if (v.pass) v.detail = d.str();
  return v;
}

Verdict equal_area_comparison() {
  Verdict v;
  const auto rows = equal_area({"dropout", "gemv", "jacobi2d", "matmul_tiled"},
                               MachineConfig{}, kDefaultSeed);
  std::ostringstream d;
  for (const EqualAreaEntry& e : rows) {
    d << e.kernel << " speedup " << fmt("%.2f", e.speedup()) << " vs-base "
      << fmt("%.4f", e.compact_normalized()) << "; ";
    if (e.kernel != "jacobi2d" && e.speedup() < kEqualAreaMinSpeedup) {
      v.fail(e.kernel + " speedup " + fmt("%.2f", e.speedup()));
    }
    if (e.compact_normalized() > 1.0 + kEqualAreaBaselineTolerance) {
      v.fail(e.kernel + " compact(8) at " + fmt("%.4f", e.compact_normalized()) +
             " of baseline");
    }
  }
  if (v.pass) v.detail = d.str();
  return v;
}

Verdict conv2d_pressure() {
  Verdict v;
  const KernelCase kc = build_kernel("conv2d");
  const int budget = static_registers(kc);
  const MachineConfig base;
  const KernelRun full = run_kernel(kc, validate(base));
  const KernelRun c8 = run_kernel(kc, validate(compact_config(base, 8)));
  const double penalty = static_cast<double>(c8.stats.cycles) /
                             static_cast<double>(full.stats.cycles) -
                         1.0;
  if (budget != 15) v.fail("register budget " + std::to_string(budget));
  if (c8.stats.spills == 0) v.fail("no spills");
  if (c8.stats.hit_rate() >= 1.0) v.fail("hit rate is 100%");
  if (c8.mismatch) v.fail("wrong output: " + *c8.mismatch);
  if (penalty >= kConvMaxPenalty) v.fail("penalty " + fmt("%.4f", penalty));
  if (v.pass) {
    v.detail = "budget 15, spills " + std::to_string(c8.stats.spills) + ", hit " +
               fmt("%.4f", c8.stats.hit_rate()) + ", penalty " +
               fmt("%.2f%%", 100 * penalty);
  }
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  for (int n : {3, 4, 8}) {
    MachineConfig mc;
    mc.vrf_model = VrfKind::kCompact;
    mc.cvrf_size = n;
    CompactVrf vrf(validate(mc));
    testing::FifoQueueReference ref(n, false);
    std::mt19937_64 rng(static_cast<std::uint64_t>(n));
    for (int i = 0; i < kOracleTriples && v.pass; ++i) {
      const OperandList ops = testing::random_operands(rng, n + 6);
      const Resolution got = vrf.resolve(ops);
      const auto want = ref.resolve(ops);
      if (got.hits != want.hits || got.misses != want.misses ||
          testing::summarize(got.micro_ops) != want.ops) {
        v.fail("cVRF(" + std::to_string(n) + ") diverges at triple " +
               std::to_string(i));
      }
    }
  }
  const ValidatedConfig c = validate(MachineConfig{});
  MemorySystem mem(c);
  testing::LruCacheReference cache(c->l1_size_bytes, c->l1_ways, c->line_bytes);
  std::mt19937_64 rng(77);
  for (int i = 0; i < kOracleAccesses && v.pass; ++i) {
    const Addr addr = 0x10000 + (rng() % 2048) * 32 + 4 * (rng() % 8);
    const bool write = rng() % 3 == 0;
    const auto [hit, dirty] = cache.access(addr, write);
    const AccessResult got = mem.access(addr, 4, write);
    const int want = c->l1_hit_cycles + (hit ? 0 : c->mem_latency_cycles) +
                     (dirty ? c->mem_latency_cycles : 0);
    if (got.hit != hit || got.latency_cycles != want) {
      v.fail("L1 diverges at access " + std::to_string(i));
    }
  }
  if (v.pass) {
    v.detail = "3 x 1e5 operand triples vs queue model, 1e5 accesses vs LRU model";
  }
  return v;
}

Verdict structural_invariants() {
  Verdict v;
  struct Variant {
    int n;
    Replacement replacement;
    DestFetch fetch;
  };
  const std::vector<Variant> variants = {
      {3, Replacement::kFifo, DestFetch::kPaperFaithful},
      {5, Replacement::kFifo, DestFetch::kSemantic},
      {8, Replacement::kLru, DestFetch::kPaperFaithful},
  };
  std::uint64_t checks = 0;
  for (std::size_t k = 0; k < variants.size() && v.pass; ++k) {
    const Program p = parse(testing::random_executable(100 + k, kStressInstructions));
    MachineConfig mc;
    mc.vrf_model = VrfKind::kCompact;
    mc.cvrf_size = variants[k].n;
    mc.replacement = variants[k].replacement;
    mc.dest_fetch = variants[k].fetch;
    Machine dut(validate(mc), p);
    Machine ref(validate(MachineConfig{}), p);
    const auto& vrf = static_cast<const CompactVrf&>(dut.vrf());
    while (!ref.halted() && v.pass) {
      ref.step();
      dut.step();
      for (const std::string& bad : vrf.check_invariants()) v.fail(bad);
      int tagged[kNumArchVregs] = {};
      for (int s = 0; s < vrf.size(); ++s) {
        if (vrf.tag(s)) ++tagged[*vrf.tag(s)];
      }
      if (tagged[0] != 0) v.fail("v0 in tag array");
      for (int a = 0; a < kNumArchVregs; ++a) {
        if (tagged[a] > 1) v.fail("v" + std::to_string(a) + " in two slots");
        if (dut.vreg(a) != ref.vreg(a)) {
          v.fail("v" + std::to_string(a) + " not recoverable at pc " +
                 std::to_string(ref.pc()));
        }
      }
      ++checks;
    }
  }
  if (v.pass) {
    v.detail = std::to_string(checks) + " post-instruction checks over 3 configs";
  }
  return v;
}

Verdict parser_round_trip() {
  Verdict v;
  for (const std::string& name : kernel_names()) {
    const Program p = parse(build_kernel(name).source);
    if (!(parse(disassemble(p)) == p)) v.fail(name);
  }
  std::mt19937_64 rng(9);
  for (int i = 0; i < kRoundTripPrograms; ++i) {
    const Program p = parse(testing::random_source(rng, 1 + i % 60));
    if (!(parse(disassemble(p)) == p)) v.fail("random program " + std::to_string(i));
  }
  if (v.pass) v.detail = "6 kernels and 1000 random programs";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"functional transparency", functional_transparency},
      {"sufficiency at size 8", sufficiency_at_eight},
      {"hit-rate monotonicity", hit_rate_monotone},
      {"minimum-size report", minimum_size},
      {"equal-area comparison", equal_area_comparison},
      {"conv2d pressure case", conv2d_pressure},
      {"oracle equivalence", oracle_equivalence},
      {"structural invariants", structural_invariants},
      {"parser round trip", parser_round_trip},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    while (v.detail.size() >= 2 && v.detail.compare(v.detail.size() - 2, 2, "; ") == 0) {
      v.detail.resize(v.detail.size() - 2);
    }
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, v.pass ? "PASS" : "FAIL",
                criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
