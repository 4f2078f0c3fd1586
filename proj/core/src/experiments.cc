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

#include "regdisp/experiments.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <tuple>

#include "regdisp/error.h"

namespace regdisp {

namespace {

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

KernelCase kernel_for(const std::string& name, const MachineConfig& config,
                      std::uint64_t seed) {
  return build_kernel(name, BuildOptions{seed, config.vlen_bits});
}

SweepRow make_row(const std::string& kernel, const MachineConfig& config,
                  const ExecStats& stats, std::uint64_t baseline_cycles) {
  SweepRow row;
  row.kernel = kernel;
  row.vrf_model = config.vrf_model;
  row.cvrf_size =
      config.vrf_model == VrfKind::kCompact ? config.cvrf_size : kNumArchVregs;
  row.vlen_bits = config.vlen_bits;
  row.cycles = stats.cycles;
  row.hit_rate = stats.hit_rate();
  row.spills = stats.spills;
  row.fills = stats.fills;
  row.cycles_normalized = static_cast<double>(stats.cycles) /
                          static_cast<double>(baseline_cycles);
  return row;
}

ExecStats checked_run(const KernelCase& kernel, const MachineConfig& config,
                      std::ostream* trace = nullptr) {
  RunOptions options;
  options.trace = trace;
  KernelRun run = run_kernel(kernel, validate(config), options);
  if (run.mismatch) {
    throw Error("wrong output under " + std::string(to_string(config.vrf_model)) +
                (config.vrf_model == VrfKind::kCompact
                     ? "(" + std::to_string(config.cvrf_size) + ")"
                     : std::string()) +
                ": " + *run.mismatch);
  }
  return run.stats;
}

}  // namespace

MachineConfig baseline_config(const MachineConfig& base) {
  MachineConfig c = base;
  c.vrf_model = VrfKind::kFull;
  c.vlen_bits = kBaselineVlenBits;
  c.lanes = kBaselineVlenBits / 32;
  return c;
}

MachineConfig compact_config(const MachineConfig& base, int size) {
  MachineConfig c = base;
  c.vrf_model = VrfKind::kCompact;
  c.cvrf_size = size;
  return c;
}

MachineConfig narrow_config(const MachineConfig& base, int vlen_bits) {
  MachineConfig c = base;
  c.vrf_model = VrfKind::kFull;
  c.vlen_bits = vlen_bits;
  c.lanes = vlen_bits / 32;
  return c;
}

KernelRun run_kernel(const KernelCase& kernel, const ValidatedConfig& config,
                     const RunOptions& options) {
  const Program program = parse(kernel.source);
  RunResult result = run(program, config, kernel.inputs, options);
  KernelRun out;
  out.stats = result.stats;
  out.checkpoint = result.checkpoint;
  out.mismatch = compare_output(kernel, result.memory);
  out.memory = std::move(result.memory);
  return out;
}

SteadyState steady_state(const KernelCase& kernel, const MachineConfig& config,
                         double warmup) {
  MachineConfig full = config;
  full.vrf_model = VrfKind::kFull;
  const ValidatedConfig full_cfg = validate(full);
  const ValidatedConfig other_cfg = validate(config);

  const KernelRun probe = run_kernel(kernel, full_cfg);
  RunOptions options;
  options.checkpoint_instructions = static_cast<std::uint64_t>(
      static_cast<double>(probe.stats.instructions_retired) * warmup);

  const KernelRun f = run_kernel(kernel, full_cfg, options);
  const KernelRun o = run_kernel(kernel, other_cfg, options);
  SteadyState s;
  s.full_total = f.stats;
  s.other_total = o.stats;
  s.full_steady = f.stats - f.checkpoint.value_or(ExecStats{});
  s.other_steady = o.stats - o.checkpoint.value_or(ExecStats{});
  return s;
}

SweepRow run_single(const std::string& kernel, const MachineConfig& config,
                    std::uint64_t seed, std::ostream* trace) {
  const KernelCase kc = kernel_for(kernel, config, seed);
  const ExecStats stats = checked_run(kc, config, trace);
  const MachineConfig base = baseline_config(config);
  std::uint64_t baseline = stats.cycles;
  if (!(base == config)) {
    baseline = checked_run(kernel_for(kernel, base, seed), base).cycles;
  }
  return make_row(kernel, config, stats, baseline);
}

SweepResult sweep(const std::vector<std::string>& kernels,
                  const std::vector<int>& sizes, const MachineConfig& base,
                  std::uint64_t seed) {
  SweepResult result;
  for (const std::string& name : kernels) {
    const MachineConfig full = baseline_config(base);
    const KernelCase kc = kernel_for(name, full, seed);
    const ExecStats baseline = checked_run(kc, full);
    result.rows.push_back(make_row(name, full, baseline, baseline.cycles));
    for (int size : sizes) {
      const MachineConfig c = compact_config(full, size);
      result.rows.push_back(
          make_row(name, c, checked_run(kc, c), baseline.cycles));
    }
  }
  sort_rows(result);
  return result;
}

void sort_rows(SweepResult& result) {
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     return std::tie(a.kernel, a.cvrf_size, a.vrf_model,
                                     a.vlen_bits) <
                            std::tie(b.kernel, b.cvrf_size, b.vrf_model,
                                     b.vlen_bits);
                   });
}

void write_csv(std::ostream& out, const SweepResult& result) {
  out << kCsvHeader << "\n";
  for (const SweepRow& r : result.rows) {
    out << r.kernel << ',' << to_string(r.vrf_model) << ',' << r.cvrf_size
        << ',' << r.vlen_bits << ',' << r.cycles << ',' << fixed(r.hit_rate, 6)
        << ',' << r.spills << ',' << r.fills << ','
        << fixed(r.cycles_normalized, 6) << "\n";
  }
}

void write_table(std::ostream& out, const SweepResult& result) {
  char buf[256];
  out << "# cycles normalized to a Full VRF at vlen 256\n";
  std::snprintf(buf, sizeof(buf), "%-15s %-8s %5s %5s %10s %8s %8s %8s %8s\n",
                "kernel", "vrf", "size", "vlen", "cycles", "hit", "spills",
                "fills", "norm");
  out << buf;
  for (const SweepRow& r : result.rows) {
    std::snprintf(buf, sizeof(buf),
                  "%-15s %-8s %5d %5d %10llu %8.4f %8llu %8llu %8.4f\n",
                  r.kernel.c_str(), std::string(to_string(r.vrf_model)).c_str(),
                  r.cvrf_size, r.vlen_bits,
                  static_cast<unsigned long long>(r.cycles), r.hit_rate,
                  static_cast<unsigned long long>(r.spills),
                  static_cast<unsigned long long>(r.fills),
                  r.cycles_normalized);
    out << buf;
  }
}

std::vector<std::string> check_sweep(const SweepResult& result) {
  std::vector<std::string> failures;
  std::map<std::string, std::vector<const SweepRow*>> compact_by_kernel;
  for (const SweepRow& r : result.rows) {
    const bool baseline = r.vrf_model == VrfKind::kFull &&
                          r.vlen_bits == kBaselineVlenBits;
    if (baseline && r.cycles_normalized != 1.0) {
      failures.push_back(r.kernel + ": baseline row is not normalized to 1");
    }
    if (r.vrf_model == VrfKind::kCompact) {
      if (r.vlen_bits == kBaselineVlenBits &&
          r.cycles_normalized < 1.0 - 1e-9) {
        failures.push_back(r.kernel + ": Compact(" +
                           std::to_string(r.cvrf_size) +
                           ") beats the Full baseline");
      }
      compact_by_kernel[r.kernel].push_back(&r);
    }
  }
  for (auto& [kernel, rows] : compact_by_kernel) {
    std::sort(rows.begin(), rows.end(), [](const SweepRow* a, const SweepRow* b) {
      return a->cvrf_size < b->cvrf_size;
    });
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i]->hit_rate < rows[i - 1]->hit_rate) {
        failures.push_back(kernel + ": hit rate falls from " +
                           fixed(rows[i - 1]->hit_rate, 6) + " at size " +
                           std::to_string(rows[i - 1]->cvrf_size) + " to " +
                           fixed(rows[i]->hit_rate, 6) + " at size " +
                           std::to_string(rows[i]->cvrf_size));
      }
    }
  }
  return failures;
}

std::vector<MinSizeEntry> min_size(const std::vector<std::string>& kernels,
                                   double threshold, const MachineConfig& base,
                                   std::uint64_t seed) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw InvalidConfig({"threshold must lie in (0, 1), got " +
                         fixed(threshold, 6)});
  }
  std::vector<MinSizeEntry> out;
  for (const std::string& name : kernels) {
    const MachineConfig full = baseline_config(base);
    const KernelCase kc = kernel_for(name, full, seed);
    MinSizeEntry entry;
    entry.kernel = name;
    for (int size = 3; size <= kNumArchVregs; ++size) {
      const ExecStats s = checked_run(kc, compact_config(full, size));
      entry.size = size;
      entry.hit_rate = s.hit_rate();
      if (entry.hit_rate > threshold) {
        entry.reached = true;
        break;
      }
    }
    out.push_back(entry);
  }
  std::sort(out.begin(), out.end(),
            [](const MinSizeEntry& a, const MinSizeEntry& b) {
              return a.kernel < b.kernel;
            });
  return out;
}

void write_min_size(std::ostream& out, const std::vector<MinSizeEntry>& rows,
                    double threshold) {
  out << "kernel,min_cvrf_size,hit_rate,reached\n";
  for (const MinSizeEntry& e : rows) {
    out << e.kernel << ',' << e.size << ',' << fixed(e.hit_rate, 6) << ','
        << (e.reached ? "yes" : "no") << "\n";
  }
  for (const MinSizeEntry& e : rows) {
    if (!e.reached) {
      out << "# warning: " << e.kernel << " never exceeds a hit rate of "
          << fixed(threshold, 4) << "; reporting " << kNumArchVregs << "\n";
    }
  }
}

std::vector<EqualAreaEntry> equal_area(const std::vector<std::string>& kernels,
                                       const MachineConfig& base,
                                       std::uint64_t seed) {
  std::vector<EqualAreaEntry> out;
  for (const std::string& name : kernels) {
    const MachineConfig full = baseline_config(base);
    const MachineConfig narrow = narrow_config(base, kEqualAreaNarrowVlen);
    // Builds at the narrow length first so unsupported shapes fail early.
    const KernelCase narrow_kc = kernel_for(name, narrow, seed);
    const KernelCase kc = kernel_for(name, full, seed);
    EqualAreaEntry e;
    e.kernel = name;
    e.baseline_cycles = checked_run(kc, full).cycles;
    e.compact_cycles =
        checked_run(kc, compact_config(full, kEqualAreaCompactSize)).cycles;
    e.narrow_cycles = checked_run(narrow_kc, narrow).cycles;
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(),
            [](const EqualAreaEntry& a, const EqualAreaEntry& b) {
              return a.kernel < b.kernel;
            });
  return out;
}

void write_equal_area(std::ostream& out,
                      const std::vector<EqualAreaEntry>& rows) {
  out << "# cycles normalized to a Full VRF at vlen 256\n";
  out << "kernel,full256_cycles,compact8_256_cycles,full64_cycles,"
         "compact8_256_normalized,full64_normalized,compact_speedup\n";
  for (const EqualAreaEntry& e : rows) {
    out << e.kernel << ',' << e.baseline_cycles << ',' << e.compact_cycles
        << ',' << e.narrow_cycles << ',' << fixed(e.compact_normalized(), 6)
        << ',' << fixed(e.narrow_normalized(), 6) << ','
        << fixed(e.speedup(), 6) << "\n";
  }
}

}  // namespace regdisp
