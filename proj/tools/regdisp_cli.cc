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

// regdisp: experiment driver.
//
//   regdisp run --kernel gemv --vrf compact --cvrf-size 8
//   regdisp sweep --kernels all --sizes 3-16 --out sweep.csv --check
//   regdisp min-size --threshold 0.95
//   regdisp equal-area
//   regdisp analyze --kernel conv2d
//   regdisp emit-golden --kernel dropout --out dropout.golden
//   regdisp emit-kernel --kernel gemv --out kernels/gemv.s
//
// Exit status: 0 success, 1 usage error, 2 simulation error, 3 check failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "regdisp/config.h"
#include "regdisp/error.h"
#include "regdisp/experiments.h"
#include "regdisp/kernels.h"
#include "regdisp/memsys.h"
#include "regdisp/vasm.h"

namespace {

using namespace regdisp;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSimulation = 2;
constexpr int kExitCheck = 3;

struct UsageError : Error {
  using Error::Error;
};

struct Common {
  std::string config_path;
  std::string out_path;
  std::string trace_path;
  std::uint64_t seed = kDefaultSeed;
  bool check = false;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "key=value machine config file");
  cmd->add_option("--out", c.out_path, "output path (default: stdout)");
  cmd->add_option("--seed", c.seed, "input data seed");
  cmd->add_option("--trace", c.trace_path, "per-instruction trace path");
  cmd->add_flag("--check", c.check, "exit 3 when a result check fails");
  cmd->add_option("--set", c.overrides, "config override key=value")
      ->take_all();
}

MachineConfig load_config(const Common& c) {
  MachineConfig config;
  if (!c.config_path.empty()) config = load_config_file(c.config_path);
  std::string text;
  for (const std::string& kv : c.overrides) text += kv + "\n";
  return parse_config_text(text, config);
}

// Writes to --out when given, else stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw UsageError("cannot write '" + path + "'");
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<std::string> kernel_list(const std::string& spec) {
  if (spec == "all") return kernel_names();
  return split(spec, ',');
}

// "3-16" or "3,4,8".
std::vector<int> size_list(const std::string& spec) {
  std::vector<int> sizes;
  for (const std::string& part : split(spec, ',')) {
    const auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        sizes.push_back(std::stoi(part));
      } else {
        const int lo = std::stoi(part.substr(0, dash));
        const int hi = std::stoi(part.substr(dash + 1));
        for (int s = lo; s <= hi; ++s) sizes.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw UsageError("bad size list '" + spec + "'");
    }
  }
  for (int s : sizes) {
    if (s < 3 || s > kNumArchVregs) {
      throw UsageError("cvrf sizes must lie in [3, 32]");
    }
  }
  return sizes;
}

int report_failures(const std::vector<std::string>& failures, bool check) {
  for (const std::string& f : failures) std::cerr << "check failed: " << f << "\n";
  return check && !failures.empty() ? kExitCheck : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Register Dispersion simulator: compact vector register file "
               "experiments"};
  app.require_subcommand(1);

  Common common;

  std::string kernel = "gemv";
  std::string vrf;
  int cvrf_size = 0;
  int vlen = 0;
  auto* run_cmd = app.add_subcommand("run", "simulate one kernel");
  add_common(run_cmd, common);
  run_cmd->add_option("--kernel", kernel, "kernel name")->required();
  run_cmd->add_option("--vrf", vrf, "full | compact");
  run_cmd->add_option("--cvrf-size", cvrf_size, "compact VRF size");
  run_cmd->add_option("--vlen", vlen, "vector length in bits");

  std::string kernels_spec = "all";
  std::string sizes_spec = "3-16";
  auto* sweep_cmd = app.add_subcommand("sweep", "cVRF size sweep");
  add_common(sweep_cmd, common);
  sweep_cmd->add_option("--kernels", kernels_spec, "comma list or 'all'");
  sweep_cmd->add_option("--sizes", sizes_spec, "e.g. 3-16 or 3,4,8");

  double threshold = 0.95;
  auto* min_cmd =
      app.add_subcommand("min-size", "smallest cVRF size above a hit rate");
  add_common(min_cmd, common);
  min_cmd->add_option("--kernels", kernels_spec, "comma list or 'all'");
  min_cmd->add_option("--threshold", threshold, "hit rate in (0, 1)");

  std::string equal_kernels = "dropout,gemv,jacobi2d,matmul_tiled";
  auto* area_cmd = app.add_subcommand(
      "equal-area", "Compact(8) at 256 bits vs Full at 64 bits");
  add_common(area_cmd, common);
  area_cmd->add_option("--kernels", equal_kernels, "comma list or 'all'");

  std::string source_path;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "static vector register usage");
  add_common(analyze_cmd, common);
  analyze_cmd->add_option("--kernel", kernel, "kernel name");
  analyze_cmd->add_option("--file", source_path, "assembly file instead");

  auto* golden_cmd = app.add_subcommand(
      "emit-golden", "expected output region as a memory image");
  add_common(golden_cmd, common);
  golden_cmd->add_option("--kernel", kernel, "kernel name")->required();

  auto* emit_cmd =
      app.add_subcommand("emit-kernel", "generated kernel assembly");
  add_common(emit_cmd, common);
  emit_cmd->add_option("--kernel", kernel, "kernel name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    MachineConfig config = load_config(common);
    Output out(common.out_path);

    if (run_cmd->parsed()) {
      if (!vrf.empty()) {
        config = parse_config_text("vrf_model=" + vrf, config);
      }
      if (cvrf_size != 0) config.cvrf_size = cvrf_size;
      if (vlen != 0) {
        config.vlen_bits = vlen;
        config.lanes = vlen / 32;
      }
      validate(config);
      std::unique_ptr<std::ofstream> trace;
      if (!common.trace_path.empty()) {
        trace = std::make_unique<std::ofstream>(common.trace_path);
        if (!*trace) throw UsageError("cannot write '" + common.trace_path + "'");
      }
      SweepResult result;
      result.rows.push_back(run_single(kernel, config, common.seed, trace.get()));
      write_csv(out.get(), result);
      write_table(std::cerr, result);
      return report_failures(check_sweep(result), common.check);
    }

    if (sweep_cmd->parsed()) {
      const SweepResult result = sweep(kernel_list(kernels_spec),
                                       size_list(sizes_spec), config,
                                       common.seed);
      write_csv(out.get(), result);
      return report_failures(check_sweep(result), common.check);
    }

    if (min_cmd->parsed()) {
      const auto rows =
          min_size(kernel_list(kernels_spec), threshold, config, common.seed);
      write_min_size(out.get(), rows, threshold);
      std::vector<std::string> failures;
      for (const auto& r : rows) {
        if (!r.reached) failures.push_back(r.kernel + " never reached");
      }
      return report_failures(failures, common.check);
    }

    if (area_cmd->parsed()) {
      const auto rows = equal_area(kernel_list(equal_kernels), config,
                                   common.seed);
      write_equal_area(out.get(), rows);
      std::vector<std::string> failures;
      for (const auto& r : rows) {
        if (r.speedup() <= 1.0) {
          failures.push_back(r.kernel + ": Compact(8) is not faster than "
                                        "Full at 64 bits");
        }
      }
      return report_failures(failures, common.check);
    }

    if (analyze_cmd->parsed()) {
      std::string text;
      std::string label = kernel;
      if (!source_path.empty()) {
        std::ifstream in(source_path);
        if (!in) throw UsageError("cannot read '" + source_path + "'");
        text.assign(std::istreambuf_iterator<char>(in), {});
        label = source_path;
      } else {
        text = build_kernel(kernel, BuildOptions{common.seed, config.vlen_bits})
                   .source;
      }
      const RegisterUsageReport report = analyze_registers(parse(text));
      std::ostream& o = out.get();
      o << "program: " << label << "\n";
      o << "active_registers: " << report.active_registers << "\n";
      char pct[32];
      std::snprintf(pct, sizeof(pct), "%.1f", report.utilization_pct);
      o << "utilization_pct: " << pct << "\n";
      o << "v0_mask_references: " << report.v0_mask_references << "\n";
      o << "references:";
      for (const auto& [reg, count] : report.per_register_counts) {
        o << " v" << reg << "=" << count;
      }
      o << "\n";
      return kExitOk;
    }

    if (golden_cmd->parsed()) {
      const KernelCase kc =
          build_kernel(kernel, BuildOptions{common.seed, config.vlen_bits});
      std::vector<std::uint8_t> image(kc.data_end(), 0);
      const auto expected = kc.expected_output();
      std::copy(expected.begin(), expected.end(),
                image.begin() + static_cast<std::ptrdiff_t>(kc.output_addr));
      out.get() << "# " << kc.name << " expected output, seed " << common.seed
                << "\n"
                << dump_memory_image(image, kc.output_addr,
                                     kc.output_addr + kc.output_bytes);
      return kExitOk;
    }

    if (emit_cmd->parsed()) {
      out.get() << build_kernel(kernel, BuildOptions{common.seed,
                                                     config.vlen_bits})
                       .source;
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidConfig& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const KernelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return kExitSimulation;
  }
  return kExitUsage;
}
