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

#ifndef REGDISP_CONFIG_H_
#define REGDISP_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace regdisp {

using Addr = std::uint64_t;

enum class VrfKind { kFull, kCompact };
enum class Replacement { kFifo, kLru };
// kPaperFaithful resolves (and fills) the destination of every vector
// instruction; kSemantic fills it only when its old value is observable.
enum class DestFetch { kPaperFaithful, kSemantic };
enum class WritebackOnEvict { kAlways, kDirtyOnly };

inline constexpr int kNumArchVregs = 32;
inline constexpr int kMaxVlenBits = 1024;
inline constexpr Addr kDefaultSpillBase = 0x1F0000;
inline constexpr Addr kDefaultMemSize = 2 * 1024 * 1024;

// Every tunable of the simulated machine. Defaults describe a 256-bit,
// 8-lane vector unit with a full 32-entry register file, a 16 KB 2-way L1D
// with 32-byte lines and a 2 MB main memory.
struct MachineConfig {
  int vlen_bits = 256;
  int lanes = 8;
  int num_arch_vregs = kNumArchVregs;
  VrfKind vrf_model = VrfKind::kFull;
  // Physical register count of the compact VRF; ignored for kFull.
  int cvrf_size = 8;
  Replacement replacement = Replacement::kFifo;
  int l1_size_bytes = 16384;
  int l1_ways = 2;
  int line_bytes = 32;
  int l1_hit_cycles = 1;
  int mem_latency_cycles = 5;
  Addr mem_size_bytes = kDefaultMemSize;
  Addr spill_base_addr = kDefaultSpillBase;
  DestFetch dest_fetch = DestFetch::kPaperFaithful;
  WritebackOnEvict writeback_on_evict = WritebackOnEvict::kAlways;

  int vlen_bytes() const { return vlen_bits / 8; }
  // Byte size of the reserved region backing v1..v31.
  Addr spill_region_bytes() const {
    return static_cast<Addr>(num_arch_vregs - 1) * vlen_bytes();
  }

  bool operator==(const MachineConfig&) const = default;
};

// A MachineConfig that has passed validate(). Only validate() creates one,
// so holders may rely on every invariant.
class ValidatedConfig {
 public:
  const MachineConfig& get() const { return config_; }
  const MachineConfig* operator->() const { return &config_; }

  bool operator==(const ValidatedConfig&) const = default;

 private:
  friend ValidatedConfig validate(const MachineConfig& config);
  explicit ValidatedConfig(const MachineConfig& config) : config_(config) {}

  MachineConfig config_;
};

// Checks every invariant and throws InvalidConfig listing all violations.
ValidatedConfig validate(const MachineConfig& config);
inline ValidatedConfig validate(const ValidatedConfig& config) {
  return config;
}

// Flat key=value text, one pair per line, '#' starts a comment. Keys are
// the MachineConfig field names; `vrf_model` takes full|compact and the
// compact size is given by `cvrf_size`. Unknown keys and malformed values
// throw InvalidConfig. Keys absent from the text keep the values in `base`.
MachineConfig parse_config_text(std::string_view text,
                                const MachineConfig& base = {});
MachineConfig load_config_file(const std::filesystem::path& path,
                               const MachineConfig& base = {});
std::string to_config_text(const MachineConfig& config);

std::string_view to_string(VrfKind kind);
std::string_view to_string(Replacement policy);
std::string_view to_string(DestFetch policy);
std::string_view to_string(WritebackOnEvict policy);

}  // namespace regdisp

#endif  // REGDISP_CONFIG_H_
