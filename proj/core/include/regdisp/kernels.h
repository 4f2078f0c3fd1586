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

#ifndef REGDISP_KERNELS_H_
#define REGDISP_KERNELS_H_

// Benchmark kernels. Each builder emits strip-mined mini-assembly that runs
// at any legal vector length, seeded input data, and a scalar reference that
// computes the expected output region from those inputs.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "regdisp/config.h"
#include "regdisp/vasm.h"

namespace regdisp {

// SplitMix64: state += 0x9e3779b97f4a7c15, then two xor-shift-multiply
// rounds. Identical sequences on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // Uniform in [lo, hi], inclusive.
  std::int32_t uniform(std::int32_t lo, std::int32_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(
        static_cast<std::int64_t>(hi) - lo + 1);
    return static_cast<std::int32_t>(lo + static_cast<std::int64_t>(next() % span));
  }
  // Uniform in [0, 1) with 24 bits of precision.
  float unit_float() {
    return static_cast<float>(next() >> 40) * (1.0f / 16777216.0f);
  }

 private:
  std::uint64_t state_;
};

inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr Addr kDataBase = 0x10000;

enum class ElementType { kInt32, kFloat32 };

struct BuildOptions {
  std::uint64_t seed = kDefaultSeed;
  // Dimensions are checked against this vector length.
  int vlen_bits = 256;
};

struct KernelCase {
  using Golden =
      std::function<std::vector<std::uint8_t>(std::span<const DataSegment>)>;

  std::string name;
  std::string source;
  std::vector<DataSegment> inputs;
  std::vector<std::string> input_names;  // parallel to `inputs`
  Addr output_addr = 0;
  std::size_t output_bytes = 0;
  ElementType output_type = ElementType::kInt32;
  Golden golden;
  std::vector<std::pair<std::string, int>> problem_size;
  int expected_active_registers = 0;

  DataSegment& input(std::string_view name);
  const DataSegment& input(std::string_view name) const;
  std::vector<std::uint8_t> expected_output() const { return golden(inputs); }
  // First address past every input and the output region.
  Addr data_end() const;
};

// Throws KernelError::kBadDims when a precondition fails.
KernelCase build_gemv(int m, int n, const BuildOptions& options = {});
KernelCase build_dropout(int len, int scale, const BuildOptions& options = {});
KernelCase build_jacobi2d(int size, int steps, const BuildOptions& options = {});
KernelCase build_matmul_tiled(int m, int k, int n,
                              const BuildOptions& options = {});
KernelCase build_conv2d(int rows, int cols, int fsize,
                        const BuildOptions& options = {});
// Eleven phases of three registers each, v1..v31, plus v0 as a mask in the
// last phase. `iterations` dependent ops per chunk keep each phase hot.
KernelCase build_phase_rotation(int len, int iterations,
                                const BuildOptions& options = {});

// Registry of the required suite at default sizes.
const std::vector<std::string>& kernel_names();
// Throws KernelError::kUnknownKernel.
KernelCase build_kernel(std::string_view name, const BuildOptions& options = {});

// Compares the output region of `memory` with the expected bytes: exact for
// integers, at most `max_ulps` per element for f32. Returns a description of
// the first mismatch, or nullopt.
std::optional<std::string> compare_output(const KernelCase& kernel,
                                          std::span<const std::uint8_t> memory,
                                          int max_ulps = 1);

}  // namespace regdisp

#endif  // REGDISP_KERNELS_H_
