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

#include <bit>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>

#include "regdisp/config.h"
#include "regdisp/error.h"
#include "regdisp/kernels.h"
#include "regdisp/pipeline.h"
#include "regdisp/vasm.h"

#ifndef REGDISP_SOURCE_DIR
#error "REGDISP_SOURCE_DIR must point at the repository root"
#endif

namespace regdisp {
namespace {

ValidatedConfig full(int vlen = 256) {
  MachineConfig c;
  c.vlen_bits = vlen;
  c.lanes = vlen / 32;
  return validate(c);
}

ValidatedConfig compact(int n) {
  MachineConfig c;
  c.vrf_model = VrfKind::kCompact;
  c.cvrf_size = n;
  return validate(c);
}

template <typename T>
std::vector<T> as(const std::vector<std::uint8_t>& bytes) {
  std::vector<T> out(bytes.size() / 4);
  std::memcpy(out.data(), bytes.data(), out.size() * 4);
  return out;
}

template <typename T>
void set_words(DataSegment& seg, const std::vector<T>& values) {
  ASSERT_EQ(seg.bytes.size(), values.size() * 4);
  std::memcpy(seg.bytes.data(), values.data(), seg.bytes.size());
}

template <typename T>
std::vector<T> simulate(const KernelCase& kc,
                        const ValidatedConfig& config = compact(4)) {
  const RunResult r = run(parse(kc.source), config, kc.inputs);
  return as<T>({r.memory.begin() + static_cast<std::ptrdiff_t>(kc.output_addr),
                r.memory.begin() +
                    static_cast<std::ptrdiff_t>(kc.output_addr + kc.output_bytes)});
}

KernelError::Kind kernel_error(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const KernelError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no KernelError";
  return KernelError::Kind::kUnknownKernel;
}

TEST(SplitMix64, ReferenceSequence) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafull);
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  SplitMix64 u(7);
  for (int i = 0; i < 1000; ++i) {
    const auto v = u.uniform(-3, 3);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 3);
    const float f = u.unit_float();
    EXPECT_GE(f, 0.0f);
    EXPECT_LT(f, 1.0f);
  }
}

TEST(Gemv, IdentityMatrixCopiesVector) {
  KernelCase kc = build_gemv(8, 8);
  std::vector<std::int32_t> a(64, 0);
  for (int i = 0; i < 8; ++i) a[i * 8 + i] = 1;
  set_words(kc.input("A"), a);
  const auto x = as<std::int32_t>(kc.input("x").bytes);
  EXPECT_EQ(simulate<std::int32_t>(kc), x);
}

TEST(Gemv, RowSums) {
  KernelCase kc = build_gemv(8, 16);
  std::vector<std::int32_t> a(8 * 16);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 16; ++j) a[i * 16 + j] = i;
  }
  set_words(kc.input("A"), a);
  set_words(kc.input("x"), std::vector<std::int32_t>(16, 2));
  std::vector<std::int32_t> want;
  for (int i = 0; i < 8; ++i) want.push_back(32 * i);
  EXPECT_EQ(simulate<std::int32_t>(kc), want);
}

TEST(Dropout, KeepAllScalesEveryElement) {
  KernelCase kc = build_dropout(24, 3);
  set_words(kc.input("rnd"), std::vector<std::int32_t>(24, 0));
  auto want = as<std::int32_t>(kc.input("in").bytes);
  for (auto& w : want) w *= 3;
  EXPECT_EQ(simulate<std::int32_t>(kc), want);
}

TEST(Dropout, DropAllLeavesOutputUntouched) {
  KernelCase kc = build_dropout(24, 3);
  set_words(kc.input("rnd"), std::vector<std::int32_t>(24, 65535));
  EXPECT_EQ(simulate<std::int32_t>(kc), as<std::int32_t>(kc.input("out").bytes));
}

TEST(Jacobi2d, UniformFieldIsAFixedPoint) {
  KernelCase kc = build_jacobi2d(10, 3);
  set_words(kc.input("A"), std::vector<float>(100, 1.0f));
  set_words(kc.input("B"), std::vector<float>(100, 1.0f));
  EXPECT_EQ(simulate<float>(kc), std::vector<float>(100, 1.0f));
}

TEST(Jacobi2d, ZeroStepsReturnsInput) {
  const KernelCase kc = build_jacobi2d(9, 0);
  EXPECT_EQ(simulate<float>(kc), as<float>(kc.input("A").bytes));
}

TEST(Jacobi2d, HotCellSpreadsToNeighbours) {
  KernelCase kc = build_jacobi2d(9, 1);
  std::vector<float> grid(81, 0.0f);
  grid[4 * 9 + 4] = 1.0f;
  set_words(kc.input("A"), grid);
  set_words(kc.input("B"), grid);
  const auto out = simulate<float>(kc);
  const float fifth = std::bit_cast<float>(0x3E4CCCCDu);
  std::vector<float> want(81, 0.0f);
  for (int idx : {4 * 9 + 4, 3 * 9 + 4, 5 * 9 + 4, 4 * 9 + 3, 4 * 9 + 5}) {
    want[idx] = fifth;
  }
  EXPECT_EQ(out, want);
}

TEST(MatmulTiled, IdentityRightOperand) {
  KernelCase kc = build_matmul_tiled(8, 16, 16);
  std::vector<std::int32_t> b(16 * 16, 0);
  for (int i = 0; i < 16; ++i) b[i * 16 + i] = 1;
  set_words(kc.input("B"), b);
  EXPECT_EQ(simulate<std::int32_t>(kc), as<std::int32_t>(kc.input("A").bytes));
}

TEST(Conv2d, DeltaFilterCropsTheInput) {
  for (int f : {1, 3, 5, 7}) {
    KernelCase kc = build_conv2d(12, 16, f);
    std::vector<std::int32_t> filter(static_cast<std::size_t>(f) * f, 0);
    filter[(f / 2) * f + f / 2] = 1;
    set_words(kc.input("filter"), filter);
    const auto in = as<std::int32_t>(kc.input("in").bytes);
    const int orows = 12 - f + 1;
    const int ocols = 16 - f + 1;
    std::vector<std::int32_t> want;
    for (int r = 0; r < orows; ++r) {
      for (int c = 0; c < ocols; ++c) {
        want.push_back(in[(r + f / 2) * 16 + c + f / 2]);
      }
    }
    EXPECT_EQ(simulate<std::int32_t>(kc), want) << "fsize " << f;
  }
}

TEST(PhaseRotation, SinglePassByHand) {
  KernelCase kc = build_phase_rotation(8, 1);
  set_words(kc.input("x"), std::vector<std::int32_t>{1, 2, 3, 4, -1, -2, 0, 5});
  set_words(kc.input("y"), std::vector<std::int32_t>(8, 10));
  const auto out = simulate<std::int32_t>(kc);
  ASSERT_EQ(out.size(), 11u * 8u);
  // One iteration: c = a + b.
  for (int p = 0; p < 11; ++p) {
    EXPECT_EQ(out[p * 8 + 0], 11);
    EXPECT_EQ(out[p * 8 + 4], 9);
  }
}

TEST(Kernels, BadDimensionsAreRejected) {
  using K = KernelError::Kind;
  EXPECT_EQ(kernel_error([] { build_gemv(12, 8); }), K::kBadDims);
  EXPECT_EQ(kernel_error([] { build_gemv(8, 12); }), K::kBadDims);
  EXPECT_EQ(kernel_error([] { build_gemv(0, 8); }), K::kBadDims);
  EXPECT_EQ(kernel_error([] { build_dropout(10, 2); }), K::kBadDims);
  EXPECT_EQ(kernel_error([] { build_jacobi2d(2, 1); }), K::kBadDims);
  EXPECT_EQ(kernel_error([] { build_jacobi2d(8, -1); }), K::kBadDims);
  EXPECT_EQ(kernel_error([] { build_matmul_tiled(8, 12, 8); }), K::kBadDims);
  EXPECT_EQ(kernel_error([] { build_conv2d(8, 8, 4); }), K::kBadDims);
  EXPECT_EQ(kernel_error([] { build_conv2d(4, 4, 5); }), K::kBadDims);
  EXPECT_EQ(kernel_error([] { build_phase_rotation(8, 0); }), K::kBadDims);
  EXPECT_EQ(kernel_error([] { build_kernel("fft"); }), K::kUnknownKernel);
}

TEST(Kernels, GoldenMatchesSimulation) {
  for (const std::string& name : kernel_names()) {
    for (int vlen : {256, 128}) {
      const KernelCase kc = build_kernel(name, BuildOptions{3, vlen});
      const RunResult r = run(parse(kc.source), full(vlen), kc.inputs);
      EXPECT_EQ(compare_output(kc, r.memory), std::nullopt)
          << name << " vlen " << vlen;
    }
  }
}

TEST(Kernels, CompareOutputReportsMismatch) {
  const KernelCase kc = build_kernel("dropout");
  std::vector<std::uint8_t> image(kc.data_end(), 0);
  EXPECT_TRUE(compare_output(kc, image).has_value());
}

TEST(Kernels, SeedChangesInputsDeterministically) {
  for (const std::string& name : kernel_names()) {
    const KernelCase a = build_kernel(name, BuildOptions{1, 256});
    const KernelCase b = build_kernel(name, BuildOptions{1, 256});
    const KernelCase c = build_kernel(name, BuildOptions{2, 256});
    EXPECT_EQ(a.inputs, b.inputs) << name;
    EXPECT_NE(a.inputs, c.inputs) << name;
    EXPECT_EQ(a.source, c.source) << name;
  }
}

TEST(Kernels, InputsStayBelowReservedRegion) {
  for (const std::string& name : kernel_names()) {
    const KernelCase kc = build_kernel(name);
    EXPECT_LE(kc.data_end(), kDefaultSpillBase) << name;
    EXPECT_GE(kc.inputs.front().addr, kDataBase) << name;
  }
}

TEST(Kernels, CheckedInSourcesMatchGenerators) {
  for (const std::string& name : kernel_names()) {
    const std::string path =
        std::string(REGDISP_SOURCE_DIR) + "/kernels/" + name + ".s";
    std::ifstream in(path);
    ASSERT_TRUE(in) << path;
    std::stringstream text;
    text << in.rdbuf();
    std::string body = text.str();
    // Leading license block ends at the first blank line.
    body.erase(0, body.find("\n\n") + 2);
    EXPECT_EQ(body, build_kernel(name).source) << path;
    EXPECT_NO_THROW(parse(text.str())) << path;
  }
}

}  // namespace
}  // namespace regdisp
