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

#include "regdisp/kernels.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <sstream>

#include "regdisp/error.h"

namespace regdisp {

namespace {

constexpr Addr kSegmentAlign = 64;

class Layout {
 public:
  Addr take(std::size_t bytes) {
    const Addr at = next_;
    next_ = (at + bytes + kSegmentAlign - 1) / kSegmentAlign * kSegmentAlign;
    return at;
  }

 private:
  Addr next_ = kDataBase;
};

// Line-oriented source builder.
class Source {
 public:
  template <typename... Args>
  void op(const Args&... parts) {
    out_ << "    ";
    (out_ << ... << parts);
    out_ << "\n";
  }
  void label(const std::string& name) { out_ << name << ":\n"; }
  void comment(const std::string& text) { out_ << "# " << text << "\n"; }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string v(int reg) { return "v" + std::to_string(reg); }
std::string x(int reg) { return "x" + std::to_string(reg); }

std::vector<std::uint8_t> to_bytes(std::span<const std::int32_t> words) {
  std::vector<std::uint8_t> out(words.size() * 4);
  std::memcpy(out.data(), words.data(), out.size());
  return out;
}

std::vector<std::uint8_t> to_bytes(std::span<const float> words) {
  std::vector<std::uint8_t> out(words.size() * 4);
  std::memcpy(out.data(), words.data(), out.size());
  return out;
}

// Reads words from the union of the input segments; uncovered bytes are 0,
// matching the zero-initialized simulated memory.
template <typename T>
std::vector<T> read_words(std::span<const DataSegment> segments, Addr addr,
                          std::size_t count) {
  std::vector<std::uint8_t> bytes(count * sizeof(T), 0);
  const Addr end = addr + bytes.size();
  for (const DataSegment& seg : segments) {
    const Addr lo = std::max(addr, seg.addr);
    const Addr hi = std::min(end, seg.end());
    if (lo >= hi) continue;
    std::memcpy(bytes.data() + (lo - addr), seg.bytes.data() + (lo - seg.addr),
                hi - lo);
  }
  std::vector<T> out(count);
  std::memcpy(out.data(), bytes.data(), bytes.size());
  return out;
}

std::vector<std::int32_t> random_ints(SplitMix64& rng, std::size_t count,
                                      std::int32_t lo, std::int32_t hi) {
  std::vector<std::int32_t> out(count);
  for (auto& w : out) w = rng.uniform(lo, hi);
  return out;
}

void require(bool ok, const std::string& kernel, const std::string& why) {
  if (!ok) throw KernelError(KernelError::Kind::kBadDims, kernel + ": " + why);
}

int elements_per_vector(const BuildOptions& options) {
  return options.vlen_bits / 32;
}

std::uint32_t u32(std::int32_t w) { return static_cast<std::uint32_t>(w); }

std::string hex(Addr a) {
  std::ostringstream s;
  s << "0x" << std::hex << a;
  return s.str();
}

}  // namespace

DataSegment& KernelCase::input(std::string_view wanted) {
  for (std::size_t i = 0; i < input_names.size(); ++i) {
    if (input_names[i] == wanted) return inputs[i];
  }
  throw KernelError(KernelError::Kind::kUnknownKernel,
                    name + " has no input named '" + std::string(wanted) + "'");
}

const DataSegment& KernelCase::input(std::string_view wanted) const {
  return const_cast<KernelCase*>(this)->input(wanted);
}

Addr KernelCase::data_end() const {
  Addr end = output_addr + output_bytes;
  for (const DataSegment& seg : inputs) end = std::max(end, seg.end());
  return end;
}

// ------------------------------------------------------------------ gemv

KernelCase build_gemv(int m, int n, const BuildOptions& options) {
  const int epv = elements_per_vector(options);
  require(m > 0 && n > 0, "gemv", "dimensions must be positive");
  require(m % epv == 0 && n % epv == 0, "gemv",
          "m and n must be multiples of " + std::to_string(epv));
  require(m % 4 == 0, "gemv", "m must be a multiple of 4");

  SplitMix64 rng(options.seed);
  const auto a = random_ints(rng, static_cast<std::size_t>(m) * n, -128, 127);
  const auto xv = random_ints(rng, n, -128, 127);

  Layout layout;
  const Addr a_addr = layout.take(a.size() * 4);
  const Addr x_addr = layout.take(xv.size() * 4);
  const Addr y_addr = layout.take(static_cast<std::size_t>(m) * 4);

  Source s;
  s.comment("gemv: y[" + std::to_string(m) + "] = A[" + std::to_string(m) +
            "x" + std::to_string(n) + "] * x, int32, four rows per pass");
  s.op("li x10, ", hex(a_addr));
  s.op("li x12, ", hex(y_addr));
  s.op("li x22, ", n * 4);
  s.op("li x23, ", n * 16);
  s.op("li x5, ", m / 4);
  s.op("li x9, 1");
  s.op("vsetvli x0, x0, e32");
  s.op("vmv.v.x v8, x0");
  s.label("rows");
  s.op("vsetvli x0, x0, e32");
  for (int r = 4; r < 8; ++r) s.op("vmv.v.x ", v(r), ", x0");
  s.op("li x11, ", hex(x_addr));
  s.op("addi x13, x10, 0");
  s.op("add x14, x13, x22");
  s.op("add x15, x14, x22");
  s.op("add x16, x15, x22");
  s.op("li x6, ", n);
  s.label("cols");
  s.op("vsetvli x7, x6, e32");
  s.op("slli x8, x7, 2");
  s.op("vle32.v v1, (x11)");
  for (int r = 0; r < 4; ++r) {
    s.op("vle32.v v2, (", x(13 + r), ")");
    s.op("vmacc.vv ", v(4 + r), ", v1, v2");
  }
  s.op("add x11, x11, x8");
  for (int r = 0; r < 4; ++r) s.op("add ", x(13 + r), ", ", x(13 + r), ", x8");
  s.op("sub x6, x6, x7");
  s.op("bnez x6, cols");
  for (int pair = 0; pair < 2; ++pair) {
    s.op("vsetvli x0, x0, e32");
    s.op("vredsum.vs v2, ", v(4 + 2 * pair), ", v8");
    s.op("vredsum.vs v3, ", v(5 + 2 * pair), ", v8");
    s.op("vsetvli x0, x9, e32");
    s.op("vse32.v v2, (x12)");
    s.op("addi x12, x12, 4");
    s.op("vse32.v v3, (x12)");
    s.op("addi x12, x12, 4");
  }
  s.op("add x10, x10, x23");
  s.op("addi x5, x5, -1");
  s.op("bnez x5, rows");
  s.op("halt");

  KernelCase kc;
  kc.name = "gemv";
  kc.source = s.str();
  kc.inputs = {{a_addr, to_bytes(a)}, {x_addr, to_bytes(xv)}};
  kc.input_names = {"A", "x"};
  kc.output_addr = y_addr;
  kc.output_bytes = static_cast<std::size_t>(m) * 4;
  kc.golden = [=](std::span<const DataSegment> in) {
    const auto am = read_words<std::int32_t>(in, a_addr,
                                             static_cast<std::size_t>(m) * n);
    const auto xx = read_words<std::int32_t>(in, x_addr, n);
    std::vector<std::int32_t> y(m);
    for (int i = 0; i < m; ++i) {
      std::uint32_t acc = 0;
      for (int j = 0; j < n; ++j) {
        acc += u32(am[static_cast<std::size_t>(i) * n + j]) * u32(xx[j]);
      }
      y[i] = static_cast<std::int32_t>(acc);
    }
    return to_bytes(y);
  };
  kc.problem_size = {{"m", m}, {"n", n}};
  kc.expected_active_registers = 9;
  return kc;
}

// --------------------------------------------------------------- dropout

namespace {
constexpr std::int32_t kDropoutRange = 1 << 16;
constexpr std::int32_t kDropoutKeepBelow = kDropoutRange / 2;
}  // namespace

KernelCase build_dropout(int len, int scale, const BuildOptions& options) {
  const int epv = elements_per_vector(options);
  require(len > 0 && len % epv == 0, "dropout",
          "len must be a positive multiple of " + std::to_string(epv));

  SplitMix64 rng(options.seed);
  const auto rnd = random_ints(rng, len, 0, kDropoutRange - 1);
  const auto in = random_ints(rng, len, -1000, 1000);
  const auto prior = random_ints(rng, len, -1000, 1000);

  Layout layout;
  const Addr rnd_addr = layout.take(static_cast<std::size_t>(len) * 4);
  const Addr in_addr = layout.take(static_cast<std::size_t>(len) * 4);
  const Addr out_addr = layout.take(static_cast<std::size_t>(len) * 4);

  Source s;
  s.comment("dropout: out[i] = rnd[i] < keep ? in[i] * scale : out[i], int32");
  s.op("li x10, ", hex(rnd_addr));
  s.op("li x11, ", hex(in_addr));
  s.op("li x12, ", hex(out_addr));
  s.op("li x5, ", len);
  s.op("li x6, ", kDropoutKeepBelow);
  s.op("li x7, ", scale);
  s.op("vsetvli x0, x0, e32");
  s.op("vmv.v.x v3, x7");
  s.label("loop");
  s.op("vsetvli x8, x5, e32");
  s.op("slli x9, x8, 2");
  s.op("vle32.v v1, (x10)");
  s.op("vmslt.vx v0, v1, x6");
  s.op("vle32.v v1, (x11)");
  s.op("vmul.vv v2, v1, v3, v0.t");
  s.op("vse32.v v2, (x12), v0.t");
  s.op("add x10, x10, x9");
  s.op("add x11, x11, x9");
  s.op("add x12, x12, x9");
  s.op("sub x5, x5, x8");
  s.op("bnez x5, loop");
  s.op("halt");

  KernelCase kc;
  kc.name = "dropout";
  kc.source = s.str();
  kc.inputs = {{rnd_addr, to_bytes(rnd)},
               {in_addr, to_bytes(in)},
               {out_addr, to_bytes(prior)}};
  kc.input_names = {"rnd", "in", "out"};
  kc.output_addr = out_addr;
  kc.output_bytes = static_cast<std::size_t>(len) * 4;
  kc.golden = [=](std::span<const DataSegment> segs) {
    const auto r = read_words<std::int32_t>(segs, rnd_addr, len);
    const auto i = read_words<std::int32_t>(segs, in_addr, len);
    auto o = read_words<std::int32_t>(segs, out_addr, len);
    for (int e = 0; e < len; ++e) {
      if (r[e] < kDropoutKeepBelow) {
        o[e] = static_cast<std::int32_t>(u32(i[e]) * u32(scale));
      }
    }
    return to_bytes(o);
  };
  kc.problem_size = {{"len", len}, {"scale", scale}};
  kc.expected_active_registers = 3;
  return kc;
}

// -------------------------------------------------------------- jacobi2d

namespace {
constexpr std::uint32_t kFifthBits = 0x3E4CCCCD;  // 0.2f
}  // namespace

KernelCase build_jacobi2d(int size, int steps, const BuildOptions& options) {
  require(size >= 3, "jacobi2d", "size must be at least 3");
  require(steps >= 0, "jacobi2d", "steps must be non-negative");

  SplitMix64 rng(options.seed);
  const std::size_t cells = static_cast<std::size_t>(size) * size;
  std::vector<float> grid(cells);
  for (auto& c : grid) c = rng.unit_float();

  Layout layout;
  const Addr a_addr = layout.take(cells * 4);
  const Addr b_addr = layout.take(cells * 4);
  const int row_bytes = size * 4;
  const int interior = size - 2;

  Source s;
  s.comment("jacobi2d: " + std::to_string(size) + "x" + std::to_string(size) +
            " f32, " + std::to_string(steps) +
            " steps, out = 0.2 * (c + n + s + w + e)");
  s.op("li x25, ", hex(a_addr));
  s.op("li x26, ", hex(b_addr));
  s.op("li x20, ", row_bytes);
  s.op("li x24, ", steps);
  s.op("li x9, ", hex(kFifthBits));
  s.op("vsetvli x0, x0, e32");
  s.op("vmv.v.x v7, x9");
  s.op("bge x0, x24, done");
  s.label("step");
  s.op("sub x21, x26, x25");
  s.op("addi x18, x25, ", row_bytes + 4);
  s.op("li x19, ", interior);
  s.label("row");
  s.op("addi x12, x18, 0");
  s.op("li x5, ", interior);
  s.label("col");
  s.op("vsetvli x8, x5, e32");
  s.op("slli x9, x8, 2");
  s.op("sub x15, x12, x20");
  s.op("add x16, x12, x20");
  s.op("addi x13, x12, -4");
  s.op("addi x14, x12, 4");
  s.op("add x17, x12, x21");
  s.op("vle32.v v1, (x12)");
  s.op("vle32.v v2, (x15)");
  s.op("vle32.v v3, (x16)");
  s.op("vle32.v v4, (x13)");
  s.op("vle32.v v5, (x14)");
  s.op("vfadd.vv v6, v1, v2");
  s.op("vfadd.vv v6, v6, v3");
  s.op("vfadd.vv v6, v6, v4");
  s.op("vfadd.vv v6, v6, v5");
  s.op("vfmul.vv v6, v6, v7");
  s.op("vse32.v v6, (x17)");
  s.op("add x12, x12, x9");
  s.op("sub x5, x5, x8");
  s.op("bnez x5, col");
  s.op("add x18, x18, x20");
  s.op("addi x19, x19, -1");
  s.op("bnez x19, row");
  s.op("addi x27, x25, 0");
  s.op("addi x25, x26, 0");
  s.op("addi x26, x27, 0");
  s.op("addi x24, x24, -1");
  s.op("bnez x24, step");
  s.label("done");
  s.op("halt");

  KernelCase kc;
  kc.name = "jacobi2d";
  kc.source = s.str();
  kc.inputs = {{a_addr, to_bytes(grid)}, {b_addr, to_bytes(grid)}};
  kc.input_names = {"A", "B"};
  kc.output_addr = steps % 2 == 0 ? a_addr : b_addr;
  kc.output_bytes = cells * 4;
  kc.output_type = ElementType::kFloat32;
  kc.golden = [=](std::span<const DataSegment> segs) {
    std::vector<float> src = read_words<float>(segs, a_addr, cells);
    std::vector<float> dst = read_words<float>(segs, b_addr, cells);
    const float fifth = std::bit_cast<float>(kFifthBits);
    for (int t = 0; t < steps; ++t) {
      for (int i = 1; i < size - 1; ++i) {
        for (int j = 1; j < size - 1; ++j) {
          auto at = [&](int r, int c) {
            return src[static_cast<std::size_t>(r) * size + c];
          };
          float sum = at(i, j) + at(i - 1, j);
          sum = sum + at(i + 1, j);
          sum = sum + at(i, j - 1);
          sum = sum + at(i, j + 1);
          dst[static_cast<std::size_t>(i) * size + j] = sum * fifth;
        }
      }
      std::swap(src, dst);
    }
    return to_bytes(src);
  };
  kc.problem_size = {{"size", size}, {"steps", steps}};
  kc.expected_active_registers = 7;
  return kc;
}

// ---------------------------------------------------------- matmul_tiled

KernelCase build_matmul_tiled(int m, int k, int n, const BuildOptions& options) {
  const int epv = elements_per_vector(options);
  require(m > 0 && k > 0 && n > 0, "matmul_tiled", "dimensions must be positive");
  require(m % epv == 0 && k % epv == 0 && n % epv == 0, "matmul_tiled",
          "m, k and n must be multiples of " + std::to_string(epv));
  require(m % 2 == 0, "matmul_tiled", "m must be even");

  SplitMix64 rng(options.seed);
  const auto a = random_ints(rng, static_cast<std::size_t>(m) * k, -64, 63);
  const auto b = random_ints(rng, static_cast<std::size_t>(k) * n, -64, 63);

  Layout layout;
  const Addr a_addr = layout.take(a.size() * 4);
  const Addr b_addr = layout.take(b.size() * 4);
  const Addr c_addr = layout.take(static_cast<std::size_t>(m) * n * 4);

  Source s;
  s.comment("matmul_tiled: C[" + std::to_string(m) + "x" + std::to_string(n) +
            "] = A[" + std::to_string(m) + "x" + std::to_string(k) + "] * B[" +
            std::to_string(k) + "x" + std::to_string(n) +
            "], int32, two output rows per pass");
  s.op("li x10, ", hex(a_addr));
  s.op("li x13, ", hex(c_addr));
  s.op("li x20, ", k * 4);
  s.op("li x21, ", n * 4);
  s.op("li x5, ", m / 2);
  s.label("rowpair");
  s.op("li x11, ", hex(b_addr));
  s.op("li x6, ", n);
  s.label("colchunk");
  s.op("vsetvli x7, x6, e32");
  s.op("vmv.v.x v1, x0");
  s.op("vmv.v.x v2, x0");
  s.op("addi x14, x10, 0");
  s.op("add x15, x10, x20");
  s.op("addi x16, x11, 0");
  s.op("li x17, ", k);
  s.label("kloop");
  s.op("vlse32.v v4, (x14), x0");
  s.op("vle32.v v3, (x16)");
  s.op("vmacc.vv v1, v4, v3");
  s.op("vlse32.v v4, (x15), x0");
  s.op("vmacc.vv v2, v4, v3");
  s.op("addi x14, x14, 4");
  s.op("addi x15, x15, 4");
  s.op("add x16, x16, x21");
  s.op("addi x17, x17, -1");
  s.op("bnez x17, kloop");
  s.op("vse32.v v1, (x13)");
  s.op("add x18, x13, x21");
  s.op("vse32.v v2, (x18)");
  s.op("slli x9, x7, 2");
  s.op("add x11, x11, x9");
  s.op("add x13, x13, x9");
  s.op("sub x6, x6, x7");
  s.op("bnez x6, colchunk");
  s.op("add x10, x10, x20");
  s.op("add x10, x10, x20");
  s.op("add x13, x13, x21");
  s.op("addi x5, x5, -1");
  s.op("bnez x5, rowpair");
  s.op("halt");

  KernelCase kc;
  kc.name = "matmul_tiled";
  kc.source = s.str();
  kc.inputs = {{a_addr, to_bytes(a)}, {b_addr, to_bytes(b)}};
  kc.input_names = {"A", "B"};
  kc.output_addr = c_addr;
  kc.output_bytes = static_cast<std::size_t>(m) * n * 4;
  kc.golden = [=](std::span<const DataSegment> segs) {
    const auto am = read_words<std::int32_t>(segs, a_addr,
                                             static_cast<std::size_t>(m) * k);
    const auto bm = read_words<std::int32_t>(segs, b_addr,
                                             static_cast<std::size_t>(k) * n);
    std::vector<std::int32_t> c(static_cast<std::size_t>(m) * n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        std::uint32_t acc = 0;
        for (int p = 0; p < k; ++p) {
          acc += u32(am[static_cast<std::size_t>(i) * k + p]) *
                 u32(bm[static_cast<std::size_t>(p) * n + j]);
        }
        c[static_cast<std::size_t>(i) * n + j] = static_cast<std::int32_t>(acc);
      }
    }
    return to_bytes(c);
  };
  kc.problem_size = {{"m", m}, {"k", k}, {"n", n}};
  kc.expected_active_registers = 4;
  return kc;
}

// ---------------------------------------------------------------- conv2d

KernelCase build_conv2d(int rows, int cols, int fsize,
                        const BuildOptions& options) {
  require(fsize >= 1 && fsize <= 7 && fsize % 2 == 1, "conv2d",
          "filter size must be 1, 3, 5 or 7");
  require(rows >= fsize && cols >= fsize, "conv2d",
          "input must be at least as large as the filter");
  (void)options.vlen_bits;

  SplitMix64 rng(options.seed);
  const auto in = random_ints(rng, static_cast<std::size_t>(rows) * cols,
                              -128, 127);
  const auto filt = random_ints(rng, static_cast<std::size_t>(fsize) * fsize,
                                -8, 8);
  const int orows = rows - fsize + 1;
  const int ocols = cols - fsize + 1;

  Layout layout;
  const Addr in_addr = layout.take(in.size() * 4);
  const Addr f_addr = layout.take(filt.size() * 4);
  const Addr out_addr =
      layout.take(static_cast<std::size_t>(orows) * ocols * 4);

  // Taps of one filter row split into two groups. Each group holds its
  // splatted taps, three rotating input registers and an accumulator.
  struct Group {
    int first_tap, taps, splat_base, input_base, acc;
  };
  std::vector<Group> groups = {{0, std::min(fsize, 4), 8, 1, 15}};
  if (fsize > 4) groups.push_back({4, fsize - 4, 12, 4, 16});

  Source s;
  s.comment("conv2d: " + std::to_string(rows) + "x" + std::to_string(cols) +
            " int32 input, " + std::to_string(fsize) + "x" +
            std::to_string(fsize) + " filter, valid output " +
            std::to_string(orows) + "x" + std::to_string(ocols));
  s.op("li x20, ", cols * 4);
  s.op("li x21, ", ocols * 4);
  s.op("li x28, ", hex(f_addr));
  s.op("li x29, ", hex(in_addr));
  s.op("li x24, ", fsize);
  s.label("frow");
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const Group& grp = groups[g];
    const std::string tag = "g" + std::to_string(g);
    s.op("vsetvli x0, x0, e32");
    for (int t = 0; t < grp.taps; ++t) {
      s.op("addi x30, x28, ", (grp.first_tap + t) * 4);
      s.op("vlse32.v ", v(grp.splat_base + t), ", (x30), x0");
    }
    s.op("li x19, ", orows);
    s.op("addi x18, x29, 0");
    s.op("li x17, ", hex(out_addr));
    s.label(tag + "_row");
    s.op("addi x12, x18, 0");
    s.op("addi x13, x17, 0");
    s.op("li x6, ", ocols);
    s.label(tag + "_col");
    s.op("vsetvli x7, x6, e32");
    s.op("vle32.v ", v(grp.acc), ", (x13)");
    for (int t = 0; t < grp.taps; ++t) {
      const int input = grp.input_base + t % 3;
      s.op("addi x14, x12, ", (grp.first_tap + t) * 4);
      s.op("vle32.v ", v(input), ", (x14)");
      s.op("vmacc.vv ", v(grp.acc), ", ", v(grp.splat_base + t), ", ",
           v(input));
    }
    s.op("vse32.v ", v(grp.acc), ", (x13)");
    s.op("slli x8, x7, 2");
    s.op("add x12, x12, x8");
    s.op("add x13, x13, x8");
    s.op("sub x6, x6, x7");
    s.op("bnez x6, ", tag, "_col");
    s.op("add x18, x18, x20");
    s.op("add x17, x17, x21");
    s.op("addi x19, x19, -1");
    s.op("bnez x19, ", tag, "_row");
  }
  s.op("addi x28, x28, ", fsize * 4);
  s.op("add x29, x29, x20");
  s.op("addi x24, x24, -1");
  s.op("bnez x24, frow");
  s.op("halt");

  KernelCase kc;
  kc.name = "conv2d";
  kc.source = s.str();
  kc.inputs = {{in_addr, to_bytes(in)}, {f_addr, to_bytes(filt)}};
  kc.input_names = {"in", "filter"};
  kc.output_addr = out_addr;
  kc.output_bytes = static_cast<std::size_t>(orows) * ocols * 4;
  kc.golden = [=](std::span<const DataSegment> segs) {
    const auto im = read_words<std::int32_t>(
        segs, in_addr, static_cast<std::size_t>(rows) * cols);
    const auto fm = read_words<std::int32_t>(
        segs, f_addr, static_cast<std::size_t>(fsize) * fsize);
    std::vector<std::int32_t> out(static_cast<std::size_t>(orows) * ocols);
    for (int r = 0; r < orows; ++r) {
      for (int c = 0; c < ocols; ++c) {
        std::uint32_t acc = 0;
        for (int a = 0; a < fsize; ++a) {
          for (int b = 0; b < fsize; ++b) {
            acc += u32(im[static_cast<std::size_t>(r + a) * cols + c + b]) *
                   u32(fm[static_cast<std::size_t>(a) * fsize + b]);
          }
        }
        out[static_cast<std::size_t>(r) * ocols + c] =
            static_cast<std::int32_t>(acc);
      }
    }
    return to_bytes(out);
  };
  kc.problem_size = {{"rows", rows}, {"cols", cols}, {"fsize", fsize}};
  kc.expected_active_registers = 15;
  return kc;
}

// -------------------------------------------------------- phase_rotation

namespace {
constexpr int kPhases = 11;
constexpr std::int32_t kPhaseMaskBelow = 0;
}  // namespace

KernelCase build_phase_rotation(int len, int iterations,
                                const BuildOptions& options) {
  require(len > 0, "phase_rotation", "len must be positive");
  require(iterations > 0, "phase_rotation", "iterations must be positive");

  SplitMix64 rng(options.seed);
  const auto xs = random_ints(rng, len, -100, 100);
  const auto ys = random_ints(rng, len, -100, 100);

  Layout layout;
  const Addr x_addr = layout.take(static_cast<std::size_t>(len) * 4);
  const Addr y_addr = layout.take(static_cast<std::size_t>(len) * 4);
  const Addr out_addr =
      layout.take(static_cast<std::size_t>(kPhases) * len * 4);

  Source s;
  s.comment("phase_rotation: " + std::to_string(kPhases) +
            " phases of three registers over v1..v31, c = a + b; a = c * b");
  s.op("li x10, ", hex(x_addr));
  s.op("li x11, ", hex(y_addr));
  s.op("li x12, ", hex(out_addr));
  s.op("li x20, ", len * 4);
  s.op("li x21, ", kPhaseMaskBelow);
  for (int p = 0; p < kPhases; ++p) {
    const bool masked = p == kPhases - 1;
    const int ra = masked ? 31 : 3 * p + 1;
    const int rb = masked ? 1 : 3 * p + 2;
    const int rc = masked ? 2 : 3 * p + 3;
    const std::string tag = "p" + std::to_string(p);
    s.op("addi x13, x10, 0");
    s.op("addi x14, x11, 0");
    s.op("addi x15, x12, 0");
    s.op("li x6, ", len);
    s.label(tag + "_chunk");
    s.op("vsetvli x7, x6, e32");
    s.op("vle32.v ", v(ra), ", (x13)");
    s.op("vle32.v ", v(rb), ", (x14)");
    if (masked) s.op("vmslt.vx v0, ", v(ra), ", x21");
    s.op("li x16, ", iterations);
    s.label(tag + "_iter");
    s.op("vadd.vv ", v(rc), ", ", v(ra), ", ", v(rb));
    s.op("vmul.vv ", v(ra), ", ", v(rc), ", ", v(rb), masked ? ", v0.t" : "");
    s.op("addi x16, x16, -1");
    s.op("bnez x16, ", tag, "_iter");
    s.op("vse32.v ", v(rc), ", (x15)");
    s.op("slli x8, x7, 2");
    s.op("add x13, x13, x8");
    s.op("add x14, x14, x8");
    s.op("add x15, x15, x8");
    s.op("sub x6, x6, x7");
    s.op("bnez x6, ", tag, "_chunk");
    s.op("add x12, x12, x20");
  }
  s.op("halt");

  KernelCase kc;
  kc.name = "phase_rotation";
  kc.source = s.str();
  kc.inputs = {{x_addr, to_bytes(xs)}, {y_addr, to_bytes(ys)}};
  kc.input_names = {"x", "y"};
  kc.output_addr = out_addr;
  kc.output_bytes = static_cast<std::size_t>(kPhases) * len * 4;
  kc.golden = [=](std::span<const DataSegment> segs) {
    const auto xa = read_words<std::int32_t>(segs, x_addr, len);
    const auto ya = read_words<std::int32_t>(segs, y_addr, len);
    std::vector<std::int32_t> out(static_cast<std::size_t>(kPhases) * len);
    for (int p = 0; p < kPhases; ++p) {
      for (int e = 0; e < len; ++e) {
        std::uint32_t a = u32(xa[e]);
        const std::uint32_t b = u32(ya[e]);
        const bool keep =
            p != kPhases - 1 || static_cast<std::int32_t>(a) < kPhaseMaskBelow;
        std::uint32_t c = 0;
        for (int it = 0; it < iterations; ++it) {
          c = a + b;
          if (keep) a = c * b;
        }
        out[static_cast<std::size_t>(p) * len + e] =
            static_cast<std::int32_t>(c);
      }
    }
    return to_bytes(out);
  };
  kc.problem_size = {{"len", len}, {"iterations", iterations}};
  kc.expected_active_registers = 31;
  return kc;
}

// -------------------------------------------------------------- registry

const std::vector<std::string>& kernel_names() {
  static const std::vector<std::string> names = {
      "conv2d", "dropout", "gemv", "jacobi2d", "matmul_tiled",
      "phase_rotation"};
  return names;
}

KernelCase build_kernel(std::string_view name, const BuildOptions& options) {
  if (name == "gemv") return build_gemv(64, 64, options);
  if (name == "dropout") return build_dropout(4096, 2, options);
  if (name == "jacobi2d") return build_jacobi2d(32, 4, options);
  if (name == "matmul_tiled") return build_matmul_tiled(16, 64, 32, options);
  if (name == "conv2d") return build_conv2d(32, 32, 7, options);
  if (name == "phase_rotation") return build_phase_rotation(64, 8, options);
  throw KernelError(KernelError::Kind::kUnknownKernel,
                    "unknown kernel '" + std::string(name) + "'");
}

std::optional<std::string> compare_output(const KernelCase& kernel,
                                          std::span<const std::uint8_t> memory,
                                          int max_ulps) {
  const std::vector<std::uint8_t> expected = kernel.expected_output();
  if (kernel.output_addr + expected.size() > memory.size()) {
    return "output region lies outside the memory image";
  }
  const std::uint8_t* actual = memory.data() + kernel.output_addr;
  for (std::size_t e = 0; e < expected.size() / 4; ++e) {
    std::uint32_t want, got;
    std::memcpy(&want, expected.data() + e * 4, 4);
    std::memcpy(&got, actual + e * 4, 4);
    if (want == got) continue;
    if (kernel.output_type == ElementType::kFloat32) {
      // Ordered integer view of IEEE floats: adjacent floats differ by one.
      auto ordered = [](std::uint32_t bits) -> std::int64_t {
        return (bits & 0x80000000u) ? -static_cast<std::int64_t>(bits & 0x7FFFFFFFu)
                                    : static_cast<std::int64_t>(bits);
      };
      const std::int64_t d = ordered(want) - ordered(got);
      if ((d < 0 ? -d : d) <= max_ulps) continue;
    }
    std::ostringstream msg;
    msg << kernel.name << ": element " << e << " at 0x" << std::hex
        << kernel.output_addr + e * 4 << " is 0x" << got << ", expected 0x"
        << want;
    return msg.str();
  }
  return std::nullopt;
}

}  // namespace regdisp
