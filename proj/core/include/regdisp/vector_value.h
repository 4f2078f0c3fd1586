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

#ifndef REGDISP_VECTOR_VALUE_H_
#define REGDISP_VECTOR_VALUE_H_

#include <array>
#include <cassert>
#include <cstdint>
#include <span>

#include "regdisp/config.h"

namespace regdisp {

// Selected element width in bits.
enum class Sew : int { k8 = 8, k16 = 16, k32 = 32 };

inline int sew_bits(Sew sew) { return static_cast<int>(sew); }

// One vector register's worth of bits, stored little-endian. Elements are
// views over the same bytes; a mask register uses bit i of the value for
// element i.
class VectorValue {
 public:
  VectorValue() = default;
  explicit VectorValue(int vlen_bits);

  int vlen_bits() const { return vlen_bits_; }
  int size_bytes() const { return vlen_bits_ / 8; }
  int element_count(Sew sew) const { return vlen_bits_ / sew_bits(sew); }

  // Raw element bits, zero-extended.
  std::uint32_t get(Sew sew, int index) const;
  // Element sign-extended from SEW bits.
  std::int32_t get_signed(Sew sew, int index) const;
  // Writes the low SEW bits of `value`.
  void set(Sew sew, int index, std::uint32_t value);

  float get_f32(int index) const;
  void set_f32(int index, float value);

  bool mask_bit(int index) const;
  void set_mask_bit(int index, bool value);

  std::span<std::uint8_t> bytes() { return {data_.data(), size_t(size_bytes())}; }
  std::span<const std::uint8_t> bytes() const {
    return {data_.data(), size_t(size_bytes())};
  }

  bool operator==(const VectorValue& other) const;

 private:
  int vlen_bits_ = 0;
  std::array<std::uint8_t, kMaxVlenBits / 8> data_{};
};

}  // namespace regdisp

#endif  // REGDISP_VECTOR_VALUE_H_
