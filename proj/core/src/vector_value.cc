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

#include "regdisp/vector_value.h"

#include <algorithm>
#include <bit>
#include <cstring>

namespace regdisp {

VectorValue::VectorValue(int vlen_bits) : vlen_bits_(vlen_bits) {
  assert(vlen_bits > 0 && vlen_bits % 32 == 0 && vlen_bits <= kMaxVlenBits);
}

std::uint32_t VectorValue::get(Sew sew, int index) const {
  assert(index >= 0 && index < element_count(sew));
  const int width = sew_bits(sew) / 8;
  std::uint32_t value = 0;
  for (int b = width - 1; b >= 0; --b) {
    value = (value << 8) | data_[index * width + b];
  }
  return value;
}

std::int32_t VectorValue::get_signed(Sew sew, int index) const {
  const std::uint32_t raw = get(sew, index);
  switch (sew) {
    case Sew::k8:
      return static_cast<std::int8_t>(raw);
    case Sew::k16:
      return static_cast<std::int16_t>(raw);
    case Sew::k32:
      break;
  }
  return static_cast<std::int32_t>(raw);
}

void VectorValue::set(Sew sew, int index, std::uint32_t value) {
  assert(index >= 0 && index < element_count(sew));
  const int width = sew_bits(sew) / 8;
  for (int b = 0; b < width; ++b) {
    data_[index * width + b] = static_cast<std::uint8_t>(value >> (8 * b));
  }
}

float VectorValue::get_f32(int index) const {
  return std::bit_cast<float>(get(Sew::k32, index));
}

void VectorValue::set_f32(int index, float value) {
  set(Sew::k32, index, std::bit_cast<std::uint32_t>(value));
}

bool VectorValue::mask_bit(int index) const {
  assert(index >= 0 && index < vlen_bits_);
  return (data_[index / 8] >> (index % 8)) & 1u;
}

void VectorValue::set_mask_bit(int index, bool value) {
  assert(index >= 0 && index < vlen_bits_);
  const auto bit = static_cast<std::uint8_t>(1u << (index % 8));
  if (value) {
    data_[index / 8] |= bit;
  } else {
    data_[index / 8] &= static_cast<std::uint8_t>(~bit);
  }
}

bool VectorValue::operator==(const VectorValue& other) const {
  return vlen_bits_ == other.vlen_bits_ &&
         std::equal(data_.begin(), data_.begin() + size_bytes(),
                    other.data_.begin());
}

}  // namespace regdisp
