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

#include "regdisp/memsys.h"

#include <algorithm>
#include <cstring>
#include <sstream>

#include "regdisp/error.h"

namespace regdisp {

namespace {

std::string hex_addr(Addr a) {
  std::ostringstream s;
  s << "0x" << std::hex << a;
  return s.str();
}

}  // namespace

L1Cache::L1Cache(int size_bytes, int ways, int line_bytes)
    : num_sets_(size_bytes / (ways * line_bytes)),
      ways_(ways),
      line_bytes_(line_bytes),
      sets_(static_cast<std::size_t>(num_sets_) * ways) {
  for (int s = 0; s < num_sets_; ++s) {
    for (int w = 0; w < ways_; ++w) {
      sets_[static_cast<std::size_t>(s) * ways_ + w].lru_rank = w;
    }
  }
}

L1Cache::Outcome L1Cache::touch(Addr line_addr, bool write) {
  const std::uint64_t line = line_addr / line_bytes_;
  const auto index = static_cast<std::size_t>(line % num_sets_);
  const std::uint64_t tag = line / num_sets_;
  Way* set = sets_.data() + index * ways_;

  auto promote = [&](Way& way) {
    for (int w = 0; w < ways_; ++w) {
      if (set[w].lru_rank < way.lru_rank) ++set[w].lru_rank;
    }
    way.lru_rank = 0;
  };

  for (int w = 0; w < ways_; ++w) {
    if (set[w].valid && set[w].tag == tag) {
      promote(set[w]);
      set[w].dirty |= write;
      return {true, false};
    }
  }
  // Victim: the least recently used way. Invalid ways always rank oldest
  // because they were never promoted.
  Way* victim = set;
  for (int w = 0; w < ways_; ++w) {
    if (!set[w].valid) {
      victim = &set[w];
      break;
    }
    if (set[w].lru_rank > victim->lru_rank) victim = &set[w];
  }
  const bool dirty_eviction = victim->valid && victim->dirty;
  victim->valid = true;
  victim->dirty = write;
  victim->tag = tag;
  promote(*victim);
  return {false, dirty_eviction};
}

bool L1Cache::check_invariants() const {
  for (int s = 0; s < num_sets_; ++s) {
    auto ways = set(s);
    std::vector<bool> seen(ways_, false);
    for (int w = 0; w < ways_; ++w) {
      const int r = ways[w].lru_rank;
      if (r < 0 || r >= ways_ || seen[r]) return false;
      seen[r] = true;
      for (int o = w + 1; o < ways_; ++o) {
        if (ways[w].valid && ways[o].valid && ways[w].tag == ways[o].tag) {
          return false;
        }
      }
    }
  }
  return true;
}

MemorySystem::MemorySystem(const ValidatedConfig& config)
    : config_(config),
      bytes_(config->mem_size_bytes, 0),
      l1_(config->l1_size_bytes, config->l1_ways, config->line_bytes) {}

void MemorySystem::check_range(Addr addr, std::size_t len) const {
  if (addr > bytes_.size() || len > bytes_.size() - addr) {
    throw MemoryError(MemoryError::Kind::kOutOfRange,
                      "access [" + hex_addr(addr) + ", +" +
                          std::to_string(len) + ") is outside memory");
  }
}

AccessResult MemorySystem::access(Addr addr, std::size_t len, bool write,
                                  std::span<const std::uint8_t> payload) {
  check_range(addr, len);
  const Addr line_bytes = config_->line_bytes;
  if (len == 0 || addr / line_bytes != (addr + len - 1) / line_bytes) {
    throw MemoryError(MemoryError::Kind::kUnalignedCrossLine,
                      "access [" + hex_addr(addr) + ", +" +
                          std::to_string(len) + ") crosses a cacheline");
  }
  const L1Cache::Outcome outcome =
      l1_.touch(addr - addr % line_bytes, write);
  AccessResult result;
  result.hit = outcome.hit;
  result.latency_cycles = config_->l1_hit_cycles;
  if (outcome.hit) {
    ++hits_;
  } else {
    ++misses_;
    result.latency_cycles += config_->mem_latency_cycles;
    if (outcome.dirty_eviction) {
      result.latency_cycles += config_->mem_latency_cycles;
    }
  }
  if (write) {
    if (!payload.empty()) {
      std::copy_n(payload.begin(), std::min(len, payload.size()),
                  bytes_.begin() + static_cast<std::ptrdiff_t>(addr));
    }
  } else {
    result.bytes.assign(bytes_.begin() + static_cast<std::ptrdiff_t>(addr),
                        bytes_.begin() + static_cast<std::ptrdiff_t>(addr + len));
  }
  return result;
}

std::pair<VectorValue, int> MemorySystem::read_vector(Addr addr) {
  const int n = config_->vlen_bytes();
  if (addr % n != 0) {
    throw MemoryError(MemoryError::Kind::kMisaligned,
                      "vector read at " + hex_addr(addr) + " is not " +
                          std::to_string(n) + "-byte aligned");
  }
  AccessResult r = access(addr, n, false);
  VectorValue value(config_->vlen_bits);
  std::copy(r.bytes.begin(), r.bytes.end(), value.bytes().begin());
  return {value, r.latency_cycles};
}

int MemorySystem::write_vector(Addr addr, const VectorValue& value) {
  const int n = config_->vlen_bytes();
  if (addr % n != 0) {
    throw MemoryError(MemoryError::Kind::kMisaligned,
                      "vector write at " + hex_addr(addr) + " is not " +
                          std::to_string(n) + "-byte aligned");
  }
  return access(addr, n, true, value.bytes()).latency_cycles;
}

void MemorySystem::poke(Addr addr, std::span<const std::uint8_t> bytes) {
  check_range(addr, bytes.size());
  std::copy(bytes.begin(), bytes.end(),
            bytes_.begin() + static_cast<std::ptrdiff_t>(addr));
}

std::vector<std::uint8_t> MemorySystem::peek(Addr addr, std::size_t len) const {
  check_range(addr, len);
  return {bytes_.begin() + static_cast<std::ptrdiff_t>(addr),
          bytes_.begin() + static_cast<std::ptrdiff_t>(addr + len)};
}

std::uint32_t MemorySystem::peek_u32(Addr addr) const {
  check_range(addr, 4);
  std::uint32_t v;
  std::memcpy(&v, bytes_.data() + addr, 4);
  return v;
}

VectorValue MemorySystem::peek_vector(Addr addr) const {
  VectorValue value(config_->vlen_bits);
  check_range(addr, value.size_bytes());
  std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(addr),
              value.size_bytes(), value.bytes().begin());
  return value;
}

void MemorySystem::poke_vector(Addr addr, const VectorValue& value) {
  poke(addr, value.bytes());
}

std::string dump_memory_image(std::span<const std::uint8_t> image, Addr begin,
                              Addr end) {
  constexpr Addr kRow = 32;
  end = std::min<Addr>(end, image.size());
  std::ostringstream out;
  static constexpr char kHex[] = "0123456789abcdef";
  for (Addr row = begin - begin % kRow; row < end; row += kRow) {
    const Addr lo = std::max(row, begin);
    const Addr hi = std::min(row + kRow, end);
    bool any = false;
    for (Addr a = lo; a < hi; ++a) any |= image[a] != 0;
    if (!any) continue;
    out << "0x" << std::hex;
    out.width(8);
    out.fill('0');
    out << lo << std::dec << ": ";
    for (Addr a = lo; a < hi; ++a) {
      out << kHex[image[a] >> 4] << kHex[image[a] & 0xf];
    }
    out << "\n";
  }
  return out.str();
}

void load_memory_image(std::string_view text, std::span<std::uint8_t> image) {
  int line_no = 0;
  std::size_t pos = 0;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.remove_suffix(1);
    }
    if (line.empty() || line[0] == '#') continue;
    auto bad = [&](const std::string& why) {
      return MemoryError(MemoryError::Kind::kBadImage,
                         "memory image line " + std::to_string(line_no) +
                             ": " + why);
    };
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw bad("missing ':'");
    Addr addr = 0;
    try {
      addr = std::stoull(std::string(line.substr(0, colon)), nullptr, 0);
    } catch (const std::exception&) {
      throw bad("bad address");
    }
    std::string_view hex = line.substr(colon + 1);
    while (!hex.empty() && hex.front() == ' ') hex.remove_prefix(1);
    if (hex.size() % 2 != 0) throw bad("odd number of hex digits");
    if (addr > image.size() || hex.size() / 2 > image.size() - addr) {
      throw bad("bytes fall outside memory");
    }
    for (std::size_t i = 0; i < hex.size(); i += 2) {
      const int hi = nibble(hex[i]);
      const int lo = nibble(hex[i + 1]);
      if (hi < 0 || lo < 0) throw bad("bad hex digit");
      image[addr + i / 2] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
  }
}

}  // namespace regdisp
