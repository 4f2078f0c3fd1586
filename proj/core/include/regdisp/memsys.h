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

#ifndef REGDISP_MEMSYS_H_
#define REGDISP_MEMSYS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "regdisp/config.h"
#include "regdisp/vector_value.h"

namespace regdisp {

struct AccessResult {
  int latency_cycles = 0;
  bool hit = false;
  // Loaded bytes; empty for writes.
  std::vector<std::uint8_t> bytes;
};

// Write-back, write-allocate L1 tag model with per-set LRU. Contents are
// held by MemorySystem; the cache only decides latency.
class L1Cache {
 public:
  struct Way {
    bool valid = false;
    bool dirty = false;
    std::uint64_t tag = 0;
    // 0 is most recently used.
    int lru_rank = 0;
  };

  struct Outcome {
    bool hit = false;
    bool dirty_eviction = false;
  };

  L1Cache(int size_bytes, int ways, int line_bytes);

  Outcome touch(Addr line_addr, bool write);

  int num_sets() const { return num_sets_; }
  int ways() const { return ways_; }
  std::span<const Way> set(int index) const {
    return {sets_.data() + static_cast<std::size_t>(index) * ways_,
            static_cast<std::size_t>(ways_)};
  }
  // Both structural invariants of every set: unique tags among valid ways
  // and LRU ranks forming a permutation.
  bool check_invariants() const;

 private:
  int num_sets_;
  int ways_;
  int line_bytes_;
  std::vector<Way> sets_;
};

// Flat main memory behind one L1 data cache and one shared port. Scalar,
// vector and dispersion micro-op traffic all serialize through access().
class MemorySystem {
 public:
  explicit MemorySystem(const ValidatedConfig& config);

  // Accesses must stay within one cacheline. Hit latency is l1_hit_cycles;
  // a miss adds mem_latency_cycles, and one more mem_latency_cycles when the
  // victim line is dirty. A write with an empty payload only updates cache
  // state.
  AccessResult access(Addr addr, std::size_t len, bool write,
                      std::span<const std::uint8_t> payload = {});

  // One vlen-sized access; addr must be vlen/8 aligned.
  std::pair<VectorValue, int> read_vector(Addr addr);
  int write_vector(Addr addr, const VectorValue& value);

  // Untimed functional access, used for loading images and by checkers.
  void poke(Addr addr, std::span<const std::uint8_t> bytes);
  std::vector<std::uint8_t> peek(Addr addr, std::size_t len) const;
  std::uint32_t peek_u32(Addr addr) const;
  VectorValue peek_vector(Addr addr) const;
  void poke_vector(Addr addr, const VectorValue& value);

  const std::vector<std::uint8_t>& image() const { return bytes_; }
  const L1Cache& l1() const { return l1_; }
  const ValidatedConfig& config() const { return config_; }

  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }

 private:
  void check_range(Addr addr, std::size_t len) const;

  ValidatedConfig config_;
  std::vector<std::uint8_t> bytes_;
  L1Cache l1_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

// Text memory image: one `0xADDR: hexbytes` line per non-zero 32-byte row.
std::string dump_memory_image(std::span<const std::uint8_t> image,
                              Addr begin = 0, Addr end = ~Addr{0});
// Applies every line of a dump to `image`; throws MemoryError on bad input.
void load_memory_image(std::string_view text, std::span<std::uint8_t> image);

}  // namespace regdisp

#endif  // REGDISP_MEMSYS_H_
