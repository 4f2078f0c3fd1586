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

// Brute-force reference models used by the unit and acceptance tests.

#ifndef REGDISP_TESTS_SUPPORT_ORACLES_H_
#define REGDISP_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <deque>
#include <list>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "regdisp/config.h"
#include "regdisp/vasm.h"
#include "regdisp/vrf.h"

namespace regdisp::testing {

// (is_store, arch) pairs, in issue order.
using OpSummary = std::vector<std::pair<bool, int>>;

inline OpSummary summarize(const std::vector<MicroOp>& ops) {
  OpSummary out;
  for (const MicroOp& op : ops) {
    out.push_back({op.kind == MicroOp::Kind::kStore, op.arch});
  }
  return out;
}

// Fully associative queue kept in scan order from the oldest entry. Pinned
// entries passed over during a victim search rotate to the back.
class FifoQueueReference {
 public:
  FifoQueueReference(int n, bool dirty_only) : n_(n), dirty_only_(dirty_only) {}

  struct Outcome {
    int hits = 0;
    int misses = 0;
    OpSummary ops;
  };

  Outcome resolve(const OperandList& list) {
    Outcome out;
    std::set<int> pinned;
    for (const VectorOperand& op : list) {
      if (op.arch == 0) continue;
      if (std::find(queue_.begin(), queue_.end(), op.arch) != queue_.end()) {
        ++out.hits;
      } else {
        ++out.misses;
        if (static_cast<int>(queue_.size()) == n_) {
          std::deque<int> skipped;
          while (pinned.count(queue_.front())) {
            skipped.push_back(queue_.front());
            queue_.pop_front();
          }
          const int victim = queue_.front();
          queue_.pop_front();
          if (!dirty_only_ || dirty_[victim]) out.ops.push_back({true, victim});
          queue_.insert(queue_.end(), skipped.begin(), skipped.end());
        }
        queue_.push_back(op.arch);
        dirty_[op.arch] = false;
        if (op.is_read) out.ops.push_back({false, op.arch});
      }
      pinned.insert(op.arch);
      if (op.is_written) dirty_[op.arch] = true;
    }
    return out;
  }

 private:
  int n_;
  bool dirty_only_;
  std::deque<int> queue_;
  std::map<int, bool> dirty_;
};

// Evicts the least recently touched unpinned register; always writes back.
class LruVrfReference {
 public:
  explicit LruVrfReference(int n) : n_(n) {}

  OpSummary resolve(const OperandList& list) {
    OpSummary ops;
    std::set<int> pinned;
    for (const VectorOperand& op : list) {
      if (op.arch == 0) continue;
      if (!last_use_.count(op.arch)) {
        if (static_cast<int>(last_use_.size()) == n_) {
          int victim = -1;
          for (const auto& [arch, t] : last_use_) {
            if (pinned.count(arch)) continue;
            if (victim < 0 || t < last_use_[victim]) victim = arch;
          }
          last_use_.erase(victim);
          ops.push_back({true, victim});
        }
        if (op.is_read) ops.push_back({false, op.arch});
      }
      last_use_[op.arch] = ++clock_;
      pinned.insert(op.arch);
    }
    return ops;
  }

 private:
  int n_;
  std::uint64_t clock_ = 0;
  std::map<int, std::uint64_t> last_use_;
};

// Set-associative write-back LRU cache, one MRU-first list per set.
class LruCacheReference {
 public:
  LruCacheReference(int size_bytes, int ways, int line_bytes)
      : ways_(ways),
        line_bytes_(line_bytes),
        sets_(static_cast<std::size_t>(size_bytes / (ways * line_bytes))) {}

  // {hit, dirty victim}
  std::pair<bool, bool> access(Addr addr, bool write) {
    const Addr line = addr / static_cast<Addr>(line_bytes_);
    auto& set = sets_[line % sets_.size()];
    for (auto it = set.begin(); it != set.end(); ++it) {
      if (it->first == line) {
        const bool dirty = it->second || write;
        set.erase(it);
        set.push_front({line, dirty});
        return {true, false};
      }
    }
    bool dirty_victim = false;
    if (static_cast<int>(set.size()) == ways_) {
      dirty_victim = set.back().second;
      set.pop_back();
    }
    set.push_front({line, write});
    return {false, dirty_victim};
  }

 private:
  int ways_;
  int line_bytes_;
  std::vector<std::list<std::pair<Addr, bool>>> sets_;
};

// One to three operands; sources first, then a destination that may or may
// not be read.
inline OperandList random_operands(std::mt19937_64& rng, int reg_span) {
  std::uniform_int_distribution<int> reg(0, reg_span);
  OperandList ops;
  const int count = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i + 1 < count; ++i) {
    ops.push({static_cast<std::uint8_t>(reg(rng)), true, false});
  }
  ops.push({static_cast<std::uint8_t>(reg(rng)), rng() % 2 == 0,
            count > 1 || rng() % 2 == 0});
  return ops;
}

}  // namespace regdisp::testing

#endif  // REGDISP_TESTS_SUPPORT_ORACLES_H_
