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

#include "regdisp/vrf.h"

#include <bitset>
#include <sstream>

#include "regdisp/error.h"

namespace regdisp {

Addr spill_address(const MachineConfig& config, int arch) {
  if (arch == 0) {
    throw VrfError(VrfError::Kind::kV0HasNoSpillSlot,
                   "v0 is held in a dedicated register and has no spill slot");
  }
  if (arch < 0 || arch >= kNumArchVregs) {
    throw VrfError(VrfError::Kind::kStaleIndex,
                   "no architectural register v" + std::to_string(arch));
  }
  return config.spill_base_addr +
         static_cast<Addr>(arch - 1) * config.vlen_bytes();
}

// ---------------------------------------------------------------- FullVrf

FullVrf::FullVrf(const ValidatedConfig& config) {
  regs_.fill(VectorValue(config->vlen_bits));
}

std::optional<PhysReg> FullVrf::lookup(int arch) const {
  if (arch == 0) return PhysReg{PhysReg::kV0Slot, 0};
  return PhysReg{arch, static_cast<std::uint8_t>(arch)};
}

Resolution FullVrf::resolve(const OperandList& operands) {
  Resolution res;
  for (const VectorOperand& op : operands) {
    res.phys[res.count++] = *lookup(op.arch);
    if (op.arch != 0) ++res.hits;
  }
  return res;
}

const VectorValue& FullVrf::read_phys(PhysReg reg) const {
  return regs_[reg.is_v0() ? 0 : reg.slot];
}

void FullVrf::write_phys(PhysReg reg, const VectorValue& value) {
  regs_[reg.is_v0() ? 0 : reg.slot] = value;
}

VectorValue& FullVrf::slot_data(int slot) {
  return regs_[slot == PhysReg::kV0Slot ? 0 : slot];
}

VectorValue FullVrf::architectural_value(int arch, const MemorySystem&) const {
  return regs_[arch];
}

void FullVrf::flush(MemorySystem&) {}

std::string FullVrf::dump() const {
  std::ostringstream out;
  for (int i = 0; i < kNumArchVregs; ++i) {
    out << "phys#" << i << ": tag=v" << i << " dirty=0\n";
  }
  return out.str();
}

// ------------------------------------------------------------- CompactVrf

CompactVrf::CompactVrf(const ValidatedConfig& config)
    : config_(config),
      tags_(config->cvrf_size),
      data_(config->cvrf_size, VectorValue(config->vlen_bits)),
      dirty_(config->cvrf_size, false),
      last_use_(config->cvrf_size, 0),
      v0_(config->vlen_bits) {}

std::optional<PhysReg> CompactVrf::lookup(int arch) const {
  if (arch == 0) return PhysReg{PhysReg::kV0Slot, 0};
  for (int i = 0; i < size(); ++i) {
    if (tags_[i] && *tags_[i] == arch) {
      return PhysReg{i, static_cast<std::uint8_t>(arch)};
    }
  }
  return std::nullopt;
}

int CompactVrf::select_victim() const {
  const int n = size();
  if (config_->replacement == Replacement::kFifo) {
    for (int k = 0; k < n; ++k) {
      const int slot = (head_ + k) % n;
      if (!pinned(slot)) return slot;
    }
  } else {
    int best = -1;
    for (int slot = 0; slot < n; ++slot) {
      if (pinned(slot)) continue;
      if (best < 0 || last_use_[slot] < last_use_[best]) best = slot;
    }
    if (best >= 0) return best;
  }
  throw VrfError(VrfError::Kind::kCapacityViolation,
                 "every compact VRF slot is pinned");
}

int CompactVrf::allocate(std::uint8_t arch, bool fill,
                         std::vector<MicroOp>& ops) {
  const int n = size();
  int slot;
  if (occupancy_ < n) {
    slot = tail_;
    tail_ = (tail_ + 1) % n;
    ++occupancy_;
  } else {
    slot = select_victim();
    const std::uint8_t evictee = *tags_[slot];
    if (config_->writeback_on_evict == WritebackOnEvict::kAlways ||
        dirty_[slot]) {
      ops.push_back({MicroOp::Kind::kStore, evictee,
                     spill_address(config_.get(), evictee), slot});
    }
    if (config_->replacement == Replacement::kFifo) {
      head_ = (slot + 1) % n;
      tail_ = head_;
    }
  }
  tags_[slot] = arch;
  dirty_[slot] = false;
  touch(slot);
  if (fill) {
    ops.push_back(
        {MicroOp::Kind::kLoad, arch, spill_address(config_.get(), arch), slot});
  }
  return slot;
}

Resolution CompactVrf::resolve(const OperandList& operands) {
  Resolution res;
  for (const VectorOperand& op : operands) {
    if (op.arch == 0) {
      res.phys[res.count++] = PhysReg{PhysReg::kV0Slot, 0};
      continue;
    }
    int slot;
    if (auto hit = lookup(op.arch)) {
      slot = hit->slot;
      ++res.hits;
      touch(slot);
    } else {
      ++res.misses;
      slot = allocate(op.arch, op.is_read, res.micro_ops);
    }
    pin(slot);
    if (op.is_written) dirty_[slot] = true;
    res.phys[res.count++] = PhysReg{slot, op.arch};
  }
  clear_pins();
  return res;
}

const VectorValue& CompactVrf::read_phys(PhysReg reg) const {
  if (reg.is_v0()) return v0_;
  if (reg.slot < 0 || reg.slot >= size() || !tags_[reg.slot] ||
      *tags_[reg.slot] != reg.arch) {
    throw VrfError(VrfError::Kind::kStaleIndex,
                   "slot " + std::to_string(reg.slot) + " no longer holds v" +
                       std::to_string(reg.arch));
  }
  return data_[reg.slot];
}

void CompactVrf::write_phys(PhysReg reg, const VectorValue& value) {
  if (reg.is_v0()) {
    v0_ = value;
    return;
  }
  read_phys(reg);  // tag check
  data_[reg.slot] = value;
  dirty_[reg.slot] = true;
}

VectorValue& CompactVrf::slot_data(int slot) {
  return slot == PhysReg::kV0Slot ? v0_ : data_[slot];
}

VectorValue CompactVrf::architectural_value(int arch,
                                            const MemorySystem& mem) const {
  if (auto where = lookup(arch)) return read_phys(*where);
  return mem.peek_vector(spill_address(config_.get(), arch));
}

void CompactVrf::flush(MemorySystem& mem) {
  for (int i = 0; i < size(); ++i) {
    if (!tags_[i]) continue;
    mem.poke_vector(spill_address(config_.get(), *tags_[i]), data_[i]);
    dirty_[i] = false;
  }
}

void CompactVrf::prewarm(const std::vector<int>& archs,
                         const MemorySystem& mem) {
  std::vector<MicroOp> discard;
  for (int arch : archs) {
    if (occupancy_ >= size()) break;
    if (arch == 0 || lookup(arch)) continue;
    const int slot = allocate(static_cast<std::uint8_t>(arch), false, discard);
    data_[slot] = mem.peek_vector(spill_address(config_.get(), arch));
  }
}

std::string CompactVrf::dump() const {
  std::ostringstream out;
  for (int i = 0; i < size(); ++i) {
    out << "phys#" << i << ": tag=";
    if (tags_[i]) {
      out << "v" << static_cast<int>(*tags_[i]);
    } else {
      out << "-";
    }
    out << " dirty=" << (dirty_[i] ? 1 : 0);
    if (i == head_) out << " <head";
    if (i == tail_) out << " <tail";
    out << "\n";
  }
  return out.str();
}

std::vector<std::string> CompactVrf::check_invariants() const {
  std::vector<std::string> violations;
  std::bitset<kNumArchVregs> seen;
  int present = 0;
  for (int i = 0; i < size(); ++i) {
    if (!tags_[i]) continue;
    ++present;
    const int arch = *tags_[i];
    if (arch == 0) violations.push_back("v0 present in tag array");
    if (arch < 0 || arch >= kNumArchVregs) {
      violations.push_back("tag out of range at slot " + std::to_string(i));
      continue;
    }
    if (seen[arch]) {
      violations.push_back("v" + std::to_string(arch) + " tagged twice");
    }
    seen[arch] = true;
  }
  if (present != occupancy_) {
    violations.push_back("occupancy " + std::to_string(occupancy_) +
                         " != tagged slots " + std::to_string(present));
  }
  if (occupancy_ < size() && tags_[tail_]) {
    violations.push_back("tail slot is occupied while free slots remain");
  }
  if (pins_ != 0) violations.push_back("pins left set between instructions");
  return violations;
}

std::unique_ptr<VectorRegisterFile> make_vrf(const ValidatedConfig& config) {
  if (config->vrf_model == VrfKind::kFull) {
    return std::make_unique<FullVrf>(config);
  }
  return std::make_unique<CompactVrf>(config);
}

}  // namespace regdisp
