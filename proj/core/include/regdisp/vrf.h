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

#ifndef REGDISP_VRF_H_
#define REGDISP_VRF_H_

// Vector register file models.
//
// FullVrf keeps all 32 architectural registers resident. CompactVrf keeps a
// small number of physical registers and treats them as a fully-associative
// cache over v1..v31: a tag array names the architectural register held by
// each slot, the slots form a circular FIFO (head = longest resident,
// tail = next free), and registers that are not resident live at fixed
// addresses in a reserved memory region. v0 sits in its own dedicated slot
// and never leaves it.
//
// A miss in resolve() does not move data. It produces micro-ops (store the
// evictee, load the operand) that the pipeline issues through the memory
// port while the processor stalls.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "regdisp/config.h"
#include "regdisp/memsys.h"
#include "regdisp/vasm.h"
#include "regdisp/vector_value.h"

namespace regdisp {

// A resolved operand: the physical slot plus the architectural register it
// was resolved for, so a stale slot can be detected on access.
struct PhysReg {
  static constexpr int kV0Slot = -1;

  int slot = kV0Slot;
  std::uint8_t arch = 0;

  bool is_v0() const { return slot == kV0Slot; }
  bool operator==(const PhysReg&) const = default;
};

struct MicroOp {
  enum class Kind : std::uint8_t { kStore, kLoad };

  Kind kind;
  std::uint8_t arch;
  Addr addr;
  int slot;

  bool operator==(const MicroOp&) const = default;
};

struct Resolution {
  // One entry per operand, in the order given to resolve().
  std::array<PhysReg, 3> phys{};
  int count = 0;
  std::vector<MicroOp> micro_ops;
  // Set by the pipeline once the micro-ops have been issued.
  int stall_cycles = 0;
  // Tag-array outcomes; v0 operands are not counted.
  int hits = 0;
  int misses = 0;
};

// Address of v_arch's reserved slot; throws VrfError for v0.
Addr spill_address(const MachineConfig& config, int arch);

class VectorRegisterFile {
 public:
  virtual ~VectorRegisterFile() = default;

  // v0 always resolves to the dedicated slot. Never mutates state.
  virtual std::optional<PhysReg> lookup(int arch) const = 0;

  // Resolves operands strictly in order, allocating on misses. Each resolved
  // operand stays pinned until every operand is resolved.
  virtual Resolution resolve(const OperandList& operands) = 0;

  virtual const VectorValue& read_phys(PhysReg reg) const = 0;
  virtual void write_phys(PhysReg reg, const VectorValue& value) = 0;

  // Raw slot storage for executing micro-ops; bypasses tag checks because
  // the tag already names the incoming register when a store runs.
  virtual VectorValue& slot_data(int slot) = 0;

  // Current value of an architectural register wherever it lives.
  virtual VectorValue architectural_value(int arch,
                                          const MemorySystem& mem) const = 0;
  // Untimed write-back of every resident register to its reserved address.
  virtual void flush(MemorySystem& mem) = 0;
  // Untimed preload of the given registers while free slots remain.
  virtual void prewarm(const std::vector<int>& archs,
                       const MemorySystem& mem) = 0;

  virtual std::string dump() const = 0;
  // Empty when every structural invariant holds.
  virtual std::vector<std::string> check_invariants() const = 0;
};

class FullVrf final : public VectorRegisterFile {
 public:
  explicit FullVrf(const ValidatedConfig& config);

  std::optional<PhysReg> lookup(int arch) const override;
  Resolution resolve(const OperandList& operands) override;
  const VectorValue& read_phys(PhysReg reg) const override;
  void write_phys(PhysReg reg, const VectorValue& value) override;
  VectorValue& slot_data(int slot) override;
  VectorValue architectural_value(int arch,
                                  const MemorySystem& mem) const override;
  void flush(MemorySystem& mem) override;
  void prewarm(const std::vector<int>&, const MemorySystem&) override {}
  std::string dump() const override;
  std::vector<std::string> check_invariants() const override { return {}; }

 private:
  std::array<VectorValue, kNumArchVregs> regs_;
};

class CompactVrf final : public VectorRegisterFile {
 public:
  explicit CompactVrf(const ValidatedConfig& config);

  std::optional<PhysReg> lookup(int arch) const override;
  Resolution resolve(const OperandList& operands) override;
  const VectorValue& read_phys(PhysReg reg) const override;
  void write_phys(PhysReg reg, const VectorValue& value) override;
  VectorValue& slot_data(int slot) override;
  VectorValue architectural_value(int arch,
                                  const MemorySystem& mem) const override;
  void flush(MemorySystem& mem) override;
  void prewarm(const std::vector<int>& archs,
               const MemorySystem& mem) override;
  std::string dump() const override;
  std::vector<std::string> check_invariants() const override;

  // Places `arch` (absent, non-zero) in a slot and appends the micro-ops
  // for it: a store of the evictee when the store is required, then a load
  // when `fill` is set. Exposed for unit tests; resolve() is the normal
  // entry point.
  int allocate(std::uint8_t arch, bool fill, std::vector<MicroOp>& ops);

  int size() const { return static_cast<int>(tags_.size()); }
  int head() const { return head_; }
  int tail() const { return tail_; }
  int occupancy() const { return occupancy_; }
  const std::optional<std::uint8_t>& tag(int slot) const { return tags_[slot]; }
  bool dirty(int slot) const { return dirty_[slot]; }
  bool pinned(int slot) const { return (pins_ >> slot) & 1u; }

  // Test hooks for building specific states.
  void pin(int slot) { pins_ |= 1u << slot; }
  void clear_pins() { pins_ = 0; }

 private:
  int select_victim() const;
  void touch(int slot) { last_use_[slot] = ++clock_; }

  ValidatedConfig config_;
  std::vector<std::optional<std::uint8_t>> tags_;
  std::vector<VectorValue> data_;
  std::vector<bool> dirty_;
  std::vector<std::uint64_t> last_use_;
  std::uint64_t clock_ = 0;
  int head_ = 0;
  int tail_ = 0;
  int occupancy_ = 0;
  std::uint32_t pins_ = 0;
  VectorValue v0_;
};

std::unique_ptr<VectorRegisterFile> make_vrf(const ValidatedConfig& config);

}  // namespace regdisp

#endif  // REGDISP_VRF_H_
