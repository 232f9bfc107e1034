// Copyright (c) 2026 The mtsra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MTSRA_MODEL_HPP_
#define MTSRA_MODEL_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtsra/uil.hpp"

namespace mtsra {

using uil::Ident;

// A register `r<i>` or a frame slot `fv<i>` (offset i from the frame pointer).
struct Location {
  enum class Kind { kReg, kSlot };
  Kind kind = Kind::kReg;
  std::size_t index = 0;

  static Location reg(std::size_t i) { return {Kind::kReg, i}; }
  static Location slot(std::size_t i) { return {Kind::kSlot, i}; }
  bool is_reg() const { return kind == Kind::kReg; }
  bool is_slot() const { return kind == Kind::kSlot; }

  friend auto operator<=>(const Location&, const Location&) = default;
};

std::string to_string(Location loc);

// Raised when the allocator or model is asked to do something inconsistent
// (an unbound name, a double binding). Indicates a bug upstream.
class ModelFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct MachineConfig {
  unsigned registers = 4;
  std::vector<unsigned> arg_regs{1, 2};
  unsigned ret_addr_reg = 0;
  unsigned ret_val_reg = 1;
  // Else-branches consult the then-branch's final model when choosing
  // free registers.
  bool use_preferences = true;

  // r0 holds the return address, r1 the return value, and up to four
  // argument registers start at r1 while leaving one register spare.
  static MachineConfig standard(unsigned registers);

  // Throws std::invalid_argument when the invariants do not hold.
  void check() const;
};

// Compile-time image of the machine: which register and which frame slot
// each name occupies. A name may be in both at once. Models are values;
// every operation returns a new model.
class Model {
 public:
  std::optional<unsigned> reg_of(const Ident& v) const;
  std::optional<std::size_t> slot_of(const Ident& v) const;
  bool contains(const Ident& v) const { return reg_of(v) || slot_of(v); }

  // Register binding when present, else the slot binding.
  Location whereis(const Ident& v) const;

  std::optional<Ident> reg_occupant(unsigned r) const;
  std::optional<Ident> slot_occupant(std::size_t s) const;

  Model bind_reg(const Ident& v, unsigned r) const;
  Model bind_slot(const Ident& v, std::size_t s) const;
  Model unbind_reg(const Ident& v) const;
  Model unbind_slot(const Ident& v) const;
  Model drop(const std::set<Ident>& vs) const;
  Model drop(const Ident& v) const;
  // Keeps only the listed names.
  Model restrict_to(const std::set<Ident>& vs) const;

  // Lowest register below `registers` bound to no name.
  std::optional<unsigned> free_register(unsigned registers) const;
  std::optional<unsigned> free_register(const MachineConfig& cfg) const {
    return free_register(cfg.registers);
  }
  // Lowest slot bound to no name.
  std::size_t free_slot() const;

  // Order in which names acquired their current register; larger is newer.
  std::uint64_t reg_stamp(const Ident& v) const;

  const std::map<Ident, unsigned>& regs() const { return regs_; }
  const std::map<Ident, std::size_t>& slots() const { return slots_; }
  std::set<Ident> names() const;

  // `{x:r1, y:r2}{x:fv0, z:fv1}`; names sorted, RET listed last.
  std::string to_string() const;

  friend bool operator==(const Model& a, const Model& b) {
    return a.regs_ == b.regs_ && a.slots_ == b.slots_;
  }

 private:
  std::map<Ident, unsigned> regs_;
  std::map<Ident, std::size_t> slots_;
  std::map<Ident, std::uint64_t> stamps_;
  std::uint64_t clock_ = 0;
};

// Arguments in argument registers, then slots fv0, fv1, ...; RET in the
// return-address register.
Model initial_model(std::span<const Ident> params, const MachineConfig& cfg);

}  // namespace mtsra

#endif  // MTSRA_MODEL_HPP_
