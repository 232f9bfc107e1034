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

#ifndef MTSRA_INST_HPP_
#define MTSRA_INST_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mtsra/uil.hpp"

// Target register-machine instructions and their one-per-line text form:
//
//   move r1, r2        li r1, 5          load r1, fv0     store fv0, r1
//   add r1, r2, r3     sub r1, r2, 7     mul r1, r2, r3
//   mload r1, r2, r3   mstore r1, r2, r3
//   blt r1, r2, L.f.1  jmp L.f           jmp r0           la r0, L.f.2
//   L.f.2:             fp+= 2            fp-= 2           halt
namespace mtsra {

using uil::Word;

struct Reg {
  unsigned index = 0;
  friend auto operator<=>(const Reg&, const Reg&) = default;
};

// Second operands of ALU ops, branches, and memory ops may be immediates.
using RegOrImm = std::variant<Reg, Word>;

enum class Cond { kLt, kLe, kEq, kNe, kGe, kGt };

Cond cond_of(uil::Relation rel);
Cond negate(Cond c);
// Condition with operands exchanged: a < b  <=>  b > a.
Cond swap_operands(Cond c);
bool holds(Cond c, Word a, Word b);

struct MoveInst {
  Reg dst, src;
  friend bool operator==(const MoveInst&, const MoveInst&) = default;
};
struct LoadImmInst {
  Reg dst;
  Word imm;
  friend bool operator==(const LoadImmInst&, const LoadImmInst&) = default;
};
struct LoadInst {
  Reg dst;
  std::size_t slot;
  friend bool operator==(const LoadInst&, const LoadInst&) = default;
};
struct StoreInst {
  std::size_t slot;
  Reg src;
  friend bool operator==(const StoreInst&, const StoreInst&) = default;
};
struct BinOpInst {
  uil::BinOpKind op;
  Reg dst, a;
  RegOrImm b;
  friend bool operator==(const BinOpInst&, const BinOpInst&) = default;
};
struct MemLoadInst {
  Reg dst, base;
  RegOrImm index;
  friend bool operator==(const MemLoadInst&, const MemLoadInst&) = default;
};
struct MemStoreInst {
  Reg base;
  RegOrImm index, src;
  friend bool operator==(const MemStoreInst&, const MemStoreInst&) = default;
};
struct CondJumpInst {
  Cond cond;
  Reg a;
  RegOrImm b;
  std::string label;
  friend bool operator==(const CondJumpInst&, const CondJumpInst&) = default;
};
struct JumpInst {
  std::variant<std::string, Reg> target;
  friend bool operator==(const JumpInst&, const JumpInst&) = default;
};
struct LoadLabelInst {
  Reg dst;
  std::string label;
  friend bool operator==(const LoadLabelInst&, const LoadLabelInst&) = default;
};
struct LabelDefInst {
  std::string label;
  friend bool operator==(const LabelDefInst&, const LabelDefInst&) = default;
};
// `fp+= n` before a non-tail call and `fp-= n` after it. The direction is
// kept separately so zero-sized adjustments still mark call boundaries.
struct FrameAdjustInst {
  bool advance = true;
  std::size_t slots = 0;
  std::ptrdiff_t delta() const {
    return advance ? static_cast<std::ptrdiff_t>(slots)
                   : -static_cast<std::ptrdiff_t>(slots);
  }
  friend bool operator==(const FrameAdjustInst&, const FrameAdjustInst&) = default;
};
struct HaltInst {
  friend bool operator==(const HaltInst&, const HaltInst&) = default;
};

using Inst = std::variant<MoveInst, LoadImmInst, LoadInst, StoreInst, BinOpInst,
                          MemLoadInst, MemStoreInst, CondJumpInst, JumpInst,
                          LoadLabelInst, LabelDefInst, FrameAdjustInst, HaltInst>;

struct TargetProgram {
  std::vector<Inst> code;
  friend bool operator==(const TargetProgram&, const TargetProgram&) = default;
};

// Label naming. Dots cannot occur in UIL identifiers, so these never clash.
std::string procedure_label(std::string_view name);
inline constexpr std::string_view kEntryLabel = "L.entry";

std::string opcode(const Inst& inst);
std::string to_string(const Inst& inst);
std::string print_asm(const std::vector<Inst>& code);

class AsmError : public std::runtime_error {
 public:
  AsmError(std::size_t line, const std::string& what);
};

// Inverse of print_asm. Blank lines and `;` comments are ignored.
std::vector<Inst> parse_asm(std::string_view text);
Inst parse_inst(std::string_view line);

}  // namespace mtsra

#endif  // MTSRA_INST_HPP_
