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

#include "mtsra/inst.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>

namespace mtsra {

Cond cond_of(uil::Relation rel) {
  switch (rel) {
    case uil::Relation::kLt: return Cond::kLt;
    case uil::Relation::kLe: return Cond::kLe;
    case uil::Relation::kEq: return Cond::kEq;
    case uil::Relation::kGe: return Cond::kGe;
    case uil::Relation::kGt: return Cond::kGt;
  }
  return Cond::kEq;
}

Cond negate(Cond c) {
  switch (c) {
    case Cond::kLt: return Cond::kGe;
    case Cond::kLe: return Cond::kGt;
    case Cond::kEq: return Cond::kNe;
    case Cond::kNe: return Cond::kEq;
    case Cond::kGe: return Cond::kLt;
    case Cond::kGt: return Cond::kLe;
  }
  return c;
}

Cond swap_operands(Cond c) {
  switch (c) {
    case Cond::kLt: return Cond::kGt;
    case Cond::kLe: return Cond::kGe;
    case Cond::kGe: return Cond::kLe;
    case Cond::kGt: return Cond::kLt;
    default: return c;
  }
}

bool holds(Cond c, Word a, Word b) {
  switch (c) {
    case Cond::kLt: return a < b;
    case Cond::kLe: return a <= b;
    case Cond::kEq: return a == b;
    case Cond::kNe: return a != b;
    case Cond::kGe: return a >= b;
    case Cond::kGt: return a > b;
  }
  return false;
}

std::string procedure_label(std::string_view name) {
  return "L." + std::string(name);
}

namespace {

const char* cond_mnemonic(Cond c) {
  switch (c) {
    case Cond::kLt: return "blt";
    case Cond::kLe: return "ble";
    case Cond::kEq: return "beq";
    case Cond::kNe: return "bne";
    case Cond::kGe: return "bge";
    case Cond::kGt: return "bgt";
  }
  return "b?";
}

const char* binop_mnemonic(uil::BinOpKind op) {
  switch (op) {
    case uil::BinOpKind::kAdd: return "add";
    case uil::BinOpKind::kSub: return "sub";
    case uil::BinOpKind::kMul: return "mul";
  }
  return "?";
}

std::string reg(Reg r) { return "r" + std::to_string(r.index); }
std::string slot(std::size_t s) { return "fv" + std::to_string(s); }
std::string operand(const RegOrImm& v) {
  if (const auto* r = std::get_if<Reg>(&v)) return reg(*r);
  return std::to_string(std::get<Word>(v));
}

struct Printer {
  std::string operator()(const MoveInst& i) const {
    return "move " + reg(i.dst) + ", " + reg(i.src);
  }
  std::string operator()(const LoadImmInst& i) const {
    return "li " + reg(i.dst) + ", " + std::to_string(i.imm);
  }
  std::string operator()(const LoadInst& i) const {
    return "load " + reg(i.dst) + ", " + slot(i.slot);
  }
  std::string operator()(const StoreInst& i) const {
    return "store " + slot(i.slot) + ", " + reg(i.src);
  }
  std::string operator()(const BinOpInst& i) const {
    return std::string(binop_mnemonic(i.op)) + " " + reg(i.dst) + ", " + reg(i.a) +
           ", " + operand(i.b);
  }
  std::string operator()(const MemLoadInst& i) const {
    return "mload " + reg(i.dst) + ", " + reg(i.base) + ", " + operand(i.index);
  }
  std::string operator()(const MemStoreInst& i) const {
    return "mstore " + reg(i.base) + ", " + operand(i.index) + ", " + operand(i.src);
  }
  std::string operator()(const CondJumpInst& i) const {
    return std::string(cond_mnemonic(i.cond)) + " " + reg(i.a) + ", " +
           operand(i.b) + ", " + i.label;
  }
  std::string operator()(const JumpInst& i) const {
    if (const auto* r = std::get_if<Reg>(&i.target)) return "jmp " + reg(*r);
    return "jmp " + std::get<std::string>(i.target);
  }
  std::string operator()(const LoadLabelInst& i) const {
    return "la " + reg(i.dst) + ", " + i.label;
  }
  std::string operator()(const LabelDefInst& i) const { return i.label + ":"; }
  std::string operator()(const FrameAdjustInst& i) const {
    return std::string(i.advance ? "fp+= " : "fp-= ") + std::to_string(i.slots);
  }
  std::string operator()(const HaltInst&) const { return "halt"; }
};

std::optional<std::size_t> number_after(std::string_view s, std::string_view prefix) {
  if (s.size() <= prefix.size() || s.substr(0, prefix.size()) != prefix) {
    return std::nullopt;
  }
  std::size_t value = 0;
  auto body = s.substr(prefix.size());
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc() || ptr != body.data() + body.size()) return std::nullopt;
  return value;
}

std::optional<Word> as_word(std::string_view s) {
  Word value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

class LineParser {
 public:
  explicit LineParser(std::string_view line) {
    line = trim(line);
    auto space = line.find(' ');
    mnemonic_ = std::string(line.substr(0, space));
    if (space == std::string_view::npos) return;
    std::string_view rest = line.substr(space + 1);
    while (!rest.empty()) {
      auto comma = rest.find(',');
      args_.emplace_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }

  const std::string& mnemonic() const { return mnemonic_; }

  void expect(std::size_t n) const {
    if (args_.size() != n) {
      throw std::invalid_argument(mnemonic_ + " expects " + std::to_string(n) +
                                  " operand(s)");
    }
  }

  Reg reg(std::size_t i) const {
    auto n = number_after(args_.at(i), "r");
    if (!n) throw std::invalid_argument("expected register, got '" + args_[i] + "'");
    return Reg{static_cast<unsigned>(*n)};
  }

  std::size_t slot(std::size_t i) const {
    auto n = number_after(args_.at(i), "fv");
    if (!n) throw std::invalid_argument("expected slot, got '" + args_[i] + "'");
    return *n;
  }

  Word imm(std::size_t i) const {
    auto w = as_word(args_.at(i));
    if (!w) throw std::invalid_argument("expected integer, got '" + args_[i] + "'");
    return *w;
  }

  RegOrImm reg_or_imm(std::size_t i) const {
    if (auto w = as_word(args_.at(i))) return *w;
    return reg(i);
  }

  bool is_reg(std::size_t i) const { return number_after(args_.at(i), "r").has_value(); }

  const std::string& label(std::size_t i) const {
    if (args_.at(i).empty()) throw std::invalid_argument("expected label");
    return args_[i];
  }

 private:
  std::string mnemonic_;
  std::vector<std::string> args_;
};

std::optional<Cond> cond_from(std::string_view m) {
  for (Cond c : {Cond::kLt, Cond::kLe, Cond::kEq, Cond::kNe, Cond::kGe, Cond::kGt}) {
    if (m == cond_mnemonic(c)) return c;
  }
  return std::nullopt;
}

std::optional<uil::BinOpKind> binop_from(std::string_view m) {
  for (auto op : {uil::BinOpKind::kAdd, uil::BinOpKind::kSub, uil::BinOpKind::kMul}) {
    if (m == binop_mnemonic(op)) return op;
  }
  return std::nullopt;
}

}  // namespace

std::string opcode(const Inst& inst) {
  std::string text = std::visit(Printer{}, inst);
  if (std::holds_alternative<LabelDefInst>(inst)) return "label";
  return text.substr(0, text.find(' '));
}

std::string to_string(const Inst& inst) { return std::visit(Printer{}, inst); }

std::string print_asm(const std::vector<Inst>& code) {
  std::ostringstream os;
  for (const auto& inst : code) {
    if (std::holds_alternative<LabelDefInst>(inst)) {
      os << to_string(inst) << '\n';
    } else {
      os << "  " << to_string(inst) << '\n';
    }
  }
  return os.str();
}

AsmError::AsmError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what) {}

Inst parse_inst(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.back() == ':') {
    auto label = trim(text.substr(0, text.size() - 1));
    if (label.empty() || label.find(' ') != std::string_view::npos) {
      throw std::invalid_argument("malformed label definition");
    }
    return LabelDefInst{std::string(label)};
  }
  LineParser p(text);
  const std::string& m = p.mnemonic();
  if (m == "move") {
    p.expect(2);
    return MoveInst{p.reg(0), p.reg(1)};
  }
  if (m == "li") {
    p.expect(2);
    return LoadImmInst{p.reg(0), p.imm(1)};
  }
  if (m == "load") {
    p.expect(2);
    return LoadInst{p.reg(0), p.slot(1)};
  }
  if (m == "store") {
    p.expect(2);
    return StoreInst{p.slot(0), p.reg(1)};
  }
  if (auto op = binop_from(m)) {
    p.expect(3);
    return BinOpInst{*op, p.reg(0), p.reg(1), p.reg_or_imm(2)};
  }
  if (m == "mload") {
    p.expect(3);
    return MemLoadInst{p.reg(0), p.reg(1), p.reg_or_imm(2)};
  }
  if (m == "mstore") {
    p.expect(3);
    return MemStoreInst{p.reg(0), p.reg_or_imm(1), p.reg_or_imm(2)};
  }
  if (auto c = cond_from(m)) {
    p.expect(3);
    return CondJumpInst{*c, p.reg(0), p.reg_or_imm(1), p.label(2)};
  }
  if (m == "jmp") {
    p.expect(1);
    if (p.is_reg(0)) return JumpInst{p.reg(0)};
    return JumpInst{p.label(0)};
  }
  if (m == "la") {
    p.expect(2);
    return LoadLabelInst{p.reg(0), p.label(1)};
  }
  if (m == "fp+=" || m == "fp-=") {
    p.expect(1);
    Word n = p.imm(0);
    if (n < 0) throw std::invalid_argument("frame adjustment must be nonnegative");
    return FrameAdjustInst{m == "fp+=", static_cast<std::size_t>(n)};
  }
  if (m == "halt") {
    p.expect(0);
    return HaltInst{};
  }
  throw std::invalid_argument("unknown mnemonic '" + m + "'");
}

std::vector<Inst> parse_asm(std::string_view text) {
  std::vector<Inst> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto semi = line.find(';'); semi != std::string_view::npos) {
      line = line.substr(0, semi);
    }
    line = trim(line);
    if (line.empty()) continue;
    try {
      out.push_back(parse_inst(line));
    } catch (const std::invalid_argument& e) {
      throw AsmError(line_no, e.what());
    }
  }
  return out;
}

}  // namespace mtsra
