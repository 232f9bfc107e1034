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

#include <sstream>

#include "mtsra/uil.hpp"

namespace mtsra::uil {
namespace {

using Lines = std::vector<std::string>;

std::string args_text(const std::vector<Operand>& args) {
  std::string out;
  for (const auto& a : args) out += " " + print_operand(a);
  return out;
}

std::string rhs_text(const Rhs& rhs) {
  struct Visitor {
    std::string operator()(const Operand& op) const { return print_operand(op); }
    std::string operator()(const BinaryRhs& b) const {
      return "(" + std::string(binop_name(b.op)) + " " + print_operand(b.lhs) +
             " " + print_operand(b.rhs) + ")";
    }
    std::string operator()(const MemReadRhs& m) const {
      return "(mref " + print_operand(m.base) + " " + print_operand(m.index) + ")";
    }
    std::string operator()(const CallRhs& c) const {
      return "(" + c.callee + args_text(c.args) + ")";
    }
  };
  return std::visit(Visitor{}, rhs);
}

std::string test_text(const Test& t) {
  return "(" + std::string(relation_name(t.rel)) + " " + print_operand(t.lhs) +
         " " + print_operand(t.rhs) + ")";
}

void emit_block(const Block& block, int indent, Lines& out);

void emit_statement(const Statement& s, int indent, Lines& out) {
  const std::string pad(indent, ' ');
  if (const auto* node = std::get_if<If>(&s.node)) {
    out.push_back(pad + "(if " + test_text(node->test));
    for (const Block* b : {&node->then_branch, &node->else_branch}) {
      out.push_back(pad + "  (begin");
      emit_block(*b, indent + 4, out);
      out.back() += ")";
    }
    out.back() += ")";
    return;
  }
  out.push_back(pad + print_statement_head(s));
}

void emit_block(const Block& block, int indent, Lines& out) {
  for (const auto& s : block) emit_statement(s, indent, out);
}

}  // namespace

std::string_view relation_name(Relation rel) {
  switch (rel) {
    case Relation::kLt: return "<";
    case Relation::kLe: return "<=";
    case Relation::kEq: return "=";
    case Relation::kGe: return ">=";
    case Relation::kGt: return ">";
  }
  return "?";
}

std::string_view binop_name(BinOpKind op) {
  switch (op) {
    case BinOpKind::kAdd: return "+";
    case BinOpKind::kSub: return "-";
    case BinOpKind::kMul: return "*";
  }
  return "?";
}

std::string print_operand(const Operand& op) {
  return op.is_var() ? op.var() : std::to_string(op.imm());
}

// One-line rendering of a statement. An `if` prints only its test.
std::string print_statement_head(const Statement& s) {
  struct Visitor {
    std::string operator()(const Assign& a) const {
      return "(set! " + a.dst + " " + rhs_text(a.rhs) + ")";
    }
    std::string operator()(const MemWrite& m) const {
      return "(mset! " + print_operand(m.base) + " " + print_operand(m.index) +
             " " + print_operand(m.src) + ")";
    }
    std::string operator()(const If& i) const {
      return "(if " + test_text(i.test) + ")";
    }
    std::string operator()(const Call& c) const {
      return "(" + c.callee + args_text(c.args) + ")";
    }
    std::string operator()(const Return& r) const {
      return "(return " + print_operand(r.value) + ")";
    }
  };
  return std::visit(Visitor{}, s.node);
}

std::string print(const Program& program) {
  Lines lines;
  if (program.definitions.empty()) {
    lines.push_back("(letrec ()");
  } else {
    for (std::size_t i = 0; i < program.definitions.size(); ++i) {
      const auto& def = program.definitions[i];
      std::string params;
      for (std::size_t j = 0; j < def.params.size(); ++j) {
        params += (j ? " " : "") + def.params[j];
      }
      std::string head = "(" + def.name + " (lambda (" + params + ")";
      lines.push_back(i == 0 ? "(letrec (" + head : "  " + head);
      emit_block(def.body, 4, lines);
      lines.back() += "))";
    }
    lines.back() += ")";
  }
  emit_block(program.body, 2, lines);
  lines.back() += ")";

  std::ostringstream os;
  for (const auto& l : lines) os << l << '\n';
  return os.str();
}

}  // namespace mtsra::uil
