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

#ifndef MTSRA_UIL_HPP_
#define MTSRA_UIL_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// The input language: a letrec of first-order procedures over flat
// statements. Every operand is a variable or a 64-bit immediate.
namespace mtsra::uil {

using Word = std::int64_t;
using Ident = std::string;

// Reserved model name for the return address. The lexer refuses it as an
// identifier so it never collides with a program variable.
inline constexpr std::string_view kReturnAddress = "RET";

class Operand {
 public:
  Operand() : value_(Word{0}) {}
  Operand(Word imm) : value_(imm) {}  // NOLINT(google-explicit-constructor)
  Operand(int imm) : value_(Word{imm}) {}  // NOLINT
  Operand(Ident var) : value_(std::move(var)) {}  // NOLINT
  Operand(const char* var) : value_(Ident(var)) {}  // NOLINT

  bool is_var() const { return std::holds_alternative<Ident>(value_); }
  bool is_imm() const { return std::holds_alternative<Word>(value_); }
  const Ident& var() const { return std::get<Ident>(value_); }
  Word imm() const { return std::get<Word>(value_); }

  friend bool operator==(const Operand&, const Operand&) = default;

 private:
  std::variant<Ident, Word> value_;
};

enum class BinOpKind { kAdd, kSub, kMul };
enum class Relation { kLt, kLe, kEq, kGe, kGt };

struct BinaryRhs {
  BinOpKind op;
  Operand lhs;
  Operand rhs;
  friend bool operator==(const BinaryRhs&, const BinaryRhs&) = default;
};

struct MemReadRhs {
  Operand base;
  Operand index;
  friend bool operator==(const MemReadRhs&, const MemReadRhs&) = default;
};

// `(set! x (f a ...))`: a call whose result is bound to the assigned name.
struct CallRhs {
  Ident callee;
  std::vector<Operand> args;
  friend bool operator==(const CallRhs&, const CallRhs&) = default;
};

using Rhs = std::variant<Operand, BinaryRhs, MemReadRhs, CallRhs>;

struct Test {
  Relation rel;
  Operand lhs;
  Operand rhs;
  friend bool operator==(const Test&, const Test&) = default;
};

struct SourceLoc {
  int line = 0;
  int column = 0;
};

struct Statement;
using Block = std::vector<Statement>;

struct Assign {
  Ident dst;
  Rhs rhs;
};

struct MemWrite {
  Operand base;
  Operand index;
  Operand src;
};

struct If {
  Test test;
  Block then_branch;
  Block else_branch;
};

struct Call {
  Ident callee;
  std::vector<Operand> args;
};

struct Return {
  Operand value;
};

// Equality is structural and ignores source locations.
struct Statement {
  std::variant<Assign, MemWrite, If, Call, Return> node;
  SourceLoc loc;
};

bool operator==(const Assign& a, const Assign& b);
bool operator==(const MemWrite& a, const MemWrite& b);
bool operator==(const If& a, const If& b);
bool operator==(const Call& a, const Call& b);
bool operator==(const Return& a, const Return& b);
bool operator==(const Statement& a, const Statement& b);

struct Definition {
  Ident name;
  std::vector<Ident> params;
  Block body;
  SourceLoc loc;
};

bool operator==(const Definition& a, const Definition& b);

struct Program {
  std::vector<Definition> definitions;
  Block body;

  const Definition* find(std::string_view name) const;
};

bool operator==(const Program& a, const Program& b);

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLoc loc, const std::string& what);
  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

// Parses the parenthesized prefix syntax. Comments run from `;` to end of
// line. Throws ParseError on syntax errors, malformed statements, and
// duplicate definition names.
Program parse(std::string_view text);

// Canonical form: one statement per line, two-space indentation.
std::string print(const Program& program);
std::string print_statement_head(const Statement& stmt);
std::string print_operand(const Operand& op);
std::string_view relation_name(Relation rel);
std::string_view binop_name(BinOpKind op);

struct Diagnostic {
  enum class Kind {
    kUseBeforeDef,
    kArity,
    kUnknownCallee,
    kDuplicateDefinition,
    kDuplicateParam,
    kNameClash,
    kEmptyBody,
    kNotTail,
    kMisplacedReturn,
  };
  Kind kind;
  std::string procedure;    // "" for the entry body
  std::size_t statement = 0;  // pre-order index within the procedure
  SourceLoc loc;
  std::string message;
};

std::string to_string(const Diagnostic& d);

// Returns an empty collection iff the program is well formed.
std::vector<Diagnostic> validate(const Program& program);

}  // namespace mtsra::uil

#endif  // MTSRA_UIL_HPP_
