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

#include <cctype>
#include <charconv>
#include <optional>
#include <set>

#include "mtsra/uil.hpp"

namespace mtsra::uil {
namespace {

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  SourceLoc loc;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExpr read_top() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(here(), "empty input");
    SExpr e = read();
    skip_space();
    if (pos_ < text_.size()) {
      throw ParseError(here(), "unexpected text after program");
    }
    return e;
  }

 private:
  SourceLoc here() const { return {line_, col_}; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(here(), "unexpected end of input");
    SExpr e;
    e.loc = here();
    char c = text_[pos_];
    if (c == ')') throw ParseError(here(), "unexpected ')'");
    if (c == '(') {
      advance();
      e.is_list = true;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) {
          throw ParseError(e.loc, "unterminated list");
        }
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    while (pos_ < text_.size()) {
      c = text_[pos_];
      if (c == '(' || c == ')' || c == ';' ||
          std::isspace(static_cast<unsigned char>(c))) {
        break;
      }
      e.atom.push_back(c);
      advance();
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string, std::less<>> kKeywords = {
    "letrec", "lambda", "set!", "mset!", "mref", "if", "begin", "return"};

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
    return false;
  }
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

std::optional<Word> as_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t digits = s[0] == '-' ? 1 : 0;
  if (digits == s.size()) return std::nullopt;
  for (std::size_t i = digits; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
  }
  Word value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return value;
}

class Builder {
 public:
  Program program(const SExpr& e) {
    if (!e.is_list || e.items.size() < 2 || !is_atom(e.items[0], "letrec")) {
      throw ParseError(e.loc, "expected (letrec (definitions...) statements...)");
    }
    const SExpr& defs = e.items[1];
    if (!defs.is_list) throw ParseError(defs.loc, "expected definition list");
    Program p;
    std::set<std::string> seen;
    for (const auto& d : defs.items) {
      Definition def = definition(d);
      if (!seen.insert(def.name).second) {
        throw ParseError(d.loc, "duplicate definition '" + def.name + "'");
      }
      p.definitions.push_back(std::move(def));
    }
    p.body = block(e.items, 2);
    return p;
  }

 private:
  static bool is_atom(const SExpr& e, std::string_view s) {
    return !e.is_list && e.atom == s;
  }

  Ident ident(const SExpr& e) {
    if (e.is_list) throw ParseError(e.loc, "expected identifier");
    if (e.atom == kReturnAddress) {
      throw ParseError(e.loc, "'RET' is reserved");
    }
    if (!is_identifier(e.atom) || kKeywords.count(e.atom)) {
      throw ParseError(e.loc, "invalid identifier '" + e.atom + "'");
    }
    return e.atom;
  }

  Operand operand(const SExpr& e) {
    if (e.is_list) throw ParseError(e.loc, "expected variable or integer");
    if (auto n = as_number(e.atom)) return Operand(*n);
    if (!e.atom.empty() && (e.atom[0] == '-' || std::isdigit(static_cast<unsigned char>(e.atom[0])))) {
      throw ParseError(e.loc, "integer literal out of range: " + e.atom);
    }
    return Operand(ident(e));
  }

  std::vector<Operand> operands(const SExpr& e, std::size_t from) {
    std::vector<Operand> out;
    for (std::size_t i = from; i < e.items.size(); ++i) {
      out.push_back(operand(e.items[i]));
    }
    return out;
  }

  Definition definition(const SExpr& e) {
    // (name (lambda (params...) stmt...))
    if (!e.is_list || e.items.size() != 2) {
      throw ParseError(e.loc, "expected (name (lambda (params...) body...))");
    }
    Definition def;
    def.loc = e.loc;
    def.name = ident(e.items[0]);
    const SExpr& lam = e.items[1];
    if (!lam.is_list || lam.items.size() < 2 || !is_atom(lam.items[0], "lambda") ||
        !lam.items[1].is_list) {
      throw ParseError(lam.loc, "expected (lambda (params...) body...)");
    }
    for (const auto& p : lam.items[1].items) def.params.push_back(ident(p));
    def.body = block(lam.items, 2);
    return def;
  }

  Block block(const std::vector<SExpr>& items, std::size_t from) {
    Block out;
    for (std::size_t i = from; i < items.size(); ++i) {
      out.push_back(statement(items[i]));
    }
    return out;
  }

  Block begin_block(const SExpr& e) {
    if (!e.is_list || e.items.empty() || !is_atom(e.items[0], "begin")) {
      throw ParseError(e.loc, "expected (begin statements...)");
    }
    return block(e.items, 1);
  }

  static std::optional<BinOpKind> binop(const SExpr& head) {
    if (head.is_list) return std::nullopt;
    if (head.atom == "+") return BinOpKind::kAdd;
    if (head.atom == "-") return BinOpKind::kSub;
    if (head.atom == "*") return BinOpKind::kMul;
    return std::nullopt;
  }

  static std::optional<Relation> relation(const SExpr& head) {
    if (head.is_list) return std::nullopt;
    if (head.atom == "<") return Relation::kLt;
    if (head.atom == "<=") return Relation::kLe;
    if (head.atom == "=") return Relation::kEq;
    if (head.atom == ">=") return Relation::kGe;
    if (head.atom == ">") return Relation::kGt;
    return std::nullopt;
  }

  Rhs rhs(const SExpr& e) {
    if (!e.is_list) return operand(e);
    if (e.items.empty()) throw ParseError(e.loc, "empty expression");
    const SExpr& head = e.items[0];
    if (auto op = binop(head)) {
      if (e.items.size() != 3) {
        throw ParseError(e.loc, "binary operation takes two operands");
      }
      return BinaryRhs{*op, operand(e.items[1]), operand(e.items[2])};
    }
    if (is_atom(head, "mref")) {
      if (e.items.size() != 3) throw ParseError(e.loc, "mref takes base and index");
      return MemReadRhs{operand(e.items[1]), operand(e.items[2])};
    }
    return CallRhs{ident(head), operands(e, 1)};
  }

  Statement statement(const SExpr& e) {
    Statement s;
    s.loc = e.loc;
    if (!e.is_list || e.items.empty()) {
      throw ParseError(e.loc, "expected a statement");
    }
    const SExpr& head = e.items[0];
    if (is_atom(head, "set!")) {
      if (e.items.size() != 3) throw ParseError(e.loc, "set! takes a name and a value");
      s.node = Assign{ident(e.items[1]), rhs(e.items[2])};
    } else if (is_atom(head, "mset!")) {
      if (e.items.size() != 4) {
        throw ParseError(e.loc, "mset! takes base, index and source");
      }
      s.node = MemWrite{operand(e.items[1]), operand(e.items[2]),
                        operand(e.items[3])};
    } else if (is_atom(head, "if")) {
      if (e.items.size() != 4) {
        throw ParseError(e.loc, "if takes a test and two (begin ...) branches");
      }
      const SExpr& t = e.items[1];
      std::optional<Relation> rel;
      if (t.is_list && t.items.size() == 3) rel = relation(t.items[0]);
      if (!rel) throw ParseError(t.loc, "expected a test (rel a b)");
      s.node = If{Test{*rel, operand(t.items[1]), operand(t.items[2])},
                  begin_block(e.items[2]), begin_block(e.items[3])};
    } else if (is_atom(head, "return")) {
      if (e.items.size() != 2) throw ParseError(e.loc, "return takes one value");
      s.node = Return{operand(e.items[1])};
    } else {
      s.node = Call{ident(head), operands(e, 1)};
    }
    return s;
  }
};

}  // namespace

Program parse(std::string_view text) {
  Reader reader(text);
  return Builder().program(reader.read_top());
}

}  // namespace mtsra::uil
