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

#include "mtsra/generator.hpp"

#include <algorithm>
#include <set>

namespace mtsra {
namespace {

using uil::Block;
using uil::Ident;
using uil::Operand;
using uil::Statement;

struct Callee {
  Ident name;
  std::size_t arity;
};

struct Scope {
  std::vector<Ident> defined;  // definitely assigned, in order of first definition
  std::set<Ident> small;       // known to hold a value in [0, heap/2)
};

class Generator {
 public:
  Generator(std::mt19937_64& rng, const GeneratorOptions& opts) : rng_(rng), opts_(opts) {}

  uil::Program run() {
    uil::Program p;
    unsigned defs = opts_.straight_line ? 0 : pick(0, opts_.max_definitions);
    std::vector<Callee> callees;
    for (unsigned i = 0; i < defs; ++i) {
      unsigned arity = pick(0, std::min(opts_.max_params, opts_.max_variables));
      callees.push_back({"p" + std::to_string(i), arity});
    }
    unsigned total = std::max(2u, opts_.max_statements);
    unsigned share = std::max(2u, total / (defs + 1));
    for (unsigned i = 0; i < defs; ++i) {
      uil::Definition def;
      def.name = callees[i].name;
      Scope scope;
      for (std::size_t k = 0; k < callees[i].arity; ++k) {
        def.params.push_back(var_name(k));
        scope.defined.push_back(var_name(k));
      }
      callable_.assign(callees.begin() + i + 1, callees.end());
      budget_ = pick(2, share);
      def.body = block(scope, 0, /*tail=*/true);
      p.definitions.push_back(std::move(def));
    }
    callable_ = callees;
    budget_ = std::max(2u, total - std::min(total - 2, share * defs));
    budget_ = pick(std::min(budget_, 3u), budget_);
    Scope scope;
    p.body = block(scope, 0, /*tail=*/true);
    return p;
  }

 private:
  unsigned pick(unsigned lo, unsigned hi) {
    if (hi <= lo) return lo;
    return std::uniform_int_distribution<unsigned>(lo, hi)(rng_);
  }
  bool chance(unsigned percent) { return pick(1, 100) <= percent; }

  static Ident var_name(std::size_t i) { return "v" + std::to_string(i); }

  uil::Word small_imm() {
    return static_cast<uil::Word>(pick(0, static_cast<unsigned>(opts_.heap_size / 2 - 1)));
  }

  Operand value(const Scope& s) {
    if (!s.defined.empty() && chance(75)) {
      return Operand(s.defined[pick(0, static_cast<unsigned>(s.defined.size() - 1))]);
    }
    return Operand(static_cast<uil::Word>(pick(0, 25)) - 5);
  }

  Operand address_part(const Scope& s) {
    std::vector<Ident> smalls(s.small.begin(), s.small.end());
    if (!smalls.empty() && chance(60)) {
      return Operand(smalls[pick(0, static_cast<unsigned>(smalls.size() - 1))]);
    }
    return Operand(small_imm());
  }

  // A fresh name while below the live target, otherwise an existing one.
  Ident destination(const Scope& s) {
    const bool room = s.defined.size() < opts_.max_variables;
    if (room && (s.defined.size() < opts_.target_live || chance(15))) {
      for (std::size_t i = 0;; ++i) {
        Ident v = var_name(i);
        if (std::find(s.defined.begin(), s.defined.end(), v) == s.defined.end()) return v;
      }
    }
    if (s.defined.empty()) return var_name(0);
    return s.defined[pick(0, static_cast<unsigned>(s.defined.size() - 1))];
  }

  void assigned(Scope& s, const Ident& v, bool small) {
    if (std::find(s.defined.begin(), s.defined.end(), v) == s.defined.end()) {
      s.defined.push_back(v);
    }
    if (small) {
      s.small.insert(v);
    } else {
      s.small.erase(v);
    }
  }

  std::vector<Operand> arguments(const Scope& s, std::size_t n) {
    std::vector<Operand> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(value(s));
    return out;
  }

  uil::Test test(const Scope& s) {
    auto rel = static_cast<uil::Relation>(pick(0, 4));
    return uil::Test{rel, value(s), value(s)};
  }

  Statement simple(Scope& s) {
    Statement st;
    unsigned roll = pick(1, 100);
    if (!callable_.empty() && !opts_.straight_line && roll <= 12) {
      const Callee& c = callable_[pick(0, static_cast<unsigned>(callable_.size() - 1))];
      auto args = arguments(s, c.arity);
      if (chance(70)) {
        Ident dst = destination(s);
        st.node = uil::Assign{dst, uil::CallRhs{c.name, std::move(args)}};
        assigned(s, dst, false);
      } else {
        st.node = uil::Call{c.name, std::move(args)};
      }
      return st;
    }
    if (opts_.allow_memory && roll <= 22) {
      st.node = uil::MemWrite{address_part(s), address_part(s), value(s)};
      return st;
    }
    if (opts_.allow_memory && roll <= 32) {
      Operand base = address_part(s);
      Operand index = address_part(s);
      Ident dst = destination(s);
      st.node = uil::Assign{dst, uil::MemReadRhs{base, index}};
      assigned(s, dst, false);
      return st;
    }
    if (roll <= 50 || s.defined.empty()) {
      const bool small = chance(50);
      uil::Word imm = small ? small_imm() : static_cast<uil::Word>(pick(0, 200)) - 100;
      Ident dst = destination(s);
      st.node = uil::Assign{dst, Operand(imm)};
      assigned(s, dst, small && imm >= 0);
      return st;
    }
    if (roll <= 58) {
      Operand src = value(s);
      Ident dst = destination(s);
      bool small = src.is_var() ? s.small.count(src.var()) > 0
                                : src.imm() >= 0 &&
                                      src.imm() < static_cast<uil::Word>(opts_.heap_size / 2);
      st.node = uil::Assign{dst, src};
      assigned(s, dst, small);
      return st;
    }
    auto op = static_cast<uil::BinOpKind>(pick(0, 2));
    Operand a = value(s);
    Operand b = value(s);
    Ident dst = destination(s);
    st.node = uil::Assign{dst, uil::BinaryRhs{op, a, b}};
    assigned(s, dst, false);
    return st;
  }

  Statement final_statement(Scope& s, unsigned depth) {
    Statement st;
    if (!opts_.straight_line && depth < opts_.max_depth && budget_ >= 4 && chance(25)) {
      return branch(s, depth, /*tail=*/true);
    }
    if (!callable_.empty() && !opts_.straight_line && chance(35)) {
      const Callee& c = callable_[pick(0, static_cast<unsigned>(callable_.size() - 1))];
      st.node = uil::Call{c.name, arguments(s, c.arity)};
      return st;
    }
    st.node = uil::Return{value(s)};
    return st;
  }

  Statement branch(Scope& s, unsigned depth, bool tail) {
    Statement st;
    uil::If node;
    node.test = test(s);
    --budget_;
    unsigned share = budget_ / 2;
    unsigned saved = budget_;
    Scope then_scope = s;
    Scope else_scope = s;
    budget_ = std::max(tail ? 1u : 0u, pick(0, share));
    unsigned then_budget = budget_;
    node.then_branch = block(then_scope, depth + 1, tail);
    budget_ = std::max(tail ? 1u : 0u, pick(0, share));
    unsigned else_budget = budget_;
    node.else_branch = block(else_scope, depth + 1, tail);
    unsigned spent = then_budget + else_budget;
    budget_ = saved > spent ? saved - spent : 0;

    Scope joined;
    for (const auto& v : then_scope.defined) {
      if (std::find(else_scope.defined.begin(), else_scope.defined.end(), v) !=
          else_scope.defined.end()) {
        joined.defined.push_back(v);
        if (then_scope.small.count(v) && else_scope.small.count(v)) joined.small.insert(v);
      }
    }
    s = std::move(joined);
    st.node = std::move(node);
    return st;
  }

  // Emits statements until the budget runs out; a tail block ends in a
  // return, a tail call, or a tail if.
  Block block(Scope& s, unsigned depth, bool tail) {
    Block out;
    while (budget_ > (tail ? 1u : 0u)) {
      if (!opts_.straight_line && depth < opts_.max_depth && budget_ >= 4 && chance(12)) {
        out.push_back(branch(s, depth, /*tail=*/false));
        continue;
      }
      out.push_back(simple(s));
      --budget_;
      if (!tail && chance(20)) break;
    }
    if (tail) {
      out.push_back(final_statement(s, depth));
      if (budget_ > 0) --budget_;
    }
    return out;
  }

  std::mt19937_64& rng_;
  const GeneratorOptions& opts_;
  std::vector<Callee> callable_;
  unsigned budget_ = 0;
};

}  // namespace

uil::Program generate_program(std::mt19937_64& rng, const GeneratorOptions& opts) {
  return Generator(rng, opts).run();
}

GeneratorOptions fuzz_options(std::uint64_t seed) {
  GeneratorOptions o;
  o.target_live = 1 + static_cast<unsigned>(seed % 10);
  return o;
}

}  // namespace mtsra
