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

#include <map>
#include <optional>

#include "mtsra/machine.hpp"

namespace mtsra {
namespace {

using uil::Block;

struct Cursor {
  const Block* block;
  std::size_t next;
};

struct Frame {
  std::map<Ident, Word> env;
  std::vector<Cursor> cursors;
  std::optional<Ident> result;  // where the caller wants the value
};

class Interpreter {
 public:
  Interpreter(const uil::Program& p, std::span<const Word> heap_init)
      : program_(p), heap_(heap_init.begin(), heap_init.end()) {}

  // Runs to completion, or until the entry frame has executed `stop_after`
  // top-level statements.
  Observation run(std::uint64_t fuel, std::optional<std::size_t> stop_after = {}) {
    frames_.push_back(Frame{{}, {Cursor{&program_.body, 0}}, std::nullopt});
    std::uint64_t steps = 0;
    for (;;) {
      Frame& f = frames_.back();
      while (!f.cursors.empty() && f.cursors.back().next >= f.cursors.back().block->size()) {
        f.cursors.pop_back();
      }
      if (stop_after && frames_.size() == 1 && f.cursors.size() == 1 &&
          f.cursors[0].next >= *stop_after) {
        return obs_;
      }
      if (f.cursors.empty()) {
        throw std::logic_error("procedure body ended without a return");
      }
      if (steps++ >= fuel) {
        obs_.outcome = Outcome::kOutOfFuel;
        return obs_;
      }
      Cursor& c = f.cursors.back();
      const uil::Statement& s = (*c.block)[c.next++];
      if (!execute(s)) return obs_;
    }
  }

  const std::map<Ident, Word>& entry_env() const { return frames_.front().env; }

 private:
  Word value(const uil::Operand& op) {
    if (op.is_imm()) return op.imm();
    const auto& env = frames_.back().env;
    auto it = env.find(op.var());
    if (it == env.end()) throw std::logic_error("unbound variable " + op.var());
    return it->second;
  }

  Word* cell(Word base, Word index) {
    Word addr = static_cast<Word>(static_cast<std::uint64_t>(base) +
                                  static_cast<std::uint64_t>(index));
    if (addr < 0 || static_cast<std::uint64_t>(addr) >= heap_.size()) {
      obs_.outcome = Outcome::kHeapFault;
      return nullptr;
    }
    return &heap_[static_cast<std::size_t>(addr)];
  }

  static Word arith(uil::BinOpKind op, Word a, Word b) {
    auto ua = static_cast<std::uint64_t>(a);
    auto ub = static_cast<std::uint64_t>(b);
    switch (op) {
      case uil::BinOpKind::kAdd: return static_cast<Word>(ua + ub);
      case uil::BinOpKind::kSub: return static_cast<Word>(ua - ub);
      case uil::BinOpKind::kMul: return static_cast<Word>(ua * ub);
    }
    return 0;
  }

  static bool test(uil::Relation rel, Word a, Word b) {
    switch (rel) {
      case uil::Relation::kLt: return a < b;
      case uil::Relation::kLe: return a <= b;
      case uil::Relation::kEq: return a == b;
      case uil::Relation::kGe: return a >= b;
      case uil::Relation::kGt: return a > b;
    }
    return false;
  }

  // True when the current frame has nothing left to run after this point.
  bool at_frame_end() {
    Frame& f = frames_.back();
    for (const auto& c : f.cursors) {
      if (c.next < c.block->size()) return false;
    }
    return true;
  }

  void invoke(const Ident& callee, const std::vector<uil::Operand>& args,
              std::optional<Ident> result, bool tail) {
    const uil::Definition* def = program_.find(callee);
    if (!def) throw std::logic_error("unknown procedure " + callee);
    Frame callee_frame;
    for (std::size_t i = 0; i < args.size(); ++i) {
      callee_frame.env[def->params[i]] = value(args[i]);
    }
    callee_frame.cursors.push_back(Cursor{&def->body, 0});
    if (tail) {
      callee_frame.result = frames_.back().result;
      frames_.back() = std::move(callee_frame);
    } else {
      callee_frame.result = std::move(result);
      frames_.push_back(std::move(callee_frame));
    }
  }

  bool execute(const uil::Statement& s) {
    Frame& f = frames_.back();
    if (const auto* a = std::get_if<uil::Assign>(&s.node)) {
      if (const auto* op = std::get_if<uil::Operand>(&a->rhs)) {
        f.env[a->dst] = value(*op);
      } else if (const auto* b = std::get_if<uil::BinaryRhs>(&a->rhs)) {
        f.env[a->dst] = arith(b->op, value(b->lhs), value(b->rhs));
      } else if (const auto* m = std::get_if<uil::MemReadRhs>(&a->rhs)) {
        Word* c = cell(value(m->base), value(m->index));
        if (!c) return false;
        f.env[a->dst] = *c;
      } else if (const auto* call = std::get_if<uil::CallRhs>(&a->rhs)) {
        invoke(call->callee, call->args, a->dst, false);
      }
    } else if (const auto* m = std::get_if<uil::MemWrite>(&s.node)) {
      Word base = value(m->base);
      Word index = value(m->index);
      Word v = value(m->src);
      Word* c = cell(base, index);
      if (!c) return false;
      *c = v;
      obs_.writes.emplace_back(static_cast<Word>(static_cast<std::uint64_t>(base) +
                                                 static_cast<std::uint64_t>(index)),
                               v);
    } else if (const auto* i = std::get_if<uil::If>(&s.node)) {
      bool taken = test(i->test.rel, value(i->test.lhs), value(i->test.rhs));
      f.cursors.push_back(Cursor{taken ? &i->then_branch : &i->else_branch, 0});
    } else if (const auto* c = std::get_if<uil::Call>(&s.node)) {
      invoke(c->callee, c->args, std::nullopt, at_frame_end());
    } else if (const auto* r = std::get_if<uil::Return>(&s.node)) {
      Word v = value(r->value);
      Frame done = std::move(frames_.back());
      frames_.pop_back();
      if (frames_.empty()) {
        obs_.outcome = Outcome::kReturned;
        obs_.value = v;
        frames_.push_back(std::move(done));
        return false;
      }
      if (done.result) frames_.back().env[*done.result] = v;
    }
    return true;
  }

  const uil::Program& program_;
  std::vector<Word> heap_;
  std::vector<Frame> frames_;
  Observation obs_;
};

}  // namespace

Observation run_uil(const uil::Program& p, std::span<const Word> heap_init,
                    std::uint64_t fuel) {
  return Interpreter(p, heap_init).run(fuel);
}

std::map<Ident, Word> uil_entry_environment(const uil::Program& p,
                                            std::span<const Word> heap_init,
                                            std::size_t n) {
  Interpreter interp(p, heap_init);
  interp.run(kDefaultFuel, n);
  return interp.entry_env();
}

}  // namespace mtsra
