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

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <tuple>

#include "mtsra/machine.hpp"

// Exhaustive minimum-load search. It rebuilds the per-statement register
// demands from the statements themselves and enumerates every eviction
// choice, sharing only the liveness annotation with the allocator.
namespace mtsra {
namespace {

constexpr std::uint64_t kInfeasible = std::numeric_limits<std::uint64_t>::max();

struct Event {
  enum class Kind { kNeed, kTemp, kDrop, kDef, kReturn };
  Kind kind;
  std::uint32_t var = 0;      // single-bit mask
  std::uint32_t protect = 0;  // kNeed/kTemp: names that may not be evicted
  std::uint32_t drop = 0;     // kDrop
  bool keep = true;           // kDef: defined name stays live
};

class Oracle {
 public:
  Oracle(const analysis::AnnotatedProcedure& proc, unsigned registers,
         const OracleLimits& limits)
      : registers_(registers) {
    if (!proc.is_entry) throw OracleRefused("oracle takes an entry body");
    if (registers > limits.max_registers) {
      throw OracleRefused("too many registers for exhaustive search");
    }
    if (proc.body.size() > limits.max_statements) {
      throw OracleRefused("too many statements for exhaustive search");
    }
    for (const auto& a : proc.body) lower(a);
    if (ids_.size() > limits.max_variables) {
      throw OracleRefused("too many variables for exhaustive search");
    }
  }

  std::uint64_t solve() {
    std::uint64_t best = search(0, 0, 0);
    if (best == kInfeasible) throw OracleRefused("no eviction sequence fits");
    return best;
  }

 private:
  std::uint32_t bit(const Ident& v) {
    auto [it, inserted] = ids_.emplace(v, ids_.size());
    if (it->second >= 32) throw OracleRefused("too many variables");
    return std::uint32_t{1} << it->second;
  }

  std::uint32_t bits(const analysis::NameSet& names) {
    std::uint32_t m = 0;
    for (const auto& v : names) {
      if (ids_.count(v)) m |= bit(v);
    }
    return m;
  }

  // `regs` are operands that must be in registers, `flex` may stay
  // immediates.
  void demand(const std::vector<uil::Operand>& regs, const std::vector<uil::Operand>& flex) {
    std::uint32_t protect = 0;
    std::vector<std::uint32_t> vars;
    std::size_t temps = 0;
    for (const auto* list : {&regs, &flex}) {
      for (const auto& op : *list) {
        if (op.is_var()) {
          std::uint32_t b = bit(op.var());
          if (!(protect & b)) vars.push_back(b);
          protect |= b;
        }
      }
    }
    for (const auto& op : regs) {
      if (op.is_imm()) ++temps;
    }
    for (auto v : vars) events_.push_back({Event::Kind::kNeed, v, protect});
    for (std::size_t i = 0; i < temps; ++i) {
      events_.push_back({Event::Kind::kTemp, 0, protect});
    }
  }

  void define(const analysis::AnnotatedStatement& a, const Ident& dst) {
    std::uint32_t d = bit(dst);
    events_.push_back({Event::Kind::kDrop, 0, 0, bits(a.ends) | d});
    events_.push_back({Event::Kind::kDef, d, 0, 0, a.live_out.count(dst) > 0});
  }

  void lower(const analysis::AnnotatedStatement& a) {
    const uil::Statement& s = *a.stmt;
    if (const auto* asg = std::get_if<uil::Assign>(&s.node)) {
      if (const auto* op = std::get_if<uil::Operand>(&asg->rhs)) {
        if (op->is_var()) demand({*op}, {});
      } else if (const auto* b = std::get_if<uil::BinaryRhs>(&asg->rhs)) {
        uil::Operand lhs = b->lhs, rhs = b->rhs;
        if (lhs.is_imm() && rhs.is_var() && b->op != uil::BinOpKind::kSub) {
          std::swap(lhs, rhs);
        }
        demand({lhs}, {rhs});
      } else if (const auto* m = std::get_if<uil::MemReadRhs>(&asg->rhs)) {
        demand({m->base}, {m->index});
      } else {
        throw OracleRefused("oracle handles straight-line code without calls");
      }
      define(a, asg->dst);
    } else if (const auto* m = std::get_if<uil::MemWrite>(&s.node)) {
      demand({m->base}, {m->index, m->src});
      events_.push_back({Event::Kind::kDrop, 0, 0, bits(a.ends)});
    } else if (const auto* r = std::get_if<uil::Return>(&s.node)) {
      if (r->value.is_var()) {
        events_.push_back({Event::Kind::kReturn, bit(r->value.var())});
      }
    } else {
      throw OracleRefused("oracle handles straight-line code without calls");
    }
  }

  std::uint64_t search(std::size_t i, std::uint32_t resident, unsigned temps) {
    if (i == events_.size()) return 0;
    auto key = std::make_tuple(i, resident, temps);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const Event& e = events_[i];
    const unsigned used = static_cast<unsigned>(std::popcount(resident)) + temps;
    std::uint64_t best = kInfeasible;
    auto consider = [&](std::uint64_t cost, std::uint64_t rest) {
      if (rest != kInfeasible) best = std::min(best, cost + rest);
    };
    auto each_victim = [&](std::uint32_t candidates, auto fn) {
      for (std::uint32_t c = candidates; c; c &= c - 1) fn(c & (~c + 1));
    };

    switch (e.kind) {
      case Event::Kind::kNeed:
        if (resident & e.var) {
          consider(0, search(i + 1, resident, temps));
        } else if (used < registers_) {
          consider(1, search(i + 1, resident | e.var, temps));
        } else {
          each_victim(resident & ~e.protect, [&](std::uint32_t u) {
            consider(1, search(i + 1, (resident & ~u) | e.var, temps));
          });
        }
        break;
      case Event::Kind::kTemp:
        if (used < registers_) {
          consider(0, search(i + 1, resident, temps + 1));
        } else {
          each_victim(resident & ~e.protect, [&](std::uint32_t u) {
            consider(0, search(i + 1, resident & ~u, temps + 1));
          });
        }
        break;
      case Event::Kind::kDrop:
        consider(0, search(i + 1, resident & ~e.drop, 0));
        break;
      case Event::Kind::kDef: {
        std::uint32_t add = e.keep ? e.var : 0;
        if (used < registers_) {
          consider(0, search(i + 1, resident | add, temps));
        } else {
          each_victim(resident, [&](std::uint32_t u) {
            consider(0, search(i + 1, (resident & ~u) | add, temps));
          });
        }
        break;
      }
      case Event::Kind::kReturn:
        consider((resident & e.var) ? 0 : 1, search(i + 1, resident, temps));
        break;
    }
    memo_[key] = best;
    return best;
  }

  unsigned registers_;
  std::map<Ident, std::size_t> ids_;
  std::vector<Event> events_;
  std::map<std::tuple<std::size_t, std::uint32_t, unsigned>, std::uint64_t> memo_;
};

}  // namespace

std::uint64_t belady_oracle(const analysis::AnnotatedProcedure& straight_line,
                            unsigned registers, const OracleLimits& limits) {
  return Oracle(straight_line, registers, limits).solve();
}

}  // namespace mtsra
