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

#include "json.hpp"
#include "mtsra/machine.hpp"

namespace mtsra {

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kReturned: return "returned";
    case Outcome::kHeapFault: return "heap-fault";
    case Outcome::kOutOfFuel: return "out-of-fuel";
  }
  return "?";
}

std::string to_string(const Observation& o) {
  std::string s = std::string(outcome_name(o.outcome)) + " value=" +
                  std::to_string(o.value) + " writes=[";
  for (std::size_t i = 0; i < o.writes.size(); ++i) {
    s += (i ? " " : "") + std::string("(") + std::to_string(o.writes[i].first) + "," +
         std::to_string(o.writes[i].second) + ")";
  }
  return s + "]";
}

TrafficCounts static_traffic(const std::vector<Inst>& code) {
  TrafficCounts c;
  for (const auto& inst : code) {
    if (std::holds_alternative<LoadInst>(inst)) ++c.loads;
    if (std::holds_alternative<StoreInst>(inst)) ++c.stores;
    if (std::holds_alternative<MoveInst>(inst)) ++c.moves;
  }
  return c;
}

std::string stats_json(const TrafficStats& s, const Observation& o) {
  nlohmann::ordered_json j;
  j["outcome"] = outcome_name(o.outcome);
  j["return_value"] = o.value;
  j["heap_writes"] = o.writes.size();
  j["instructions"] = s.instructions;
  j["static_loads"] = s.static_counts.loads;
  j["static_stores"] = s.static_counts.stores;
  j["static_moves"] = s.static_counts.moves;
  j["dynamic_loads"] = s.dynamic_counts.loads;
  j["dynamic_stores"] = s.dynamic_counts.stores;
  j["dynamic_moves"] = s.dynamic_counts.moves;
  j["steps"] = s.steps;
  j["calls"] = s.calls;
  j["unbalanced_calls"] = s.unbalanced_calls;
  return j.dump(2);
}

Word MachineState::slot(std::size_t i) const {
  std::size_t at = fp + i;
  return at < stack.size() ? stack[at] : 0;
}

namespace {

constexpr std::size_t kMaxStack = std::size_t{1} << 22;

Word wrap_add(Word a, Word b) {
  return static_cast<Word>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
Word wrap_sub(Word a, Word b) {
  return static_cast<Word>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
Word wrap_mul(Word a, Word b) {
  return static_cast<Word>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

class Simulator {
 public:
  Simulator(const TargetProgram& prog, const MachineConfig& cfg,
            std::span<const Word> heap_init)
      : code_(prog.code), cfg_(cfg) {
    state_.regs.assign(cfg.registers, 0);
    state_.heap.assign(heap_init.begin(), heap_init.end());
    for (std::size_t i = 0; i < code_.size(); ++i) {
      if (const auto* l = std::get_if<LabelDefInst>(&code_[i])) {
        if (!label_pos_.emplace(l->label, i).second) {
          throw MachineFault("duplicate label " + l->label);
        }
        label_ids_.emplace(l->label, label_names_.size());
        label_names_.push_back(l->label);
      }
    }
  }

  RunResult run(std::uint64_t fuel, const StepHook& hook) {
    RunResult out;
    out.stats.instructions = code_.size();
    out.stats.static_counts = static_traffic(code_);
    stats_ = &out.stats;
    obs_ = &out.observation;
    for (;;) {
      if (out.stats.steps >= fuel) {
        out.observation.outcome = Outcome::kOutOfFuel;
        return out;
      }
      if (state_.pc >= code_.size()) {
        throw MachineFault("execution ran past the end of the program");
      }
      if (hook) hook(state_);
      ++out.stats.steps;
      if (!step()) return out;
    }
  }

 private:
  Word& reg(Reg r) {
    if (r.index >= state_.regs.size()) {
      throw MachineFault("register r" + std::to_string(r.index) + " out of range");
    }
    return state_.regs[r.index];
  }

  Word value(const RegOrImm& v) {
    if (const auto* r = std::get_if<Reg>(&v)) return reg(*r);
    return std::get<Word>(v);
  }

  Word& slot(std::size_t i) {
    std::size_t at = state_.fp + i;
    if (at >= kMaxStack) throw MachineFault("stack overflow at fv" + std::to_string(i));
    if (at >= state_.stack.size()) state_.stack.resize(at + 1, 0);
    return state_.stack[at];
  }

  std::size_t target(const std::string& label) const {
    auto it = label_pos_.find(label);
    if (it == label_pos_.end()) throw MachineFault("unknown label " + label);
    return it->second;
  }

  // Returns the heap cell, or null (after recording the fault) when the
  // address is out of range.
  Word* heap(Word base, Word index) {
    Word addr = wrap_add(base, index);
    if (addr < 0 || static_cast<std::uint64_t>(addr) >= state_.heap.size()) {
      obs_->outcome = Outcome::kHeapFault;
      return nullptr;
    }
    return &state_.heap[static_cast<std::size_t>(addr)];
  }

  // Executes one instruction; false when the machine stops.
  bool step() {
    const Inst& inst = code_[state_.pc];
    std::size_t next = state_.pc + 1;
    if (const auto* i = std::get_if<MoveInst>(&inst)) {
      reg(i->dst) = reg(i->src);
      ++stats_->dynamic_counts.moves;
    } else if (const auto* i = std::get_if<LoadImmInst>(&inst)) {
      reg(i->dst) = i->imm;
    } else if (const auto* i = std::get_if<LoadInst>(&inst)) {
      reg(i->dst) = slot(i->slot);
      ++stats_->dynamic_counts.loads;
    } else if (const auto* i = std::get_if<StoreInst>(&inst)) {
      slot(i->slot) = reg(i->src);
      ++stats_->dynamic_counts.stores;
    } else if (const auto* i = std::get_if<BinOpInst>(&inst)) {
      Word a = reg(i->a);
      Word b = value(i->b);
      switch (i->op) {
        case uil::BinOpKind::kAdd: reg(i->dst) = wrap_add(a, b); break;
        case uil::BinOpKind::kSub: reg(i->dst) = wrap_sub(a, b); break;
        case uil::BinOpKind::kMul: reg(i->dst) = wrap_mul(a, b); break;
      }
    } else if (const auto* i = std::get_if<MemLoadInst>(&inst)) {
      Word* cell = heap(reg(i->base), value(i->index));
      if (!cell) return false;
      reg(i->dst) = *cell;
    } else if (const auto* i = std::get_if<MemStoreInst>(&inst)) {
      Word v = value(i->src);
      Word addr = wrap_add(reg(i->base), value(i->index));
      Word* cell = heap(reg(i->base), value(i->index));
      if (!cell) return false;
      *cell = v;
      obs_->writes.emplace_back(addr, v);
    } else if (const auto* i = std::get_if<CondJumpInst>(&inst)) {
      if (holds(i->cond, reg(i->a), value(i->b))) next = target(i->label);
    } else if (const auto* i = std::get_if<JumpInst>(&inst)) {
      if (const auto* r = std::get_if<Reg>(&i->target)) {
        Word id = reg(*r);
        if (id < 0 || static_cast<std::size_t>(id) >= label_names_.size()) {
          throw MachineFault("indirect jump to non-label value " + std::to_string(id));
        }
        next = label_pos_.at(label_names_[static_cast<std::size_t>(id)]);
      } else {
        next = target(std::get<std::string>(i->target));
      }
    } else if (const auto* i = std::get_if<LoadLabelInst>(&inst)) {
      auto it = label_ids_.find(i->label);
      if (it == label_ids_.end()) throw MachineFault("unknown label " + i->label);
      reg(i->dst) = static_cast<Word>(it->second);
    } else if (const auto* i = std::get_if<FrameAdjustInst>(&inst)) {
      if (i->advance) {
        frames_.push_back(state_.fp);
        state_.fp += i->slots;
      } else {
        if (state_.fp < i->slots) throw MachineFault("frame pointer underflow");
        state_.fp -= i->slots;
        if (!frames_.empty()) {
          ++stats_->calls;
          if (frames_.back() != state_.fp) ++stats_->unbalanced_calls;
          frames_.pop_back();
        }
      }
    } else if (std::holds_alternative<HaltInst>(inst)) {
      obs_->outcome = Outcome::kReturned;
      obs_->value = reg(Reg{cfg_.ret_val_reg});
      return false;
    }
    state_.pc = next;
    return true;
  }

  const std::vector<Inst>& code_;
  const MachineConfig& cfg_;
  MachineState state_;
  std::map<std::string, std::size_t> label_pos_;
  std::map<std::string, std::size_t> label_ids_;
  std::vector<std::string> label_names_;
  std::vector<std::size_t> frames_;
  TrafficStats* stats_ = nullptr;
  Observation* obs_ = nullptr;
};

}  // namespace

RunResult run_target(const TargetProgram& prog, const MachineConfig& cfg,
                     std::span<const Word> heap_init, std::uint64_t fuel,
                     const StepHook& hook) {
  return Simulator(prog, cfg, heap_init).run(fuel, hook);
}

}  // namespace mtsra
