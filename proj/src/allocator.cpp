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

#include "mtsra/allocator.hpp"

#include <algorithm>

namespace mtsra {

std::string_view policy_name(Policy p) {
  switch (p) {
    case Policy::kFurthestNextUse: return "furthest";
    case Policy::kLifo: return "lifo";
    case Policy::kFifo: return "fifo";
  }
  return "?";
}

std::optional<Policy> parse_policy(std::string_view name) {
  if (name == "furthest" || name == "furthest-next-use") return Policy::kFurthestNextUse;
  if (name == "lifo") return Policy::kLifo;
  if (name == "fifo") return Policy::kFifo;
  return std::nullopt;
}

Transformed save(const Model& m, std::span<const Ident> vs) {
  Transformed out{m, {}};
  for (const auto& v : vs) {
    if (!out.model.contains(v)) throw ModelFault("save: '" + v + "' is not bound");
    if (out.model.slot_of(v)) continue;
    std::size_t s = out.model.free_slot();
    out.insts.push_back(StoreInst{s, Reg{*out.model.reg_of(v)}});
    out.model = out.model.bind_slot(v, s);
  }
  return out;
}

Ident pick_victim(const Model& m, const std::set<Ident>& protect,
                  const NextUseTable& t, ProgramPoint p, Policy pol) {
  const Ident* best = nullptr;
  unsigned best_reg = 0;
  for (const auto& [v, r] : m.regs()) {
    if (protect.count(v)) continue;
    if (!best) {
      best = &v;
      best_reg = r;
      continue;
    }
    bool better = false;
    switch (pol) {
      case Policy::kFurthestNextUse: {
        auto a = t.next_use(p, v);
        auto b = t.next_use(p, *best);
        better = a > b || (a == b && r < best_reg);
        break;
      }
      case Policy::kLifo:
        better = m.reg_stamp(v) > m.reg_stamp(*best);
        break;
      case Policy::kFifo:
        better = m.reg_stamp(v) < m.reg_stamp(*best);
        break;
    }
    if (better) {
      best = &v;
      best_reg = r;
    }
  }
  if (!best) {
    throw PressureError("every register holds a protected value; no victim in " +
                        m.to_string());
  }
  return *best;
}

namespace {

const NextUseTable kEmptyTable;

struct Acquired {
  Model model;
  unsigned reg;
};

// Finds a register for `who`: the hint, then its preferred register, then
// the lowest free one, and finally a victim's.
Acquired acquire_register(Model m, std::vector<Inst>& out, const Ident& who,
                          const std::set<Ident>& protect, const EvictionContext& ctx,
                          std::optional<unsigned> hint = std::nullopt) {
  auto is_free = [&](unsigned r) { return r < ctx.registers && !m.reg_occupant(r); };
  if (hint && is_free(*hint)) return {m, *hint};
  if (ctx.preferences) {
    auto it = ctx.preferences->find(who);
    if (it != ctx.preferences->end() && is_free(it->second)) return {m, it->second};
  }
  if (auto r = m.free_register(ctx.registers)) return {m, *r};
  const NextUseTable& table = ctx.table ? *ctx.table : kEmptyTable;
  Ident victim = pick_victim(m, protect, table, ctx.point, ctx.policy);
  unsigned r = *m.reg_of(victim);
  Transformed saved = save(m, std::span<const Ident>(&victim, 1));
  out.insert(out.end(), saved.insts.begin(), saved.insts.end());
  return {saved.model.unbind_reg(victim), r};
}

}  // namespace

Transformed load(const Model& m, std::span<const Ident> vs,
                 const std::set<Ident>& protect, const EvictionContext& ctx) {
  std::set<Ident> guard = protect;
  guard.insert(vs.begin(), vs.end());
  Transformed out{m, {}};
  for (const auto& v : vs) {
    if (!out.model.contains(v)) throw ModelFault("load: '" + v + "' is not bound");
    if (out.model.reg_of(v)) continue;
    std::size_t slot = *out.model.slot_of(v);
    Acquired a = acquire_register(out.model, out.insts, v, guard, ctx);
    out.insts.push_back(LoadInst{Reg{a.reg}, slot});
    out.model = a.model.bind_reg(v, a.reg);
  }
  return out;
}

namespace {

using analysis::AnnotatedBlock;
using analysis::AnnotatedProcedure;
using analysis::AnnotatedStatement;

void append(std::vector<Inst>& out, const std::vector<Inst>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

// Operands after preparation: variables are register-resident, and
// immediates that must sit in a register are bound to temporaries.
struct Prepared {
  Model model;
  std::vector<Inst> insts;
  std::vector<uil::Operand> operands;  // same order as requested
  std::set<Ident> temps;
};

class ProcedureAllocator {
 public:
  ProcedureAllocator(const AnnotatedProcedure& proc, const MachineConfig& cfg,
                     const AllocOptions& opts)
      : proc_(proc),
        cfg_(cfg),
        opts_(opts),
        label_prefix_(proc.is_entry ? std::string(kEntryLabel)
                                    : procedure_label(proc.name)) {}

  std::vector<Inst> run(std::size_t code_base) {
    std::vector<Inst> code{LabelDefInst{label_prefix_}};
    Model m;
    if (!proc_.is_entry) {
      std::set<Ident> live = proc_.live_in;
      live.insert(Ident(uil::kReturnAddress));
      m = initial_model(proc_.params, cfg_).restrict_to(live);
    }
    const auto& body = proc_.body;
    for (std::size_t i = 0; i < body.size(); ++i) {
      Ctx ctx = i + 1 == body.size() ? Ctx::kTail : Ctx::kNonTail;
      std::size_t trace_mark = opts_.trace ? opts_.trace->size() : 0;
      TransformResult r = alloc_stmt(body[i], m, ctx);
      append(code, r.insts);
      if (opts_.trace) {
        for (std::size_t k = trace_mark; k < opts_.trace->size(); ++k) {
          (*opts_.trace)[k].code_end = code_base + code.size();
        }
      }
      m = std::move(r.model);
    }
    return code;
  }

  TransformResult alloc_stmt(const AnnotatedStatement& a, const Model& m, Ctx ctx) {
    const uil::Statement& s = *a.stmt;
    if (const auto* node = std::get_if<uil::If>(&s.node)) {
      return alloc_if(a, *node, m, ctx);
    }
    TransformResult r;
    try {
      if (const auto* node = std::get_if<uil::Assign>(&s.node)) {
        r = alloc_assign(a, *node, m);
      } else if (const auto* node = std::get_if<uil::MemWrite>(&s.node)) {
        r = alloc_mem_write(a, *node, m);
      } else if (const auto* node = std::get_if<uil::Call>(&s.node)) {
        r = alloc_call(a, node->callee, node->args, std::nullopt, m, ctx);
      } else if (const auto* node = std::get_if<uil::Return>(&s.node)) {
        r = alloc_return(a, node->value, m);
      }
    } catch (const PressureError& e) {
      rethrow_pressure(a, e);
    }
    record(a, m, r);
    return r;
  }

 private:
  [[noreturn]] void rethrow_pressure(const AnnotatedStatement& a, const PressureError& e) {
    std::string where = proc_.is_entry ? "body" : proc_.name;
    throw PressureError(where + " statement " + std::to_string(a.point) + " " +
                        uil::print_statement_head(*a.stmt) + " needs more than " +
                        std::to_string(cfg_.registers) + " registers: " + e.what());
  }

  void record(const AnnotatedStatement& a, const Model& before, const TransformResult& r,
              std::string text = {}) {
    if (!opts_.trace) return;
    TraceEntry t;
    t.procedure = proc_.name;
    t.point = a.point;
    t.statement = text.empty() ? uil::print_statement_head(*a.stmt) : std::move(text);
    t.before = before.to_string();
    t.after = r.model.to_string();
    t.insts = r.insts;
    opts_.trace->push_back(std::move(t));
  }

  EvictionContext eviction(ProgramPoint p) const {
    return EvictionContext{&proc_.table, p, opts_.policy, cfg_.registers,
                           cfg_.use_preferences ? prefs_ : nullptr};
  }

  std::string new_label() { return label_prefix_ + "." + std::to_string(++labels_); }

  TransformResult alloc_block(const AnnotatedBlock& block, Model m, Ctx ctx) {
    TransformResult out{{}, {}, m};
    for (std::size_t i = 0; i < block.size(); ++i) {
      Ctx c = ctx == Ctx::kTail && i + 1 == block.size() ? Ctx::kTail : Ctx::kNonTail;
      TransformResult r = alloc_stmt(block[i], out.model, c);
      append(out.insts, r.insts);
      out.value = r.value;
      out.model = std::move(r.model);
    }
    return out;
  }

  // `in_reg[i]` says whether operand i must be in a register even when it
  // is an immediate.
  Prepared prepare(const Model& m, std::vector<uil::Operand> ops,
                   const std::vector<bool>& in_reg, ProgramPoint p) {
    Prepared out{m, {}, std::move(ops), {}};
    std::vector<Ident> vars;
    std::size_t temps = 0;
    for (std::size_t i = 0; i < out.operands.size(); ++i) {
      const auto& op = out.operands[i];
      if (op.is_var()) {
        if (std::find(vars.begin(), vars.end(), op.var()) == vars.end()) {
          vars.push_back(op.var());
        }
      } else if (in_reg[i]) {
        ++temps;
      }
    }
    if (vars.size() + temps > cfg_.registers) {
      throw PressureError(std::to_string(vars.size() + temps) +
                          " operands must be in registers at once");
    }
    std::set<Ident> guard(vars.begin(), vars.end());
    Transformed loaded = load(m, vars, guard, eviction(p));
    out.model = std::move(loaded.model);
    out.insts = std::move(loaded.insts);
    for (std::size_t i = 0; i < out.operands.size(); ++i) {
      auto& op = out.operands[i];
      if (op.is_var() || !in_reg[i]) continue;
      Ident temp = "%t" + std::to_string(out.temps.size());
      Acquired acq = acquire_register(out.model, out.insts, temp, guard, eviction(p));
      out.insts.push_back(LoadImmInst{Reg{acq.reg}, op.imm()});
      out.model = acq.model.bind_reg(temp, acq.reg);
      guard.insert(temp);
      out.temps.insert(temp);
      op = uil::Operand(temp);
    }
    return out;
  }

  Reg reg_of(const Model& m, const uil::Operand& op) const {
    auto r = m.reg_of(op.var());
    if (!r) throw ModelFault("'" + op.var() + "' is not in a register");
    return Reg{*r};
  }

  RegOrImm value_of(const Model& m, const uil::Operand& op) const {
    if (op.is_imm()) return op.imm();
    return reg_of(m, op);
  }

  // Binds the assigned name after its operands have been read: drops the
  // ending set and the name's previous binding, then claims a register.
  Model define(const AnnotatedStatement& a, const Ident& dst, Model m,
               std::vector<Inst>& out, unsigned& reg,
               std::vector<std::optional<unsigned>> hints) {
    m = m.drop(a.ends).drop(dst);
    std::optional<unsigned> hint;
    for (auto h : hints) {
      if (h && !m.reg_occupant(*h)) {
        hint = h;
        break;
      }
    }
    Acquired acq = acquire_register(m, out, dst, {}, eviction(a.point), hint);
    reg = acq.reg;
    m = acq.model.bind_reg(dst, acq.reg);
    if (!a.live_out.count(dst)) m = m.drop(dst);
    return m;
  }

  TransformResult alloc_assign(const AnnotatedStatement& a, const uil::Assign& node,
                               const Model& m) {
    if (const auto* call = std::get_if<uil::CallRhs>(&node.rhs)) {
      return alloc_call(a, call->callee, call->args, node.dst, m, Ctx::kNonTail);
    }
    TransformResult out;
    unsigned dst = 0;
    if (const auto* op = std::get_if<uil::Operand>(&node.rhs)) {
      if (op->is_imm()) {
        out.model = define(a, node.dst, m, out.insts, dst, {});
        out.insts.push_back(LoadImmInst{Reg{dst}, op->imm()});
        return out;
      }
      Prepared p = prepare(m, {*op}, {true}, a.point);
      out.insts = std::move(p.insts);
      Reg src = reg_of(p.model, p.operands[0]);
      out.model = define(a, node.dst, p.model, out.insts, dst, {src.index});
      if (src.index != dst) out.insts.push_back(MoveInst{Reg{dst}, src});
      return out;
    }
    if (const auto* bin = std::get_if<uil::BinaryRhs>(&node.rhs)) {
      uil::Operand lhs = bin->lhs;
      uil::Operand rhs = bin->rhs;
      const bool commutes = bin->op != uil::BinOpKind::kSub;
      if (lhs.is_imm() && rhs.is_var() && commutes) std::swap(lhs, rhs);
      Prepared p = prepare(m, {lhs, rhs}, {true, false}, a.point);
      out.insts = std::move(p.insts);
      Reg ra = reg_of(p.model, p.operands[0]);
      RegOrImm rb = value_of(p.model, p.operands[1]);
      std::vector<std::optional<unsigned>> hints{ra.index};
      if (const auto* r = std::get_if<Reg>(&rb)) hints.push_back(r->index);
      Model before_def = p.model.drop(p.temps);
      out.model = define(a, node.dst, before_def, out.insts, dst, hints);
      out.insts.push_back(BinOpInst{bin->op, Reg{dst}, ra, rb});
      return out;
    }
    const auto& mem = std::get<uil::MemReadRhs>(node.rhs);
    Prepared p = prepare(m, {mem.base, mem.index}, {true, false}, a.point);
    out.insts = std::move(p.insts);
    Reg base = reg_of(p.model, p.operands[0]);
    RegOrImm index = value_of(p.model, p.operands[1]);
    std::vector<std::optional<unsigned>> hints{base.index};
    if (const auto* r = std::get_if<Reg>(&index)) hints.push_back(r->index);
    out.model = define(a, node.dst, p.model.drop(p.temps), out.insts, dst, hints);
    out.insts.push_back(MemLoadInst{Reg{dst}, base, index});
    return out;
  }

  TransformResult alloc_mem_write(const AnnotatedStatement& a, const uil::MemWrite& node,
                                  const Model& m) {
    Prepared p = prepare(m, {node.base, node.index, node.src}, {true, false, false},
                         a.point);
    TransformResult out;
    out.insts = std::move(p.insts);
    out.insts.push_back(MemStoreInst{reg_of(p.model, p.operands[0]),
                                     value_of(p.model, p.operands[1]),
                                     value_of(p.model, p.operands[2])});
    out.model = p.model.drop(p.temps).drop(a.ends);
    return out;
  }

  TransformResult alloc_if(const AnnotatedStatement& a, const uil::If& node,
                           const Model& m, Ctx ctx) {
    Cond cond = cond_of(node.test.rel);
    uil::Operand lhs = node.test.lhs;
    uil::Operand rhs = node.test.rhs;
    if (lhs.is_imm() && rhs.is_var()) {
      std::swap(lhs, rhs);
      cond = swap_operands(cond);
    }
    TransformResult head;
    std::string else_label = new_label();
    try {
      Prepared p = prepare(m, {lhs, rhs}, {true, false}, a.point);
      head.insts = std::move(p.insts);
      head.insts.push_back(CondJumpInst{negate(cond), reg_of(p.model, p.operands[0]),
                                        value_of(p.model, p.operands[1]), else_label});
      head.model = p.model.drop(p.temps).drop(a.ends);
    } catch (const PressureError& e) {
      rethrow_pressure(a, e);
    }
    record(a, m, head);

    Model then_in = head.model.drop(a.then_drop);
    Model else_in = head.model.drop(a.else_drop);
    TransformResult out;
    out.insts = std::move(head.insts);

    if (ctx == Ctx::kTail) {
      TransformResult t = alloc_block(a.then_block, then_in, Ctx::kTail);
      TransformResult e = alloc_block(a.else_block, else_in, Ctx::kTail);
      append(out.insts, t.insts);
      out.insts.push_back(LabelDefInst{else_label});
      append(out.insts, e.insts);
      return out;
    }

    TransformResult t = alloc_block(a.then_block, then_in, Ctx::kNonTail);
    const std::map<Ident, unsigned> then_regs = t.model.regs();
    const auto* saved_prefs = prefs_;
    prefs_ = &then_regs;
    TransformResult e = alloc_block(a.else_block, else_in, Ctx::kNonTail);
    prefs_ = saved_prefs;

    // The then-branch conforms to the else-branch's final model.
    Model target = e.model.restrict_to(a.live_out);
    Model source = t.model.restrict_to(a.live_out);
    MoveMapping moves;
    for (const auto& v : target.names()) {
      if (!source.contains(v)) {
        throw ModelFault("'" + v + "' is live at a join but unbound in the then-branch");
      }
      Location from = source.whereis(v);
      if (auto r = target.reg_of(v)) moves.emplace_back(from, Location::reg(*r));
      if (auto s = target.slot_of(v)) {
        Location to = Location::slot(*s);
        moves.emplace_back(source.slot_of(v) == s ? to : from, to);
      }
    }
    Transformed merge = shuffle(source, moves, cfg_.registers);
    if (opts_.trace) {
      TransformResult joined{merge.insts, {}, target};
      record(a, source, joined, "(join " + uil::print_statement_head(*a.stmt) + ")");
    }

    std::string end_label = new_label();
    append(out.insts, t.insts);
    append(out.insts, merge.insts);
    out.insts.push_back(JumpInst{end_label});
    out.insts.push_back(LabelDefInst{else_label});
    append(out.insts, e.insts);
    out.insts.push_back(LabelDefInst{end_label});
    out.model = target;
    return out;
  }

  Location argument_home(std::size_t i, std::size_t frame_base) const {
    if (i < cfg_.arg_regs.size()) return Location::reg(cfg_.arg_regs[i]);
    return Location::slot(frame_base + i - cfg_.arg_regs.size());
  }

  void place_arguments(const Model& m, const std::vector<uil::Operand>& args,
                       std::size_t frame_base, MoveMapping& moves,
                       std::vector<ConstantMove>& constants) const {
    for (std::size_t i = 0; i < args.size(); ++i) {
      Location home = argument_home(i, frame_base);
      if (args[i].is_var()) {
        moves.emplace_back(m.whereis(args[i].var()), home);
      } else {
        constants.push_back(ConstantMove{home, args[i].imm()});
      }
    }
  }

  TransformResult alloc_call(const AnnotatedStatement& a, const Ident& callee,
                             const std::vector<uil::Operand>& args,
                             std::optional<Ident> dst, const Model& m, Ctx ctx) {
    TransformResult out;
    MoveMapping moves;
    std::vector<ConstantMove> constants;

    if (ctx == Ctx::kTail && !proc_.is_entry) {
      place_arguments(m, args, 0, moves, constants);
      const Ident ret(uil::kReturnAddress);
      moves.emplace_back(m.whereis(ret), Location::reg(cfg_.ret_addr_reg));
      Transformed sh = shuffle(m, moves, cfg_.registers, constants);
      out.insts = std::move(sh.insts);
      out.insts.push_back(JumpInst{procedure_label(callee)});
      return out;
    }

    std::set<Ident> lives = m.drop(a.ends).names();
    if (dst) lives.erase(*dst);

    // Compact call-lives into fv0..fv(k-1), keeping those already there.
    const std::size_t k = lives.size();
    std::map<Ident, std::size_t> home;
    std::set<std::size_t> claimed;
    for (const auto& v : lives) {
      if (auto s = m.slot_of(v); s && *s < k && claimed.insert(*s).second) home[v] = *s;
    }
    std::size_t next = 0;
    for (const auto& v : lives) {
      if (home.count(v)) continue;
      while (claimed.count(next)) ++next;
      claimed.insert(next);
      home[v] = next;
    }
    for (const auto& [v, s] : home) {
      Location to = Location::slot(s);
      moves.emplace_back(m.slot_of(v) == s ? to : m.whereis(v), to);
    }
    place_arguments(m, args, k, moves, constants);
    std::string return_label = new_label();
    constants.push_back(ConstantMove{Location::reg(cfg_.ret_addr_reg), return_label});

    Transformed sh = shuffle(m, moves, cfg_.registers, constants);
    out.insts = std::move(sh.insts);
    out.insts.push_back(FrameAdjustInst{true, k});
    out.insts.push_back(JumpInst{procedure_label(callee)});
    out.insts.push_back(LabelDefInst{return_label});
    out.insts.push_back(FrameAdjustInst{false, k});

    for (const auto& [v, s] : home) out.model = out.model.bind_slot(v, s);
    if (dst && a.live_out.count(*dst)) {
      out.model = out.model.bind_reg(*dst, cfg_.ret_val_reg);
    }
    if (proc_.is_entry && ctx == Ctx::kTail) out.insts.push_back(HaltInst{});
    return out;
  }

  TransformResult alloc_return(const AnnotatedStatement& a, const uil::Operand& value,
                               const Model& m) {
    (void)a;
    MoveMapping moves;
    std::vector<ConstantMove> constants;
    const Location rv = Location::reg(cfg_.ret_val_reg);
    if (value.is_var()) {
      moves.emplace_back(m.whereis(value.var()), rv);
    } else {
      constants.push_back(ConstantMove{rv, value.imm()});
    }
    if (!proc_.is_entry) {
      moves.emplace_back(m.whereis(Ident(uil::kReturnAddress)),
                         Location::reg(cfg_.ret_addr_reg));
    }
    Transformed sh = shuffle(m, moves, cfg_.registers, constants);
    TransformResult out;
    out.insts = std::move(sh.insts);
    if (proc_.is_entry) {
      out.insts.push_back(HaltInst{});
    } else {
      out.insts.push_back(JumpInst{Reg{cfg_.ret_addr_reg}});
    }
    out.value = rv;
    return out;
  }

  const AnnotatedProcedure& proc_;
  const MachineConfig& cfg_;
  const AllocOptions& opts_;
  std::string label_prefix_;
  unsigned labels_ = 0;
  const std::map<Ident, unsigned>* prefs_ = nullptr;
};

}  // namespace

std::vector<Inst> alloc_procedure(const analysis::AnnotatedProcedure& proc,
                                  const MachineConfig& cfg, const AllocOptions& opts) {
  cfg.check();
  return ProcedureAllocator(proc, cfg, opts).run(0);
}

TargetProgram alloc_program(const analysis::AnnotatedProgram& p,
                            const MachineConfig& cfg, const AllocOptions& opts) {
  cfg.check();
  TargetProgram out;
  auto entry = ProcedureAllocator(p.entry, cfg, opts).run(0);
  append(out.code, entry);
  for (const auto& def : p.definitions) {
    auto code = ProcedureAllocator(def, cfg, opts).run(out.code.size());
    append(out.code, code);
  }
  return out;
}

}  // namespace mtsra
