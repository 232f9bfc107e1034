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

#include "mtsra/analysis.hpp"

#include <sstream>

namespace mtsra::analysis {
namespace {

using NextUse = std::map<Ident, ProgramPoint>;

void add_operand(NameSet& out, const uil::Operand& op) {
  if (op.is_var()) out.insert(op.var());
}

NameSet keys(const NextUse& m) {
  NameSet out;
  for (const auto& [v, p] : m) out.insert(v);
  return out;
}

NameSet minus(const NameSet& a, const NameSet& b) {
  NameSet out;
  for (const auto& v : a) {
    if (!b.count(v)) out.insert(v);
  }
  return out;
}

class Annotator {
 public:
  Annotator(AnnotatedProcedure& proc) : proc_(proc) {}

  void run(const uil::Block& body) {
    proc_.body = number(body);
    proc_.num_points = next_point_;
    proc_.table = NextUseTable(next_point_);
    NextUse in = backward(proc_.body, NextUse{}, /*tail=*/true);
    proc_.live_in = keys(in);
  }

 private:
  AnnotatedBlock number(const uil::Block& block) {
    AnnotatedBlock out;
    out.reserve(block.size());
    for (const auto& s : block) {
      AnnotatedStatement a;
      a.stmt = &s;
      a.point = next_point_++;
      if (const auto* i = std::get_if<uil::If>(&s.node)) {
        a.then_block = number(i->then_branch);
        a.else_block = number(i->else_branch);
      }
      out.push_back(std::move(a));
    }
    return out;
  }

  NextUse backward(AnnotatedBlock& block, NextUse out, bool tail) {
    for (std::size_t i = block.size(); i-- > 0;) {
      const bool stmt_tail = tail && i + 1 == block.size();
      out = statement(block[i], std::move(out), stmt_tail);
    }
    return out;
  }

  NextUse statement(AnnotatedStatement& a, NextUse out, bool tail) {
    const uil::Statement& s = *a.stmt;
    a.live_out = keys(out);
    NameSet refs = references(s, !proc_.is_entry, tail);

    if (std::holds_alternative<uil::If>(s.node)) {
      NextUse then_in = backward(a.then_block, out, tail);
      NextUse else_in = backward(a.else_block, out, tail);
      NextUse after_test = then_in;
      for (const auto& [v, p] : else_in) {
        auto [it, inserted] = after_test.emplace(v, p);
        if (!inserted && p < it->second) it->second = p;
      }
      proc_.table.set_after(a.point, after_test);
      NameSet live_after_test = keys(after_test);
      a.then_drop = minus(live_after_test, keys(then_in));
      a.else_drop = minus(live_after_test, keys(else_in));
      a.ends = minus(refs, live_after_test);
      NextUse in = std::move(after_test);
      for (const auto& v : refs) in[v] = a.point;
      return in;
    }

    proc_.table.set_after(a.point, out);
    NextUse in = out;
    const auto* asg = std::get_if<uil::Assign>(&s.node);
    if (asg) in.erase(asg->dst);
    for (const auto& v : refs) in[v] = a.point;
    a.ends = minus(keys(in), a.live_out);
    if (asg && !a.live_out.count(asg->dst)) a.ends.insert(asg->dst);
    return in;
  }

  AnnotatedProcedure& proc_;
  ProgramPoint next_point_ = 0;
};

void dump_block(const AnnotatedBlock& block, int indent, std::ostringstream& os) {
  for (const auto& a : block) {
    os << std::string(indent, ' ') << uil::print_statement_head(*a.stmt) << ", {";
    bool first = true;
    for (const auto& v : a.ends) {
      os << (first ? "" : ", ") << v;
      first = false;
    }
    os << "}\n";
    if (std::holds_alternative<uil::If>(a.stmt->node)) {
      os << std::string(indent + 2, ' ') << "then\n";
      dump_block(a.then_block, indent + 4, os);
      os << std::string(indent + 2, ' ') << "else\n";
      dump_block(a.else_block, indent + 4, os);
    }
  }
}

}  // namespace

ProgramPoint NextUseTable::next_use(ProgramPoint p, const Ident& v) const {
  if (p >= after_.size()) return kNever;
  const auto& m = after_[p];
  auto it = m.find(v);
  return it == m.end() ? kNever : it->second;
}

NameSet references(const uil::Statement& s, bool in_procedure, bool tail) {
  NameSet out;
  if (const auto* a = std::get_if<uil::Assign>(&s.node)) {
    if (const auto* op = std::get_if<uil::Operand>(&a->rhs)) {
      add_operand(out, *op);
    } else if (const auto* b = std::get_if<uil::BinaryRhs>(&a->rhs)) {
      add_operand(out, b->lhs);
      add_operand(out, b->rhs);
    } else if (const auto* m = std::get_if<uil::MemReadRhs>(&a->rhs)) {
      add_operand(out, m->base);
      add_operand(out, m->index);
    } else if (const auto* c = std::get_if<uil::CallRhs>(&a->rhs)) {
      out.insert(c->callee);
      for (const auto& arg : c->args) add_operand(out, arg);
    }
  } else if (const auto* m = std::get_if<uil::MemWrite>(&s.node)) {
    add_operand(out, m->base);
    add_operand(out, m->index);
    add_operand(out, m->src);
  } else if (const auto* i = std::get_if<uil::If>(&s.node)) {
    add_operand(out, i->test.lhs);
    add_operand(out, i->test.rhs);
  } else if (const auto* c = std::get_if<uil::Call>(&s.node)) {
    out.insert(c->callee);
    for (const auto& arg : c->args) add_operand(out, arg);
    if (in_procedure && tail) out.insert(Ident(uil::kReturnAddress));
  } else if (const auto* r = std::get_if<uil::Return>(&s.node)) {
    add_operand(out, r->value);
    if (in_procedure) out.insert(Ident(uil::kReturnAddress));
  }
  return out;
}

AnnotatedProgram annotate(uil::Program program) {
  return annotate(std::make_shared<const uil::Program>(std::move(program)));
}

AnnotatedProgram annotate(std::shared_ptr<const uil::Program> program) {
  AnnotatedProgram out;
  out.source = program;
  for (const auto& def : program->definitions) {
    AnnotatedProcedure proc;
    proc.name = def.name;
    proc.params = def.params;
    Annotator(proc).run(def.body);
    out.definitions.push_back(std::move(proc));
  }
  out.entry.is_entry = true;
  Annotator(out.entry).run(program->body);
  return out;
}

std::string dump(const AnnotatedProcedure& proc) {
  std::ostringstream os;
  dump_block(proc.body, 0, os);
  return os.str();
}

}  // namespace mtsra::analysis
