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
#include <set>

#include "mtsra/uil.hpp"

namespace mtsra::uil {
namespace {

using Kind = Diagnostic::Kind;
using NameSet = std::set<Ident>;

class Validator {
 public:
  explicit Validator(const Program& p) : program_(p) {
    for (const auto& d : p.definitions) procs_.insert(d.name);
  }

  std::vector<Diagnostic> run() {
    std::set<std::string> seen;
    for (const auto& def : program_.definitions) {
      proc_ = def.name;
      index_ = 0;
      if (!seen.insert(def.name).second) {
        report(Kind::kDuplicateDefinition, def.loc,
               "duplicate definition '" + def.name + "'");
      }
      NameSet defined;
      for (const auto& p : def.params) {
        if (!defined.insert(p).second) {
          report(Kind::kDuplicateParam, def.loc, "duplicate parameter '" + p + "'");
        }
        if (procs_.count(p)) {
          report(Kind::kNameClash, def.loc,
                 "parameter '" + p + "' shadows a procedure name");
        }
      }
      procedure_body(def.body, def.loc, defined);
    }
    proc_.clear();
    index_ = 0;
    NameSet defined;
    procedure_body(program_.body, SourceLoc{1, 1}, defined);
    return std::move(out_);
  }

 private:
  void report(Kind kind, SourceLoc loc, std::string message) {
    out_.push_back(Diagnostic{kind, proc_, index_, loc, std::move(message)});
  }

  void procedure_body(const Block& body, SourceLoc loc, NameSet& defined) {
    if (body.empty()) {
      report(Kind::kEmptyBody, loc, "procedure body is empty");
      return;
    }
    block(body, /*tail=*/true, defined);
  }

  void use(const Operand& op, const Statement& s, const NameSet& defined) {
    if (!op.is_var()) return;
    const Ident& v = op.var();
    if (procs_.count(v)) {
      report(Kind::kNameClash, s.loc, "procedure '" + v + "' used as a value");
    } else if (!defined.count(v)) {
      report(Kind::kUseBeforeDef, s.loc, "'" + v + "' may be used before assignment");
    }
  }

  void call(const Ident& callee, const std::vector<Operand>& args,
            const Statement& s, const NameSet& defined) {
    for (const auto& a : args) use(a, s, defined);
    const Definition* def = program_.find(callee);
    if (!def) {
      report(Kind::kUnknownCallee, s.loc, "call to unknown procedure '" + callee + "'");
    } else if (def->params.size() != args.size()) {
      report(Kind::kArity, s.loc,
             "'" + callee + "' expects " + std::to_string(def->params.size()) +
                 " argument(s), got " + std::to_string(args.size()));
    }
  }

  void block(const Block& b, bool tail, NameSet& defined) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      const bool last = i + 1 == b.size();
      statement(b[i], tail && last, defined);
    }
  }

  void statement(const Statement& s, bool tail, NameSet& defined) {
    ++index_;
    if (const auto* a = std::get_if<Assign>(&s.node)) {
      if (const auto* op = std::get_if<Operand>(&a->rhs)) {
        use(*op, s, defined);
      } else if (const auto* b = std::get_if<BinaryRhs>(&a->rhs)) {
        use(b->lhs, s, defined);
        use(b->rhs, s, defined);
      } else if (const auto* m = std::get_if<MemReadRhs>(&a->rhs)) {
        use(m->base, s, defined);
        use(m->index, s, defined);
      } else if (const auto* c = std::get_if<CallRhs>(&a->rhs)) {
        call(c->callee, c->args, s, defined);
      }
      if (procs_.count(a->dst)) {
        report(Kind::kNameClash, s.loc,
               "assignment to procedure name '" + a->dst + "'");
      }
      defined.insert(a->dst);
      if (tail) report(Kind::kNotTail, s.loc, "body must end in a return or call");
    } else if (const auto* m = std::get_if<MemWrite>(&s.node)) {
      use(m->base, s, defined);
      use(m->index, s, defined);
      use(m->src, s, defined);
      if (tail) report(Kind::kNotTail, s.loc, "body must end in a return or call");
    } else if (const auto* i = std::get_if<If>(&s.node)) {
      use(i->test.lhs, s, defined);
      use(i->test.rhs, s, defined);
      if (tail && (i->then_branch.empty() || i->else_branch.empty())) {
        report(Kind::kNotTail, s.loc,
               "both branches of a final if must end in a return or call");
      }
      NameSet then_defined = defined;
      NameSet else_defined = defined;
      block(i->then_branch, tail, then_defined);
      block(i->else_branch, tail, else_defined);
      NameSet joined;
      std::set_intersection(then_defined.begin(), then_defined.end(),
                            else_defined.begin(), else_defined.end(),
                            std::inserter(joined, joined.end()));
      defined = std::move(joined);
    } else if (const auto* c = std::get_if<Call>(&s.node)) {
      call(c->callee, c->args, s, defined);
    } else if (const auto* r = std::get_if<Return>(&s.node)) {
      use(r->value, s, defined);
      if (!tail) {
        report(Kind::kMisplacedReturn, s.loc, "return is only allowed in tail position");
      }
    }
  }

  const Program& program_;
  NameSet procs_;
  std::string proc_;
  std::size_t index_ = 0;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::string to_string(const Diagnostic& d) {
  std::string where = d.procedure.empty() ? "body" : d.procedure;
  return std::to_string(d.loc.line) + ":" + std::to_string(d.loc.column) + ": " +
         where + " statement " + std::to_string(d.statement) + ": " + d.message;
}

std::vector<Diagnostic> validate(const Program& program) {
  return Validator(program).run();
}

}  // namespace mtsra::uil
