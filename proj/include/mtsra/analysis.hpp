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

#ifndef MTSRA_ANALYSIS_HPP_
#define MTSRA_ANALYSIS_HPP_

#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mtsra/uil.hpp"

// Backward liveness over UIL procedures. The pass records, per statement,
// the set of names whose live range ends there and, per program point, the
// next point at which each live name is referenced. No interference graph
// is built.
namespace mtsra::analysis {

using uil::Ident;

// Pre-order index of a statement within one procedure body; the
// then-branch is numbered before the else-branch.
using ProgramPoint = std::size_t;
inline constexpr ProgramPoint kNever = std::numeric_limits<ProgramPoint>::max();

using NameSet = std::set<Ident>;

struct AnnotatedStatement;
using AnnotatedBlock = std::vector<AnnotatedStatement>;

struct AnnotatedStatement {
  const uil::Statement* stmt = nullptr;
  ProgramPoint point = 0;
  // Names whose live range ends here, including a dead definition.
  NameSet ends;
  // Names live after the statement completes (after the join, for an if).
  NameSet live_out;

  // Populated for `if` only. `*_drop` are names live after the test that
  // die on entry to the respective branch.
  AnnotatedBlock then_block;
  AnnotatedBlock else_block;
  NameSet then_drop;
  NameSet else_drop;
};

class NextUseTable {
 public:
  NextUseTable() = default;
  explicit NextUseTable(std::size_t points) : after_(points) {}

  // Next reference strictly after `p` on some path, or kNever.
  ProgramPoint next_use(ProgramPoint p, const Ident& v) const;

  std::size_t size() const { return after_.size(); }
  const std::map<Ident, ProgramPoint>& after(ProgramPoint p) const {
    return after_.at(p);
  }
  void set_after(ProgramPoint p, std::map<Ident, ProgramPoint> m) {
    after_.at(p) = std::move(m);
  }

 private:
  std::vector<std::map<Ident, ProgramPoint>> after_;
};

inline ProgramPoint next_use(const NextUseTable& t, ProgramPoint p, const Ident& v) {
  return t.next_use(p, v);
}

struct AnnotatedProcedure {
  Ident name;  // empty for the entry body
  std::vector<Ident> params;
  bool is_entry = false;
  AnnotatedBlock body;
  NextUseTable table;
  std::size_t num_points = 0;
  NameSet live_in;  // names live on entry (params, RET)
};

struct AnnotatedProgram {
  std::shared_ptr<const uil::Program> source;
  std::vector<AnnotatedProcedure> definitions;
  AnnotatedProcedure entry;
};

// Names referenced by the statement at its own point: operands, callee
// labels, and the return address for a procedure's returns and tail calls.
NameSet references(const uil::Statement& s, bool in_procedure, bool tail);

AnnotatedProgram annotate(uil::Program program);
AnnotatedProgram annotate(std::shared_ptr<const uil::Program> program);

// Renders a procedure with each statement suffixed by `, {a, b}`.
std::string dump(const AnnotatedProcedure& proc);

}  // namespace mtsra::analysis

#endif  // MTSRA_ANALYSIS_HPP_
