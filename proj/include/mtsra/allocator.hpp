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

#ifndef MTSRA_ALLOCATOR_HPP_
#define MTSRA_ALLOCATOR_HPP_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mtsra/analysis.hpp"
#include "mtsra/inst.hpp"
#include "mtsra/model.hpp"

namespace mtsra {

using analysis::NextUseTable;
using analysis::ProgramPoint;

enum class Policy { kFurthestNextUse, kLifo, kFifo };
enum class Ctx { kTail, kNonTail };

std::string_view policy_name(Policy p);
// Accepts "furthest", "lifo", "fifo".
std::optional<Policy> parse_policy(std::string_view name);

// Thrown when a statement needs more simultaneously protected registers
// than the machine has.
class PressureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Result of a primitive model transformer.
struct Transformed {
  Model model;
  std::vector<Inst> insts;
};

// Stores each name that is not yet slot-resident into the lowest free slot.
// Register bindings are kept, so the name ends up in both places.
Transformed save(const Model& m, std::span<const Ident> vs);

// Context a victim choice needs: where we are and how to rank candidates.
struct EvictionContext {
  const NextUseTable* table = nullptr;
  ProgramPoint point = 0;
  Policy policy = Policy::kFurthestNextUse;
  unsigned registers = 0;
  // Soft register preferences consulted before the lowest free register.
  const std::map<Ident, unsigned>* preferences = nullptr;
};

// Chooses the register-resident name outside `protect` to evict.
// Furthest-next-use breaks ties by lowest register index.
Ident pick_victim(const Model& m, const std::set<Ident>& protect,
                  const NextUseTable& t, ProgramPoint p, Policy pol);

// Makes every name in `vs` register-resident. Names in `vs` and in
// `protect` are never evicted. A victim is saved (if it has no slot yet)
// and its register handed to the incoming name.
Transformed load(const Model& m, std::span<const Ident> vs,
                 const std::set<Ident>& protect, const EvictionContext& ctx);

// A constant placed by a shuffle after all location moves are done.
struct ConstantMove {
  Location dst;
  std::variant<Word, std::string> value;  // immediate or label address
};

using MoveMapping = std::vector<std::pair<Location, Location>>;

// Realizes all moves as if simultaneous. Paths are emitted deepest
// destination first; each loop costs one extra move through a temporary
// (a register untouched by the mapping when one exists, else a scratch
// slot). Names bound at a source are rebound to its destinations.
// Throws ModelFault when two moves share a destination.
Transformed shuffle(const Model& m, const MoveMapping& moves, unsigned registers,
                    std::span<const ConstantMove> constants = {});

// One step of the per-statement trace.
struct TraceEntry {
  std::string procedure;
  ProgramPoint point = 0;
  std::string statement;
  std::string before;
  std::string after;
  std::vector<Inst> insts;
  // Index into TargetProgram::code just past this statement's code, for
  // straight-line statements; used by co-simulation checks.
  std::size_t code_end = 0;
};

struct AllocOptions {
  Policy policy = Policy::kFurthestNextUse;
  std::vector<TraceEntry>* trace = nullptr;
};

struct TransformResult {
  std::vector<Inst> insts;
  std::variant<std::monostate, Location, Word> value;
  Model model;
};

// Allocates one procedure starting from its initial model (the entry body
// starts from the empty model and halts instead of returning).
std::vector<Inst> alloc_procedure(const analysis::AnnotatedProcedure& proc,
                                  const MachineConfig& cfg, const AllocOptions& opts);

// Entry body first (so execution starts at index 0), then each definition.
TargetProgram alloc_program(const analysis::AnnotatedProgram& p,
                            const MachineConfig& cfg, const AllocOptions& opts = {});

}  // namespace mtsra

#endif  // MTSRA_ALLOCATOR_HPP_
