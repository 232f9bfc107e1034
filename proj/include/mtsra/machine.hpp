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

#ifndef MTSRA_MACHINE_HPP_
#define MTSRA_MACHINE_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mtsra/analysis.hpp"
#include "mtsra/inst.hpp"
#include "mtsra/model.hpp"
#include "mtsra/uil.hpp"

namespace mtsra {

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

// How a run ended. Heap faults are observable behavior: both interpreters
// must fault at the same access with the same write trace.
enum class Outcome { kReturned, kHeapFault, kOutOfFuel };

std::string_view outcome_name(Outcome o);

struct Observation {
  Outcome outcome = Outcome::kReturned;
  Word value = 0;
  std::vector<std::pair<Word, Word>> writes;  // (address, value)

  friend bool operator==(const Observation&, const Observation&) = default;
};

std::string to_string(const Observation& o);

struct TrafficCounts {
  std::uint64_t loads = 0;
  std::uint64_t stores = 0;
  std::uint64_t moves = 0;
  friend bool operator==(const TrafficCounts&, const TrafficCounts&) = default;
};

struct TrafficStats {
  TrafficCounts static_counts;
  TrafficCounts dynamic_counts;
  std::size_t instructions = 0;
  std::uint64_t steps = 0;
  // Completed non-tail calls and how many left fp where they found it.
  std::uint64_t calls = 0;
  std::uint64_t unbalanced_calls = 0;
};

TrafficCounts static_traffic(const std::vector<Inst>& code);

// Flat key/value JSON for the stats document.
std::string stats_json(const TrafficStats& s, const Observation& o);

// A malformed target program: bad register, negative slot, unknown label.
class MachineFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MachineState {
  std::vector<Word> regs;
  std::size_t fp = 0;
  std::vector<Word> stack;
  std::vector<Word> heap;
  std::size_t pc = 0;

  Word slot(std::size_t i) const;
};

struct RunResult {
  Observation observation;
  TrafficStats stats;
};

// Called before each instruction executes; used by co-simulation tests.
using StepHook = std::function<void(const MachineState&)>;

RunResult run_target(const TargetProgram& prog, const MachineConfig& cfg,
                     std::span<const Word> heap_init, std::uint64_t fuel = kDefaultFuel,
                     const StepHook& hook = {});

// Big-step reference semantics of UIL with an explicit frame stack. Fuel
// counts executed statements.
Observation run_uil(const uil::Program& p, std::span<const Word> heap_init,
                    std::uint64_t fuel = kDefaultFuel);

// Environment of the entry body after executing its first `n` top-level
// statements (which must not include calls' callees returning faults).
std::map<Ident, Word> uil_entry_environment(const uil::Program& p,
                                            std::span<const Word> heap_init,
                                            std::size_t n);

struct Verdict {
  bool equivalent = true;
  std::string detail;  // first divergence, with both observations
};

std::vector<Word> seeded_heap(std::uint64_t seed, std::size_t size = 64);

// Compares run_uil and run_target on each seed's heap.
Verdict equivalent(const uil::Program& p, const TargetProgram& tp,
                   const MachineConfig& cfg, std::span<const std::uint64_t> seeds,
                   std::uint64_t fuel = kDefaultFuel);

// Search-size guard for the oracle.
struct OracleLimits {
  std::size_t max_statements = 10;
  std::size_t max_variables = 6;
  unsigned max_registers = 3;
};

class OracleRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Minimum number of stack-to-register loads any eviction strategy can
// achieve on a straight-line entry body, by exhaustive search over every
// victim choice. Refuses instances beyond `limits`.
std::uint64_t belady_oracle(const analysis::AnnotatedProcedure& straight_line,
                            unsigned registers, const OracleLimits& limits = {});

}  // namespace mtsra

#endif  // MTSRA_MACHINE_HPP_
