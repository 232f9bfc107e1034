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

#ifndef MTSRA_GENERATOR_HPP_
#define MTSRA_GENERATOR_HPP_

#include <cstdint>
#include <random>

#include "mtsra/uil.hpp"

namespace mtsra {

struct GeneratorOptions {
  unsigned max_definitions = 2;  // plus the entry body: at most 3 procedures
  unsigned max_statements = 30;  // across the whole program, nested included
  unsigned max_variables = 10;   // per procedure
  unsigned max_params = 5;
  // Number of simultaneously live names the generator steers toward.
  unsigned target_live = 5;
  bool straight_line = false;  // entry body only: no ifs, no calls
  bool allow_memory = true;
  unsigned max_depth = 2;      // if-nesting
  std::size_t heap_size = 64;
};

// Produces a program that passes validation and terminates: procedure i may
// only call procedures j > i, so the call graph is acyclic. Heap addresses
// are built from small constants so most accesses stay in range.
uil::Program generate_program(std::mt19937_64& rng, const GeneratorOptions& opts);

// Options used by the fuzzer and acceptance corpora for a given seed; the
// live-name target varies around typical register counts.
GeneratorOptions fuzz_options(std::uint64_t seed);

}  // namespace mtsra

#endif  // MTSRA_GENERATOR_HPP_
