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

#include <random>

#include "mtsra/machine.hpp"

namespace mtsra {

std::vector<Word> seeded_heap(std::uint64_t seed, std::size_t size) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Word> dist(-50, 100);
  std::vector<Word> heap(size);
  for (auto& w : heap) w = dist(rng);
  return heap;
}

Verdict equivalent(const uil::Program& p, const TargetProgram& tp,
                   const MachineConfig& cfg, std::span<const std::uint64_t> seeds,
                   std::uint64_t fuel) {
  for (std::uint64_t seed : seeds) {
    std::vector<Word> heap = seeded_heap(seed);
    Observation expected = run_uil(p, heap, fuel);
    Observation actual;
    try {
      actual = run_target(tp, cfg, heap, fuel).observation;
    } catch (const MachineFault& e) {
      return {false, "seed " + std::to_string(seed) + ": machine fault: " + e.what()};
    }
    // Fuel is measured in different units on the two sides.
    if (expected.outcome == Outcome::kOutOfFuel || actual.outcome == Outcome::kOutOfFuel) {
      if (expected.outcome == actual.outcome) continue;
    }
    if (!(expected == actual)) {
      return {false, "seed " + std::to_string(seed) + ": reference " +
                         to_string(expected) + " vs target " + to_string(actual)};
    }
  }
  return {true, {}};
}

}  // namespace mtsra
