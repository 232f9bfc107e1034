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

#ifndef MTSRA_CLI_HPP_
#define MTSRA_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mtsra/allocator.hpp"
#include "mtsra/machine.hpp"

namespace mtsra::cli {

enum ExitCode : int {
  kSuccess = 0,
  kDiagnostics = 1,
  kInternalFault = 2,
  kOutOfFuel = 3,
};

struct RunConfig {
  unsigned registers = 4;
  Policy policy = Policy::kFurthestNextUse;
  bool preferences = true;
  bool trace = false;
  std::uint64_t fuel = kDefaultFuel;
  std::uint64_t seed = 1;
  bool json = false;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

int cmd_alloc(const std::string& path, const RunConfig& cfg, Streams io);
int cmd_run(const std::string& path, const RunConfig& cfg, Streams io);

struct CompareOptions {
  std::vector<unsigned> registers{3, 4, 8};
  std::vector<Policy> policies{Policy::kFurthestNextUse, Policy::kLifo, Policy::kFifo};
  // Programs generated from the run seed, in addition to the inputs.
  std::size_t generate = 0;
  bool straight_line = false;
};

// Inputs may be `.uil` files or directories holding them.
int cmd_compare(const std::vector<std::string>& inputs, const CompareOptions& opts,
                const RunConfig& cfg, Streams io);

struct FuzzOptions {
  std::size_t count = 100;
  std::string reproducer_dir = ".";
  // Corrupts the allocated code of every program; exercises the failure path.
  bool inject_fault = false;
};

int cmd_fuzz(const FuzzOptions& opts, const RunConfig& cfg, Streams io);

}  // namespace mtsra::cli

#endif  // MTSRA_CLI_HPP_
