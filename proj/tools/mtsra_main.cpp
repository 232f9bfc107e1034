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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mtsra/cli.hpp"

namespace {

struct PolicyOption {
  std::string text = "furthest";
};

void add_common(CLI::App* app, mtsra::cli::RunConfig& cfg, PolicyOption& policy) {
  app->add_option("--registers", cfg.registers, "Number of machine registers")
      ->capture_default_str();
  app->add_option("--policy", policy.text, "Eviction policy: furthest, lifo, fifo")
      ->capture_default_str();
  app->add_flag("--no-preference{false}", cfg.preferences,
                "Ignore register preferences at if joins");
  app->add_option("--fuel", cfg.fuel, "Simulation step limit")->capture_default_str();
  app->add_option("--seed", cfg.seed, "Heap and generator seed")->capture_default_str();
  app->add_flag("--json", cfg.json, "Machine-readable output");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace mtsra::cli;
  CLI::App app{"Model-based register allocation for a tiny first-order language"};
  app.require_subcommand(1);

  RunConfig cfg;
  PolicyOption policy;
  std::string input;
  std::vector<std::string> inputs;

  auto* alloc = app.add_subcommand("alloc", "Allocate a program and print assembly");
  add_common(alloc, cfg, policy);
  alloc->add_flag("--trace", cfg.trace, "Interleave per-statement model dumps");
  alloc->add_option("input", input, "Program file")->required();

  auto* run = app.add_subcommand("run", "Allocate, simulate, and print traffic statistics");
  add_common(run, cfg, policy);
  run->add_option("input", input, "Program file")->required();

  CompareOptions compare_opts;
  std::vector<std::string> policy_list;
  auto* compare = app.add_subcommand("compare", "Compare eviction policies over a corpus");
  add_common(compare, cfg, policy);
  compare->add_option("inputs", inputs, "Program files or directories");
  compare->add_option("--registers-list", compare_opts.registers, "Register counts")
      ->delimiter(',');
  compare->add_option("--policies", policy_list, "Policies to compare")->delimiter(',');
  compare->add_option("--generate", compare_opts.generate, "Add N generated programs");
  compare->add_flag("--straight-line", compare_opts.straight_line,
                    "Generate straight-line programs only");

  FuzzOptions fuzz_opts;
  auto* fuzz = app.add_subcommand("fuzz", "Differential testing against the interpreter");
  add_common(fuzz, cfg, policy);
  fuzz->add_option("--count", fuzz_opts.count, "Number of programs")->capture_default_str();
  fuzz->add_option("--out", fuzz_opts.reproducer_dir, "Directory for reproducers");
  fuzz->add_flag("--inject-fault", fuzz_opts.inject_fault)->group("");

  CLI11_PARSE(app, argc, argv);

  Streams io{std::cout, std::cerr};
  auto parsed = mtsra::parse_policy(policy.text);
  if (!parsed) {
    std::cerr << "error: unknown policy '" << policy.text << "'\n";
    return kDiagnostics;
  }
  cfg.policy = *parsed;

  if (*alloc) return cmd_alloc(input, cfg, io);
  if (*run) return cmd_run(input, cfg, io);
  if (*compare) {
    if (!policy_list.empty()) {
      compare_opts.policies.clear();
      for (const auto& p : policy_list) {
        auto pol = mtsra::parse_policy(p);
        if (!pol) {
          std::cerr << "error: unknown policy '" << p << "'\n";
          return kDiagnostics;
        }
        compare_opts.policies.push_back(*pol);
      }
    }
    return cmd_compare(inputs, compare_opts, cfg, io);
  }
  return cmd_fuzz(fuzz_opts, cfg, io);
}
