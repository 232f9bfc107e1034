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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mtsra/cli.hpp"

namespace mtsra::cli {
namespace {

namespace fs = std::filesystem;

const std::string kPrograms = MTSRA_PROGRAMS_DIR;

struct Captured {
  int code;
  std::string out;
  std::string err;
};

template <typename F>
Captured capture(F&& f) {
  std::ostringstream out, err;
  int code = f(Streams{out, err});
  return {code, out.str(), err.str()};
}

RunConfig registers(unsigned r) {
  RunConfig cfg;
  cfg.registers = r;
  return cfg;
}

std::string temp_file(const std::string& name, const std::string& text) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p.string();
}

TEST(Alloc, SplitRangeAssembly) {
  auto r = capture([](Streams io) {
    return cmd_alloc(kPrograms + "/spill_pair.uil", registers(2), io);
  });
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_NE(r.out.find("store fv0, r0"), std::string::npos);
  EXPECT_NE(r.out.find("load r0, fv0"), std::string::npos);
}

TEST(Alloc, Deterministic) {
  auto a = capture([](Streams io) { return cmd_alloc(kPrograms + "/recursion.uil", registers(3), io); });
  auto b = capture([](Streams io) { return cmd_alloc(kPrograms + "/recursion.uil", registers(3), io); });
  EXPECT_EQ(a.out, b.out);
}

TEST(Alloc, TraceShowsModels) {
  RunConfig cfg = registers(2);
  cfg.trace = true;
  auto r = capture([&](Streams io) { return cmd_alloc(kPrograms + "/spill_pair.uil", cfg, io); });
  ASSERT_EQ(r.code, kSuccess);
  EXPECT_NE(r.out.find("=> {y:r1, z:r0}{x:fv0}"), std::string::npos) << r.out;
}

TEST(Alloc, OneRegisterIsAPressureDiagnostic) {
  auto r = capture([](Streams io) { return cmd_alloc(kPrograms + "/spill_pair.uil", registers(1), io); });
  EXPECT_EQ(r.code, kDiagnostics);
  EXPECT_NE(r.err.find("pressure"), std::string::npos);
}

TEST(Alloc, ParseAndValidationDiagnostics) {
  auto bad = temp_file("mtsra_bad.uil", "(letrec () (return x)");
  auto r = capture([&](Streams io) { return cmd_alloc(bad, registers(4), io); });
  EXPECT_EQ(r.code, kDiagnostics);
  auto undef = temp_file("mtsra_undef.uil", "(letrec () (return x))");
  r = capture([&](Streams io) { return cmd_alloc(undef, registers(4), io); });
  EXPECT_EQ(r.code, kDiagnostics);
  EXPECT_NE(r.err.find("x"), std::string::npos);
  r = capture([&](Streams io) { return cmd_alloc("/nonexistent.uil", registers(4), io); });
  EXPECT_EQ(r.code, kDiagnostics);
}

TEST(Run, ReportsValueAndTraffic) {
  RunConfig cfg = registers(2);
  cfg.json = true;
  auto r = capture([&](Streams io) { return cmd_run(kPrograms + "/spill_pair.uil", cfg, io); });
  ASSERT_EQ(r.code, kSuccess) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["return_value"], 5);
  EXPECT_EQ(j["dynamic_loads"], 1);
  EXPECT_EQ(j["dynamic_stores"], 1);
}

TEST(Run, SpillFreeAtEightRegisters) {
  RunConfig cfg = registers(8);
  cfg.json = true;
  auto r = capture([&](Streams io) { return cmd_run(kPrograms + "/branches.uil", cfg, io); });
  ASSERT_EQ(r.code, kSuccess);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["dynamic_loads"], 0);
  EXPECT_EQ(j["dynamic_stores"], 0);
}

TEST(Run, DivergenceHasItsOwnExitCode) {
  RunConfig cfg = registers(4);
  cfg.fuel = 10000;
  auto r = capture([&](Streams io) { return cmd_run(kPrograms + "/diverge.uil", cfg, io); });
  EXPECT_EQ(r.code, kOutOfFuel);
  EXPECT_NE(r.err.find("out of fuel"), std::string::npos);
}

TEST(Compare, TableAndTotals) {
  CompareOptions opts;
  opts.registers = {2, 4};
  RunConfig cfg;
  cfg.json = true;
  auto r = capture([&](Streams io) { return cmd_compare({kPrograms}, opts, cfg, io); });
  EXPECT_EQ(r.code, kSuccess) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["totals"].size(), 6u);
  EXPECT_FALSE(j["rows"].empty());
}

TEST(Compare, ContinuesPastBadFiles) {
  fs::path dir = fs::temp_directory_path() / "mtsra_corpus";
  fs::create_directories(dir);
  std::ofstream(dir / "a.uil") << "(letrec () (return 1))";
  std::ofstream(dir / "b.uil") << "(letrec () (return";
  auto r = capture([&](Streams io) { return cmd_compare({dir.string()}, {}, RunConfig{}, io); });
  EXPECT_EQ(r.code, kDiagnostics);
  EXPECT_NE(r.out.find("a.uil"), std::string::npos);
}

TEST(Fuzz, PassesAndCountZero) {
  FuzzOptions opts;
  opts.count = 30;
  auto r = capture([&](Streams io) { return cmd_fuzz(opts, RunConfig{}, io); });
  EXPECT_EQ(r.code, kSuccess) << r.out;
  opts.count = 0;
  r = capture([&](Streams io) { return cmd_fuzz(opts, RunConfig{}, io); });
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_NE(r.out.find("0/0"), std::string::npos);
}

TEST(Fuzz, InjectedFaultWritesReproducer) {
  fs::path dir = fs::temp_directory_path() / "mtsra_repro";
  fs::remove_all(dir);
  fs::create_directories(dir);
  FuzzOptions opts;
  opts.count = 3;
  opts.inject_fault = true;
  opts.reproducer_dir = dir.string();
  RunConfig cfg;
  cfg.seed = 42;
  auto r = capture([&](Streams io) { return cmd_fuzz(opts, cfg, io); });
  EXPECT_EQ(r.code, kDiagnostics);
  ASSERT_TRUE(fs::exists(dir / "fuzz-42.uil")) << r.out;
  std::ifstream in(dir / "fuzz-42.uil");
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_NO_THROW(uil::parse(text.str()));
}

}  // namespace
}  // namespace mtsra::cli
