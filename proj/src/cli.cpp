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

#include "mtsra/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "json.hpp"

#include "mtsra/generator.hpp"

namespace mtsra::cli {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Carries a diagnostic exit out of the loading pipeline.
struct Failure {
  int code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::shared_ptr<const uil::Program> load_program(const std::string& path, std::ostream& err) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    throw Failure{kDiagnostics};
  }
  uil::Program p;
  try {
    p = uil::parse(text);
  } catch (const uil::ParseError& e) {
    err << path << ":" << e.loc().line << ":" << e.loc().column << ": error: " << e.what()
        << "\n";
    throw Failure{kDiagnostics};
  }
  auto diags = uil::validate(p);
  if (!diags.empty()) {
    for (const auto& d : diags) err << path << ":" << uil::to_string(d) << "\n";
    throw Failure{kDiagnostics};
  }
  return std::make_shared<const uil::Program>(std::move(p));
}

MachineConfig machine_config(const RunConfig& cfg, std::ostream& err) {
  MachineConfig mc = MachineConfig::standard(cfg.registers);
  mc.use_preferences = cfg.preferences;
  try {
    mc.check();
  } catch (const std::invalid_argument& e) {
    err << "error: register pressure: " << e.what() << "\n";
    throw Failure{kDiagnostics};
  }
  return mc;
}

TargetProgram allocate(const analysis::AnnotatedProgram& ap, const MachineConfig& mc,
                       Policy policy, std::vector<TraceEntry>* trace, std::ostream& err) {
  try {
    return alloc_program(ap, mc, AllocOptions{policy, trace});
  } catch (const PressureError& e) {
    err << "error: register pressure: " << e.what() << "\n";
    throw Failure{kDiagnostics};
  }
}

void print_trace(const std::vector<TraceEntry>& trace, std::ostream& out) {
  for (const auto& t : trace) {
    out << "; " << (t.procedure.empty() ? "body" : t.procedure) << " @" << t.point << " "
        << t.statement << "\n";
    out << ";   " << t.before << "\n";
    for (const auto& inst : t.insts) out << ";     " << to_string(inst) << "\n";
    out << ";   => " << t.after << "\n";
  }
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Failure& f) {
    return f.code;
  } catch (const std::exception& e) {
    err << "internal fault: " << e.what() << "\n";
    return kInternalFault;
  }
}

std::vector<std::string> collect_inputs(const std::vector<std::string>& inputs,
                                        std::ostream& err) {
  std::vector<std::string> files;
  for (const auto& in : inputs) {
    std::error_code ec;
    if (fs::is_directory(in, ec)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(in)) {
        if (entry.is_regular_file() && entry.path().extension() == ".uil") {
          found.push_back(entry.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(in, ec)) {
      files.push_back(in);
    } else {
      err << "error: no such file or directory '" << in << "'\n";
    }
  }
  return files;
}

TrafficCounts& operator+=(TrafficCounts& a, const TrafficCounts& b) {
  a.loads += b.loads;
  a.stores += b.stores;
  a.moves += b.moves;
  return a;
}

void corrupt(TargetProgram& tp, const MachineConfig& mc) {
  std::vector<Inst> code;
  for (auto& inst : tp.code) {
    if (std::holds_alternative<HaltInst>(inst)) {
      Reg rv{mc.ret_val_reg};
      code.push_back(BinOpInst{uil::BinOpKind::kAdd, rv, rv, Word{1}});
    }
    code.push_back(std::move(inst));
  }
  tp.code = std::move(code);
}

}  // namespace

int cmd_alloc(const std::string& path, const RunConfig& cfg, Streams io) {
  return guarded(io.err, [&] {
    auto program = load_program(path, io.err);
    MachineConfig mc = machine_config(cfg, io.err);
    auto ap = analysis::annotate(program);
    std::vector<TraceEntry> trace;
    TargetProgram tp = allocate(ap, mc, cfg.policy, cfg.trace ? &trace : nullptr, io.err);
    if (cfg.trace) print_trace(trace, io.out);
    io.out << print_asm(tp.code);
    return int{kSuccess};
  });
}

int cmd_run(const std::string& path, const RunConfig& cfg, Streams io) {
  return guarded(io.err, [&] {
    auto program = load_program(path, io.err);
    MachineConfig mc = machine_config(cfg, io.err);
    auto ap = analysis::annotate(program);
    TargetProgram tp = allocate(ap, mc, cfg.policy, nullptr, io.err);
    auto heap = seeded_heap(cfg.seed);
    RunResult r = run_target(tp, mc, heap, cfg.fuel);
    if (cfg.json) {
      io.out << stats_json(r.stats, r.observation) << "\n";
    } else {
      const auto& s = r.stats;
      io.out << to_string(r.observation) << "\n"
             << "instructions " << s.instructions << "\n"
             << "steps " << s.steps << "\n"
             << "static   loads " << s.static_counts.loads << " stores "
             << s.static_counts.stores << " moves " << s.static_counts.moves << "\n"
             << "dynamic  loads " << s.dynamic_counts.loads << " stores "
             << s.dynamic_counts.stores << " moves " << s.dynamic_counts.moves << "\n"
             << "calls " << s.calls << " unbalanced " << s.unbalanced_calls << "\n";
    }
    if (r.observation.outcome == Outcome::kOutOfFuel) {
      io.err << "error: out of fuel after " << r.stats.steps << " steps\n";
      return int{kOutOfFuel};
    }
    return int{kSuccess};
  });
}

int cmd_compare(const std::vector<std::string>& inputs, const CompareOptions& opts,
                const RunConfig& cfg, Streams io) {
  return guarded(io.err, [&] {
    struct Source {
      std::string name;
      std::shared_ptr<const uil::Program> program;
    };
    int status = kSuccess;
    std::vector<Source> sources;
    for (const auto& file : collect_inputs(inputs, io.err)) {
      try {
        sources.push_back({file, load_program(file, io.err)});
      } catch (const Failure& f) {
        status = std::max(status, f.code);
      }
    }
    if (sources.empty() && !inputs.empty() && opts.generate == 0) status = kDiagnostics;
    for (std::size_t i = 0; i < opts.generate; ++i) {
      std::uint64_t seed = cfg.seed + i;
      std::mt19937_64 rng(seed);
      GeneratorOptions g = fuzz_options(seed);
      g.straight_line = opts.straight_line;
      sources.push_back({"gen:" + std::to_string(seed),
                         std::make_shared<const uil::Program>(generate_program(rng, g))});
    }

    const auto heap = seeded_heap(cfg.seed);
    json rows = json::array();
    std::map<std::pair<unsigned, Policy>, TrafficCounts> totals;
    std::ostringstream table;
    table << std::left << std::setw(28) << "program" << std::right << std::setw(4) << "R"
          << std::setw(10) << "policy" << std::setw(9) << "loads" << std::setw(9) << "stores"
          << std::setw(9) << "moves" << "  outcome\n";
    for (const auto& src : sources) {
      auto ap = analysis::annotate(src.program);
      for (unsigned r : opts.registers) {
        for (Policy pol : opts.policies) {
          json row{{"program", src.name}, {"registers", r}, {"policy", policy_name(pol)}};
          std::string outcome;
          TrafficCounts dyn;
          RunConfig at = cfg;
          at.registers = r;
          MachineConfig mc;
          try {
            mc = machine_config(at, io.err);
          } catch (const Failure& f) {
            status = std::max(status, f.code);
            continue;
          }
          try {
            TargetProgram tp = alloc_program(ap, mc, AllocOptions{pol, nullptr});
            RunResult res = run_target(tp, mc, heap, cfg.fuel);
            dyn = res.stats.dynamic_counts;
            outcome = std::string(outcome_name(res.observation.outcome));
            totals[{r, pol}] += dyn;
          } catch (const PressureError& e) {
            io.err << src.name << ": register pressure: " << e.what() << "\n";
            outcome = "pressure";
            status = std::max(status, int{kDiagnostics});
          }
          row["loads"] = dyn.loads;
          row["stores"] = dyn.stores;
          row["moves"] = dyn.moves;
          row["outcome"] = outcome;
          rows.push_back(row);
          table << std::left << std::setw(28) << src.name << std::right << std::setw(4) << r
                << std::setw(10) << policy_name(pol) << std::setw(9) << dyn.loads
                << std::setw(9) << dyn.stores << std::setw(9) << dyn.moves << "  " << outcome
                << "\n";
        }
      }
    }

    json total_rows = json::array();
    table << "\ntotals\n";
    for (const auto& [key, t] : totals) {
      total_rows.push_back({{"registers", key.first},
                            {"policy", policy_name(key.second)},
                            {"loads", t.loads},
                            {"stores", t.stores},
                            {"moves", t.moves}});
      table << std::left << std::setw(28) << "" << std::right << std::setw(4) << key.first
            << std::setw(10) << policy_name(key.second) << std::setw(9) << t.loads
            << std::setw(9) << t.stores << std::setw(9) << t.moves << "\n";
    }
    if (cfg.json) {
      io.out << json{{"rows", rows}, {"totals", total_rows}}.dump(2) << "\n";
    } else {
      io.out << table.str();
    }
    return status;
  });
}

int cmd_fuzz(const FuzzOptions& opts, const RunConfig& cfg, Streams io) {
  return guarded(io.err, [&] {
    static constexpr unsigned kRegisters[] = {3, 4, 8};
    static constexpr Policy kPolicies[] = {Policy::kFurthestNextUse, Policy::kLifo,
                                           Policy::kFifo};
    std::size_t failed = 0;
    for (std::size_t i = 0; i < opts.count; ++i) {
      const std::uint64_t seed = cfg.seed + i;
      std::mt19937_64 rng(seed);
      auto program = std::make_shared<const uil::Program>(
          generate_program(rng, fuzz_options(seed)));
      std::vector<std::string> problems;
      if (auto diags = uil::validate(*program); !diags.empty()) {
        problems.push_back("generator produced an invalid program: " +
                           uil::to_string(diags.front()));
      } else {
        auto ap = analysis::annotate(program);
        const std::uint64_t heap_seeds[] = {seed, seed ^ 0x9e3779b97f4a7c15ULL};
        for (unsigned r : kRegisters) {
          for (Policy pol : kPolicies) {
            MachineConfig mc = MachineConfig::standard(r);
            mc.use_preferences = cfg.preferences;
            std::string where =
                "R=" + std::to_string(r) + " policy=" + std::string(policy_name(pol));
            try {
              TargetProgram tp = alloc_program(ap, mc, AllocOptions{pol, nullptr});
              if (opts.inject_fault) corrupt(tp, mc);
              Verdict v = equivalent(*program, tp, mc, heap_seeds, cfg.fuel);
              if (!v.equivalent) problems.push_back(where + ": " + v.detail);
            } catch (const std::exception& e) {
              problems.push_back(where + ": " + e.what());
            }
          }
        }
      }
      if (problems.empty()) continue;
      ++failed;
      fs::path file = fs::path(opts.reproducer_dir) / ("fuzz-" + std::to_string(seed) + ".uil");
      std::ofstream repro(file);
      repro << "; seed " << seed << "\n";
      for (const auto& p : problems) repro << "; " << p << "\n";
      repro << uil::print(*program);
      io.out << "FAIL seed " << seed << " (" << problems.size() << " configurations), wrote "
             << file.string() << "\n";
      for (const auto& p : problems) io.out << "  " << p << "\n";
    }
    io.out << (opts.count - failed) << "/" << opts.count << " programs passed\n";
    return failed == 0 ? int{kSuccess} : int{kDiagnostics};
  });
}

}  // namespace mtsra::cli
