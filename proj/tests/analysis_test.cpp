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

#include <algorithm>
#include <functional>
#include <random>

#include "mtsra/analysis.hpp"
#include "mtsra/generator.hpp"
#include "test_support.hpp"

namespace mtsra::analysis {
namespace {

using testing::annotate_text;

constexpr const char* kEndings = R"(
(letrec ((f (lambda (a b) (return a))))
  (set! x 0)
  (set! y (+ x 1))
  (set! z (+ y 2))
  (f x z))
)";

std::vector<NameSet> top_level_ends(const AnnotatedProcedure& p) {
  std::vector<NameSet> out;
  for (const auto& a : p.body) out.push_back(a.ends);
  return out;
}

TEST(Liveness, EndingSetsOfStraightLineBody) {
  auto ap = annotate_text(kEndings);
  EXPECT_EQ(top_level_ends(ap.entry),
            (std::vector<NameSet>{{}, {}, {"y"}, {"f", "x", "z"}}));
  EXPECT_EQ(dump(ap.entry),
            "(set! x 0), {}\n"
            "(set! y (+ x 1)), {}\n"
            "(set! z (+ y 2)), {y}\n"
            "(f x z), {f, x, z}\n");
}

TEST(Liveness, ReturnAddressEndsAtProcedureExit) {
  auto ap = annotate_text(kEndings);
  const auto& f = ap.definitions[0];
  EXPECT_EQ(f.live_in, (NameSet{"RET", "a"}));
  EXPECT_EQ(f.body[0].ends, (NameSet{"RET", "a"}));
}

TEST(Liveness, DeadDefinitionEndsImmediately) {
  auto ap = annotate_text("(letrec () (set! x 1) (set! y 2) (return y))");
  EXPECT_EQ(ap.entry.body[0].ends, NameSet{"x"});
  EXPECT_TRUE(ap.entry.body[0].live_out.empty());
}

TEST(Liveness, BranchDropSets) {
  auto ap = annotate_text(R"(
(letrec ()
  (set! a 1)
  (set! b 2)
  (set! c 3)
  (if (< a 0)
      (begin (set! d (+ b 1)))
      (begin (set! d (+ c 1))))
  (return d)))");
  const auto& branch = ap.entry.body[3];
  EXPECT_EQ(branch.ends, NameSet{"a"});
  EXPECT_EQ(branch.then_drop, NameSet{"c"});
  EXPECT_EQ(branch.else_drop, NameSet{"b"});
  EXPECT_EQ(branch.live_out, NameSet{"d"});
  EXPECT_EQ(branch.then_block[0].point, 4u);
  EXPECT_EQ(branch.else_block[0].point, 5u);
  EXPECT_EQ(ap.entry.body[4].point, 6u);
  EXPECT_EQ(ap.entry.table.next_use(3, "b"), 4u);
  EXPECT_EQ(ap.entry.table.next_use(3, "c"), 5u);
  EXPECT_EQ(ap.entry.table.next_use(3, "a"), kNever);
}

// Next use by walking every path forward from a point.
class PathOracle {
 public:
  PathOracle(const AnnotatedProcedure& p) : proc_(p) {}

  ProgramPoint next_use(ProgramPoint p, const Ident& v) const {
    Cont cont;
    const AnnotatedStatement* s = find(proc_.body, p, cont);
    if (!s) return kNever;
    if (std::holds_alternative<uil::If>(s->stmt->node)) {
      return std::min(first_use(push(cont, &s->then_block), v),
                      first_use(push(cont, &s->else_block), v));
    }
    return first_use(cont, v);
  }

 private:
  using Cont = std::vector<std::pair<const AnnotatedBlock*, std::size_t>>;

  static Cont push(Cont c, const AnnotatedBlock* b) {
    c.emplace_back(b, 0);
    return c;
  }

  // Locates point `p`; `cont` receives the continuation after it.
  const AnnotatedStatement* find(const AnnotatedBlock& block, ProgramPoint p, Cont& cont) const {
    for (std::size_t i = 0; i < block.size(); ++i) {
      cont.emplace_back(&block, i + 1);
      if (block[i].point == p) return &block[i];
      for (const auto* sub : {&block[i].then_block, &block[i].else_block}) {
        if (const auto* s = find(*sub, p, cont)) return s;
      }
      cont.pop_back();
    }
    return nullptr;
  }

  static void normalize(Cont& c) {
    while (!c.empty() && c.back().second >= c.back().first->size()) c.pop_back();
  }

  ProgramPoint first_use(Cont c, const Ident& v) const {
    normalize(c);
    if (c.empty()) return kNever;
    const AnnotatedStatement& s = (*c.back().first)[c.back().second];
    ++c.back().second;
    Cont rest = c;
    normalize(rest);
    bool tail = rest.empty();
    if (references(*s.stmt, !proc_.is_entry, tail).count(v)) return s.point;
    if (std::holds_alternative<uil::If>(s.stmt->node)) {
      return std::min(first_use(push(c, &s.then_block), v),
                      first_use(push(c, &s.else_block), v));
    }
    if (const auto* a = std::get_if<uil::Assign>(&s.stmt->node); a && a->dst == v) {
      return kNever;
    }
    return first_use(c, v);
  }

  const AnnotatedProcedure& proc_;
};

std::set<Ident> all_names(const AnnotatedProcedure& p) {
  std::set<Ident> out{"RET"};
  for (ProgramPoint q = 0; q < p.num_points; ++q) {
    for (const auto& [v, _] : p.table.after(q)) out.insert(v);
  }
  for (const auto& v : p.params) out.insert(v);
  for (int i = 0; i < 10; ++i) out.insert("v" + std::to_string(i));
  return out;
}

TEST(NextUse, MatchesPathEnumerationOnGeneratedPrograms) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    GeneratorOptions g = fuzz_options(seed);
    g.max_statements = 16;
    auto ap = annotate(generate_program(rng, g));
    std::vector<const AnnotatedProcedure*> procs{&ap.entry};
    for (const auto& d : ap.definitions) procs.push_back(&d);
    for (const auto* proc : procs) {
      PathOracle oracle(*proc);
      for (ProgramPoint p = 0; p < proc->num_points; ++p) {
        for (const auto& v : all_names(*proc)) {
          ASSERT_EQ(proc->table.next_use(p, v), oracle.next_use(p, v))
              << "seed " << seed << " point " << p << " name " << v << "\n"
              << uil::print(*ap.source);
        }
      }
    }
  }
}

TEST(NextUse, LiveOutAgreesWithTable) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    auto ap = annotate(generate_program(rng, fuzz_options(seed)));
    std::function<void(const AnnotatedBlock&)> walk = [&](const AnnotatedBlock& b) {
      for (const auto& a : b) {
        if (!std::holds_alternative<uil::If>(a.stmt->node)) {
          NameSet keys;
          for (const auto& [v, _] : ap.entry.table.after(a.point)) keys.insert(v);
          ASSERT_EQ(keys, a.live_out);
        }
        walk(a.then_block);
        walk(a.else_block);
      }
    };
    walk(ap.entry.body);
  }
}

}  // namespace
}  // namespace mtsra::analysis
