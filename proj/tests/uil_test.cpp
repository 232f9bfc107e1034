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

#include <random>

#include "mtsra/generator.hpp"
#include "mtsra/uil.hpp"

namespace mtsra::uil {
namespace {

using Kind = Diagnostic::Kind;

constexpr const char* kSum = R"(
(letrec ((sum (lambda (n acc)
                (if (<= n 0)
                    (begin (return acc))
                    (begin (set! m (- n 1))
                           (set! a (+ acc n))
                           (sum m a))))))
  (set! r (sum 10 0))
  (return r))
)";

std::vector<Kind> kinds(const std::vector<Diagnostic>& ds) {
  std::vector<Kind> out;
  for (const auto& d : ds) out.push_back(d.kind);
  return out;
}

TEST(Parse, BuildsStatements) {
  Program p = parse(kSum);
  ASSERT_EQ(p.definitions.size(), 1u);
  const Definition& sum = p.definitions[0];
  EXPECT_EQ(sum.name, "sum");
  EXPECT_EQ(sum.params, (std::vector<Ident>{"n", "acc"}));
  ASSERT_EQ(sum.body.size(), 1u);
  const auto& node = std::get<If>(sum.body[0].node);
  EXPECT_EQ(node.test.rel, Relation::kLe);
  EXPECT_EQ(node.then_branch.size(), 1u);
  EXPECT_EQ(node.else_branch.size(), 3u);
  ASSERT_EQ(p.body.size(), 2u);
  const auto& call = std::get<Assign>(p.body[0].node);
  EXPECT_EQ(call.dst, "r");
  EXPECT_EQ(std::get<CallRhs>(call.rhs).args, (std::vector<Operand>{Operand(10), Operand(0)}));
  EXPECT_TRUE(validate(p).empty());
}

TEST(Parse, NegativeImmediatesAndComments) {
  Program p = parse("(letrec () ; nothing defined\n (set! x -7) (return x))");
  EXPECT_EQ(std::get<Operand>(std::get<Assign>(p.body[0].node).rhs), Operand(-7));
}

TEST(Parse, RejectsMalformedInput) {
  EXPECT_THROW(parse("(letrec () (return x)"), ParseError);
  EXPECT_THROW(parse("(letrec () (set! RET 1) (return 1))"), ParseError);
  EXPECT_THROW(parse("(letrec () (set! if 1) (return 1))"), ParseError);
  EXPECT_THROW(parse("(letrec () (set! x 99999999999999999999) (return x))"), ParseError);
  EXPECT_THROW(parse("(letrec () (set! x (/ 1 2)) (return x))"), ParseError);
  EXPECT_THROW(parse("(letrec ((f (lambda () (return 1))) (f (lambda () (return 2)))) (f))"),
               ParseError);
  EXPECT_THROW(parse("(letrec () (return 1)) extra"), ParseError);
}

TEST(Parse, ReportsLocation) {
  try {
    parse("(letrec ()\n  (set! x (% 1 2))\n  (return x))");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.loc().line, 2);
  }
}

TEST(Print, CanonicalForm) {
  Program p = parse("(letrec () (set! x 1) (if (< x 2) (begin (set! y 3)) (begin (set! y 4)))"
                    " (mset! y 0 x) (return y))");
  EXPECT_EQ(print(p),
            "(letrec ()\n"
            "  (set! x 1)\n"
            "  (if (< x 2)\n"
            "    (begin\n"
            "      (set! y 3))\n"
            "    (begin\n"
            "      (set! y 4)))\n"
            "  (mset! y 0 x)\n"
            "  (return y))\n");
}

TEST(Print, RoundTripsHandWrittenProgram) {
  Program p = parse(kSum);
  EXPECT_EQ(parse(print(p)), p);
  EXPECT_EQ(print(parse(print(p))), print(p));
}

TEST(Print, RoundTripsGeneratedPrograms) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    std::mt19937_64 rng(seed);
    Program p = generate_program(rng, fuzz_options(seed));
    std::string text = print(p);
    Program back = parse(text);
    ASSERT_EQ(back, p) << text;
    ASSERT_EQ(print(back), text);
  }
}

TEST(Validate, AcceptsGeneratedPrograms) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    std::mt19937_64 rng(seed);
    Program p = generate_program(rng, fuzz_options(seed));
    auto ds = validate(p);
    ASSERT_TRUE(ds.empty()) << to_string(ds.front()) << "\n" << print(p);
  }
}

TEST(Validate, UseBeforeDefinition) {
  auto ds = validate(parse("(letrec () (set! x (+ y 1)) (return x))"));
  ASSERT_EQ(kinds(ds), std::vector<Kind>{Kind::kUseBeforeDef});
  EXPECT_EQ(ds[0].statement, 1u);
  EXPECT_EQ(ds[0].procedure, "");
}

TEST(Validate, DefinitionOnOneBranchOnly) {
  auto ds = validate(parse(
      "(letrec () (set! a 1) (if (< a 2) (begin (set! b 1)) (begin (set! c 2))) (return b))"));
  EXPECT_EQ(kinds(ds), std::vector<Kind>{Kind::kUseBeforeDef});
  EXPECT_TRUE(validate(parse("(letrec () (set! a 1) (if (< a 2) (begin (set! b 1)) "
                             "(begin (set! b 2))) (return b))"))
                  .empty());
}

TEST(Validate, CallShape) {
  EXPECT_EQ(kinds(validate(parse("(letrec ((f (lambda (a) (return a)))) (f 1 2))"))),
            std::vector<Kind>{Kind::kArity});
  EXPECT_EQ(kinds(validate(parse("(letrec () (g 1))"))),
            std::vector<Kind>{Kind::kUnknownCallee});
}

TEST(Validate, Names) {
  EXPECT_EQ(kinds(validate(parse("(letrec ((f (lambda (a a) (return a)))) (f 1 2))"))),
            std::vector<Kind>{Kind::kDuplicateParam});
  EXPECT_EQ(kinds(validate(parse("(letrec ((f (lambda (a) (return a)))) (set! f 1) (f f))"))),
            (std::vector<Kind>{Kind::kNameClash, Kind::kNameClash}));
}

TEST(Validate, TailShape) {
  EXPECT_EQ(kinds(validate(parse("(letrec () (set! x 1))"))),
            std::vector<Kind>{Kind::kNotTail});
  EXPECT_EQ(kinds(validate(parse("(letrec () (return 1) (return 2))"))),
            std::vector<Kind>{Kind::kMisplacedReturn});
  EXPECT_EQ(kinds(validate(parse("(letrec ((f (lambda () (return 1)))) (f))"))),
            std::vector<Kind>{});
  EXPECT_EQ(kinds(validate(parse("(letrec () (set! x 1) (if (< x 1) (begin (return 1)) "
                                 "(begin)))"))),
            std::vector<Kind>{Kind::kNotTail});
}

TEST(Validate, EmptyBody) {
  EXPECT_EQ(kinds(validate(parse("(letrec ((f (lambda () ))) (f))"))),
            std::vector<Kind>{Kind::kEmptyBody});
}

TEST(Validate, DiagnosticText) {
  auto ds = validate(parse("(letrec ((f (lambda (a) (return b)))) (f 1))"));
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_NE(to_string(ds[0]).find("b"), std::string::npos);
  EXPECT_NE(to_string(ds[0]).find("f"), std::string::npos);
}

}  // namespace
}  // namespace mtsra::uil
