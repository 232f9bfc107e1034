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

#include "mtsra/allocator.hpp"
#include "test_support.hpp"

namespace mtsra {
namespace {

using testing::LocationMachine;
using testing::machine_for;

Location R(unsigned i) { return Location::reg(i); }
Location S(std::size_t i) { return Location::slot(i); }

// Binds a distinct name to every source location of the mapping.
Model model_for_sources(const MoveMapping& moves) {
  Model m;
  int n = 0;
  for (const auto& [src, dst] : moves) {
    if (src.is_reg() ? m.reg_occupant(unsigned(src.index)).has_value()
                     : m.slot_occupant(src.index).has_value()) {
      continue;
    }
    std::string v = "s" + std::to_string(n++);
    m = src.is_reg() ? m.bind_reg(v, unsigned(src.index)) : m.bind_slot(v, src.index);
  }
  return m;
}

void expect_realizes(const Model& m, const MoveMapping& moves, unsigned registers,
                     const Transformed& t) {
  LocationMachine before = machine_for(m);
  LocationMachine after = before;
  ASSERT_TRUE(after.exec(t.insts));
  std::set<Location> dsts;
  for (const auto& [src, dst] : moves) {
    EXPECT_EQ(after.get(dst), before.get(src)) << to_string(src) << " -> " << to_string(dst);
    dsts.insert(dst);
  }
  for (const auto& [loc, value] : before.cells) {
    if (!dsts.count(loc) && !(loc.is_reg() && loc.index >= registers)) {
      bool is_source = false;
      for (const auto& [src, dst] : moves) is_source |= src == loc;
      if (!is_source) {
        EXPECT_EQ(after.get(loc), value) << "bystander " << to_string(loc);
      }
    }
  }
  for (const auto& [v, r] : t.model.regs()) EXPECT_EQ(after.get(R(r)), v);
  for (const auto& [v, s] : t.model.slots()) EXPECT_EQ(after.get(S(s)), v);
}

TEST(Shuffle, PathAndLoop) {
  MoveMapping moves{{R(0), R(1)}, {R(1), R(2)}, {R(2), R(0)}, {R(3), R(4)}, {R(4), R(5)}};
  Model m = model_for_sources(moves);
  Transformed t = shuffle(m, moves, 6);
  EXPECT_EQ(t.insts.size(), 6u);
  expect_realizes(m, moves, 6, t);
  // With a free register the loop temporary stays in registers.
  Transformed roomy = shuffle(m, moves, 7);
  EXPECT_EQ(roomy.insts.size(), 6u);
  for (const auto& i : roomy.insts) EXPECT_TRUE(std::holds_alternative<MoveInst>(i));
  expect_realizes(m, moves, 7, roomy);
}

TEST(Shuffle, PathsEmitDeepestDestinationFirst) {
  MoveMapping moves{{R(1), R(2)}, {R(2), R(3)}};
  Model m = model_for_sources(moves);
  Transformed t = shuffle(m, moves, 4);
  ASSERT_EQ(t.insts.size(), 2u);
  EXPECT_EQ(to_string(t.insts[0]), "move r3, r2");
  EXPECT_EQ(to_string(t.insts[1]), "move r2, r1");
}

TEST(Shuffle, IdentityEmitsNothing) {
  MoveMapping moves{{R(0), R(0)}, {S(1), S(1)}, {R(2), R(2)}};
  Model m = model_for_sources(moves);
  Transformed t = shuffle(m, moves, 3);
  EXPECT_TRUE(t.insts.empty());
  EXPECT_EQ(t.model, m);
}

TEST(Shuffle, RejectsDuplicateDestination) {
  MoveMapping moves{{R(0), R(2)}, {R(1), R(2)}};
  EXPECT_THROW(shuffle(model_for_sources(moves), moves, 3), ModelFault);
}

TEST(Shuffle, SlotToSlotBorrowsARegisterWhenNoneIsFree) {
  Model m = Model{}.bind_reg("a", 0).bind_reg("b", 1).bind_slot("c", 0);
  MoveMapping moves{{S(0), S(1)}};
  Transformed t = shuffle(m, moves, 2);
  EXPECT_EQ(t.insts.size(), 4u);
  expect_realizes(m, moves, 2, t);
  EXPECT_EQ(t.model.to_string(), "{a:r0, b:r1}{c:fv1}");
}

TEST(Shuffle, ConstantsLandAfterMoves) {
  Model m = Model{}.bind_reg("a", 1);
  MoveMapping moves{{R(1), R(2)}};
  std::vector<ConstantMove> constants{{R(1), Word{7}}, {R(0), std::string("L.x")}};
  Transformed t = shuffle(m, moves, 3, constants);
  LocationMachine lm = machine_for(m);
  ASSERT_TRUE(lm.exec(t.insts));
  EXPECT_EQ(lm.get(R(2)), "a");
  EXPECT_EQ(lm.get(R(1)), "#7");
  EXPECT_EQ(lm.get(R(0)), "@L.x");
}

MoveMapping random_mapping(std::mt19937_64& rng, unsigned registers, std::size_t slots) {
  std::vector<Location> pool;
  for (unsigned r = 0; r < registers; ++r) pool.push_back(R(r));
  for (std::size_t s = 0; s < slots; ++s) pool.push_back(S(s));
  std::shuffle(pool.begin(), pool.end(), rng);
  std::size_t n = std::uniform_int_distribution<std::size_t>(0, std::min<std::size_t>(6, pool.size()))(rng);
  std::vector<Location> dsts(pool.begin(), pool.begin() + n);
  std::vector<Location> universe(pool.begin(), pool.begin() + std::min<std::size_t>(6, pool.size()));
  MoveMapping moves;
  for (const auto& d : dsts) {
    moves.emplace_back(universe[rng() % universe.size()], d);
  }
  return moves;
}

TEST(Shuffle, RandomMappingsRealizeSimultaneousAssignment) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    unsigned registers = 2 + static_cast<unsigned>(rng() % 5);
    MoveMapping moves = random_mapping(rng, registers, rng() % 4);
    Model m = model_for_sources(moves);
    // Bystanders: names at locations the mapping does not touch.
    for (unsigned r = 0; r < registers; ++r) {
      if (!m.reg_occupant(r) && rng() % 2 == 0) {
        bool touched = false;
        for (const auto& [src, dst] : moves) touched |= dst == R(r);
        if (!touched) m = m.bind_reg("b" + std::to_string(r), r);
      }
    }
    Transformed t = shuffle(m, moves, registers);
    SCOPED_TRACE("case " + std::to_string(i));
    expect_realizes(m, moves, registers, t);
  }
}

TEST(Shuffle, PureLoopsCostOneExtraMoveEach) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 500; ++i) {
    unsigned n = 2 + static_cast<unsigned>(rng() % 5);
    std::vector<unsigned> perm(n);
    for (unsigned k = 0; k < n; ++k) perm[k] = k;
    std::shuffle(perm.begin(), perm.end(), rng);
    MoveMapping moves;
    std::set<unsigned> seen;
    std::size_t loops = 0, involved = 0;
    for (unsigned k = 0; k < n; ++k) {
      if (perm[k] == k) continue;
      moves.emplace_back(R(k), R(perm[k]));
      ++involved;
      if (seen.count(k)) continue;
      ++loops;
      for (unsigned c = k; !seen.count(c); c = perm[c]) seen.insert(c);
    }
    Model m = model_for_sources(moves);
    unsigned registers = n + static_cast<unsigned>(rng() % 2);
    Transformed t = shuffle(m, moves, registers);
    EXPECT_EQ(t.insts.size(), involved + loops);
    expect_realizes(m, moves, registers, t);
  }
}

}  // namespace
}  // namespace mtsra
