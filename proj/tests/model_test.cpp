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

#include "mtsra/model.hpp"
#include "test_support.hpp"

namespace mtsra {
namespace {

TEST(InitialModel, ArgumentsPastTheRegistersGoToSlots) {
  MachineConfig cfg = MachineConfig::standard(4);
  ASSERT_EQ(cfg.arg_regs, (std::vector<unsigned>{1, 2}));
  std::vector<Ident> params{"x", "y", "z"};
  Model m = initial_model(params, cfg);
  EXPECT_EQ(m.to_string(), "{x:r1, y:r2, RET:r0}{z:fv0}");
}

TEST(InitialModel, NoParameters) {
  Model m = initial_model({}, MachineConfig::standard(8));
  EXPECT_EQ(m.to_string(), "{RET:r0}{}");
}

TEST(MachineConfig, StandardLayouts) {
  EXPECT_EQ(MachineConfig::standard(2).arg_regs, std::vector<unsigned>{1});
  EXPECT_EQ(MachineConfig::standard(3).arg_regs, std::vector<unsigned>{1});
  EXPECT_EQ(MachineConfig::standard(8).arg_regs, (std::vector<unsigned>{1, 2, 3, 4}));
  EXPECT_THROW(MachineConfig::standard(1).check(), std::invalid_argument);
  MachineConfig bad = MachineConfig::standard(4);
  bad.arg_regs = {0, 1};
  EXPECT_THROW(bad.check(), std::invalid_argument);
  EXPECT_NO_THROW(MachineConfig::standard(2).check());
}

TEST(Model, MultiHomedPrinting) {
  Model m = Model{}.bind_reg("x", 1).bind_reg("y", 2).bind_slot("x", 0).bind_slot("z", 1);
  EXPECT_EQ(m.to_string(), "{x:r1, y:r2}{x:fv0, z:fv1}");
  EXPECT_EQ(m.whereis("x"), Location::reg(1));
  EXPECT_EQ(m.whereis("z"), Location::slot(1));
  EXPECT_THROW(m.whereis("w"), ModelFault);
  EXPECT_EQ(m.drop("x").to_string(), "{y:r2}{z:fv1}");
  EXPECT_EQ(m.unbind_reg("x").to_string(), "{y:r2}{x:fv0, z:fv1}");
}

TEST(Model, FirstFitFindsGaps) {
  Model m = Model{}.bind_slot("a", 0).bind_slot("b", 2).bind_reg("c", 0).bind_reg("d", 2);
  EXPECT_EQ(m.free_slot(), 1u);
  EXPECT_EQ(m.free_register(4), 1u);
  EXPECT_EQ(m.bind_reg("e", 1).free_register(3), std::nullopt);
  EXPECT_EQ(m.bind_reg("e", 1).free_register(4), 3u);
}

TEST(Model, BindingsStayInjective) {
  Model m = Model{}.bind_reg("x", 1).bind_slot("x", 3);
  EXPECT_THROW(m.bind_reg("y", 1), ModelFault);
  EXPECT_THROW(m.bind_slot("y", 3), ModelFault);
  // Rebinding a name moves it.
  Model moved = m.bind_reg("x", 2);
  EXPECT_EQ(moved.reg_occupant(1), std::nullopt);
  EXPECT_EQ(moved.reg_occupant(2), "x");
}

TEST(Model, RandomOperationsPreserveInjectivity) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 2000; ++round) {
    Model m = testing::random_model(rng, 5, 6, 6);
    for (int step = 0; step < 10; ++step) {
      std::string v = "n" + std::to_string(rng() % 8);
      unsigned r = static_cast<unsigned>(rng() % 5);
      std::size_t s = rng() % 6;
      try {
        switch (rng() % 4) {
          case 0: m = m.bind_reg(v, r); break;
          case 1: m = m.bind_slot(v, s); break;
          case 2: m = m.drop(v); break;
          default: m = m.unbind_reg(v); break;
        }
      } catch (const ModelFault&) {
      }
      std::set<unsigned> regs;
      for (const auto& [name, reg] : m.regs()) {
        ASSERT_TRUE(regs.insert(reg).second);
        ASSERT_EQ(m.reg_occupant(reg), name);
      }
      std::set<std::size_t> slots;
      for (const auto& [name, slot] : m.slots()) {
        ASSERT_TRUE(slots.insert(slot).second);
        ASSERT_EQ(m.slot_occupant(slot), name);
      }
    }
  }
}

TEST(Model, StampsFollowBindingOrder) {
  Model m = Model{}.bind_reg("b", 3).bind_reg("a", 1).bind_reg("c", 0);
  EXPECT_LT(m.reg_stamp("b"), m.reg_stamp("a"));
  EXPECT_LT(m.reg_stamp("a"), m.reg_stamp("c"));
}

}  // namespace
}  // namespace mtsra
