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

#include <algorithm>
#include <map>

#include "mtsra/allocator.hpp"

namespace mtsra {
namespace {

class Sequencer {
 public:
  Sequencer(const Model& m, const MoveMapping& moves, unsigned registers,
            std::span<const ConstantMove> constants)
      : model_(m), registers_(registers), constants_(constants) {
    for (const auto& [src, dst] : moves) {
      if (!dsts_.insert(dst).second) {
        throw ModelFault("shuffle: " + to_string(dst) + " is a destination twice");
      }
      srcs_.insert(src);
      if (src != dst) pending_[dst] = src;
    }
    for (const auto& c : constants) {
      if (!dsts_.insert(c.dst).second) {
        throw ModelFault("shuffle: " + to_string(c.dst) + " is a destination twice");
      }
    }
  }

  std::vector<Inst> run() {
    emit_paths();
    while (!pending_.empty()) emit_loop(pending_.begin()->first);
    for (const auto& c : constants_) emit_constant(c);
    return std::move(out_);
  }

  // Registers used as temporaries; whatever they held is gone.
  const std::set<Location>& clobbered() const { return clobbered_; }

 private:
  bool is_pending_source(Location loc) const {
    return std::any_of(pending_.begin(), pending_.end(),
                       [&](const auto& kv) { return kv.second == loc; });
  }

  // A register whose current value is not needed by the rest of the
  // shuffle nor by any name the shuffle leaves in place.
  std::optional<unsigned> spare_register(std::optional<Location> busy) const {
    for (unsigned r = 0; r < registers_; ++r) {
      Location loc = Location::reg(r);
      if (busy && *busy == loc) continue;
      if (dsts_.count(loc) || is_pending_source(loc)) continue;
      if (model_.reg_occupant(r) && !srcs_.count(loc)) continue;
      return r;
    }
    return std::nullopt;
  }

  std::size_t scratch_slot() {
    std::size_t s = 0;
    auto taken = [&](std::size_t i) {
      Location loc = Location::slot(i);
      return model_.slot_occupant(i) || dsts_.count(loc) || srcs_.count(loc) ||
             used_scratch_.count(i);
    };
    while (taken(s)) ++s;
    used_scratch_.insert(s);
    return s;
  }

  // Runs `body` with some register it may clobber. Borrows one through a
  // scratch slot when nothing is spare.
  template <typename Body>
  void with_scratch_register(std::optional<Location> busy, Body body) {
    if (auto r = spare_register(busy)) {
      clobbered_.insert(Location::reg(*r));
      body(Reg{*r});
      return;
    }
    unsigned r = 0;
    while (busy && *busy == Location::reg(r)) ++r;
    std::size_t keep = scratch_slot();
    out_.push_back(StoreInst{keep, Reg{r}});
    body(Reg{r});
    out_.push_back(LoadInst{Reg{r}, keep});
    used_scratch_.erase(keep);
  }

  void emit_move(Location src, Location dst, std::optional<Location> busy = {}) {
    if (src == dst) return;
    if (src.is_reg() && dst.is_reg()) {
      out_.push_back(MoveInst{Reg{unsigned(dst.index)}, Reg{unsigned(src.index)}});
    } else if (src.is_reg()) {
      out_.push_back(StoreInst{dst.index, Reg{unsigned(src.index)}});
    } else if (dst.is_reg()) {
      out_.push_back(LoadInst{Reg{unsigned(dst.index)}, src.index});
    } else {
      with_scratch_register(busy, [&](Reg r) {
        out_.push_back(LoadInst{r, src.index});
        out_.push_back(StoreInst{dst.index, r});
      });
    }
  }

  void emit_constant(const ConstantMove& c) {
    auto put = [&](Reg r) {
      if (const auto* w = std::get_if<Word>(&c.value)) {
        out_.push_back(LoadImmInst{r, *w});
      } else {
        out_.push_back(LoadLabelInst{r, std::get<std::string>(c.value)});
      }
    };
    if (c.dst.is_reg()) {
      put(Reg{unsigned(c.dst.index)});
      return;
    }
    with_scratch_register(std::nullopt, [&](Reg r) {
      put(r);
      out_.push_back(StoreInst{c.dst.index, r});
    });
  }

  void emit_paths() {
    bool progress = true;
    while (progress) {
      progress = false;
      for (auto it = pending_.begin(); it != pending_.end();) {
        if (is_pending_source(it->first)) {
          ++it;
          continue;
        }
        emit_move(it->second, it->first);
        it = pending_.erase(it);
        progress = true;
      }
    }
  }

  // Every pending location is now on a simple cycle.
  void emit_loop(Location start) {
    Location temp;
    if (auto r = spare_register(std::nullopt)) {
      temp = Location::reg(*r);
      clobbered_.insert(temp);
    } else {
      temp = Location::slot(scratch_slot());
    }
    emit_move(start, temp);
    Location cur = start;
    for (;;) {
      Location src = pending_.at(cur);
      pending_.erase(cur);
      if (src == start) {
        emit_move(temp, cur, temp);
        break;
      }
      emit_move(src, cur, temp);
      cur = src;
    }
    if (temp.is_slot()) used_scratch_.erase(temp.index);
  }

  const Model& model_;
  unsigned registers_;
  std::span<const ConstantMove> constants_;
  std::set<Location> dsts_;
  std::set<Location> srcs_;
  std::map<Location, Location> pending_;  // dst -> src
  std::set<std::size_t> used_scratch_;
  std::set<Location> clobbered_;
  std::vector<Inst> out_;
};

Model rebind(const Model& m, const MoveMapping& moves,
             std::span<const ConstantMove> constants, std::set<Location> overwritten) {
  for (const auto& [src, dst] : moves) {
    if (src != dst) overwritten.insert(dst);
  }
  for (const auto& c : constants) overwritten.insert(c.dst);

  std::vector<std::pair<std::uint64_t, Ident>> order;
  for (const auto& v : m.names()) order.emplace_back(m.reg_stamp(v), v);
  std::sort(order.begin(), order.end());

  struct Placement {
    std::optional<unsigned> reg;
    std::optional<std::size_t> slot;
  };
  std::vector<std::pair<Ident, Placement>> placed;
  for (const auto& [stamp, v] : order) {
    Placement p;
    std::vector<Location> homes;
    if (auto r = m.reg_of(v)) homes.push_back(Location::reg(*r));
    if (auto s = m.slot_of(v)) homes.push_back(Location::slot(*s));
    for (const auto& [src, dst] : moves) {
      if (std::find(homes.begin(), homes.end(), src) == homes.end()) continue;
      if (dst.is_reg() && !p.reg) p.reg = unsigned(dst.index);
      if (dst.is_slot() && !p.slot) p.slot = dst.index;
    }
    for (const auto& h : homes) {
      if (overwritten.count(h)) continue;
      if (h.is_reg() && !p.reg) p.reg = unsigned(h.index);
      if (h.is_slot() && !p.slot) p.slot = h.index;
    }
    placed.emplace_back(v, p);
  }

  Model out;
  for (const auto& [v, p] : placed) {
    if (p.reg) out = out.bind_reg(v, *p.reg);
    if (p.slot) out = out.bind_slot(v, *p.slot);
  }
  return out;
}

}  // namespace

Transformed shuffle(const Model& m, const MoveMapping& moves, unsigned registers,
                    std::span<const ConstantMove> constants) {
  Sequencer seq(m, moves, registers, constants);
  std::vector<Inst> insts = seq.run();
  return {rebind(m, moves, constants, seq.clobbered()), std::move(insts)};
}

}  // namespace mtsra
