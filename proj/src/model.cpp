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

#include "mtsra/model.hpp"

#include <algorithm>
#include <sstream>

namespace mtsra {

std::string to_string(Location loc) {
  return (loc.is_reg() ? "r" : "fv") + std::to_string(loc.index);
}

MachineConfig MachineConfig::standard(unsigned registers) {
  MachineConfig cfg;
  cfg.registers = registers;
  cfg.ret_addr_reg = 0;
  cfg.ret_val_reg = 1;
  cfg.arg_regs.clear();
  unsigned last = registers <= 2 ? 1 : std::min(registers - 2, 4u);
  for (unsigned r = 1; r <= last; ++r) cfg.arg_regs.push_back(r);
  return cfg;
}

void MachineConfig::check() const {
  if (registers < 2) {
    throw std::invalid_argument("at least 2 registers are required, got " +
                                std::to_string(registers));
  }
  std::set<unsigned> seen{ret_addr_reg};
  if (ret_addr_reg >= registers || ret_val_reg >= registers) {
    throw std::invalid_argument("return registers out of range");
  }
  if (ret_val_reg == ret_addr_reg) {
    throw std::invalid_argument("return value and return address share a register");
  }
  for (unsigned r : arg_regs) {
    if (r >= registers || !seen.insert(r).second) {
      throw std::invalid_argument("argument registers must be distinct, in range, "
                                  "and exclude the return-address register");
    }
  }
}

std::optional<unsigned> Model::reg_of(const Ident& v) const {
  auto it = regs_.find(v);
  if (it == regs_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Model::slot_of(const Ident& v) const {
  auto it = slots_.find(v);
  if (it == slots_.end()) return std::nullopt;
  return it->second;
}

Location Model::whereis(const Ident& v) const {
  if (auto r = reg_of(v)) return Location::reg(*r);
  if (auto s = slot_of(v)) return Location::slot(*s);
  throw ModelFault("'" + v + "' is not bound in model " + to_string());
}

std::optional<Ident> Model::reg_occupant(unsigned r) const {
  for (const auto& [v, reg] : regs_) {
    if (reg == r) return v;
  }
  return std::nullopt;
}

std::optional<Ident> Model::slot_occupant(std::size_t s) const {
  for (const auto& [v, slot] : slots_) {
    if (slot == s) return v;
  }
  return std::nullopt;
}

Model Model::bind_reg(const Ident& v, unsigned r) const {
  if (auto other = reg_occupant(r); other && *other != v) {
    throw ModelFault("r" + std::to_string(r) + " already holds '" + *other + "'");
  }
  Model m = *this;
  m.regs_[v] = r;
  m.stamps_[v] = ++m.clock_;
  return m;
}

Model Model::bind_slot(const Ident& v, std::size_t s) const {
  if (auto other = slot_occupant(s); other && *other != v) {
    throw ModelFault("fv" + std::to_string(s) + " already holds '" + *other + "'");
  }
  Model m = *this;
  m.slots_[v] = s;
  return m;
}

Model Model::unbind_reg(const Ident& v) const {
  Model m = *this;
  m.regs_.erase(v);
  m.stamps_.erase(v);
  return m;
}

Model Model::unbind_slot(const Ident& v) const {
  Model m = *this;
  m.slots_.erase(v);
  return m;
}

Model Model::drop(const std::set<Ident>& vs) const {
  Model m = *this;
  for (const auto& v : vs) {
    m.regs_.erase(v);
    m.slots_.erase(v);
    m.stamps_.erase(v);
  }
  return m;
}

Model Model::drop(const Ident& v) const { return drop(std::set<Ident>{v}); }

Model Model::restrict_to(const std::set<Ident>& vs) const {
  std::set<Ident> gone;
  for (const auto& v : names()) {
    if (!vs.count(v)) gone.insert(v);
  }
  return drop(gone);
}

std::optional<unsigned> Model::free_register(unsigned registers) const {
  std::vector<bool> used(registers, false);
  for (const auto& [v, r] : regs_) {
    if (r < registers) used[r] = true;
  }
  for (unsigned r = 0; r < registers; ++r) {
    if (!used[r]) return r;
  }
  return std::nullopt;
}

std::size_t Model::free_slot() const {
  std::set<std::size_t> used;
  for (const auto& [v, s] : slots_) used.insert(s);
  std::size_t s = 0;
  while (used.count(s)) ++s;
  return s;
}

std::uint64_t Model::reg_stamp(const Ident& v) const {
  auto it = stamps_.find(v);
  return it == stamps_.end() ? 0 : it->second;
}

std::set<Ident> Model::names() const {
  std::set<Ident> out;
  for (const auto& [v, r] : regs_) out.insert(v);
  for (const auto& [v, s] : slots_) out.insert(v);
  return out;
}

namespace {

template <typename Map>
void dump_map(std::ostringstream& os, const Map& m, const char* prefix) {
  const Ident ret(uil::kReturnAddress);
  std::vector<std::string> parts;
  for (const auto& [v, i] : m) {
    if (v != ret) parts.push_back(v + ":" + prefix + std::to_string(i));
  }
  if (auto it = m.find(ret); it != m.end()) {
    parts.push_back(ret + ":" + prefix + std::to_string(it->second));
  }
  os << '{';
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? ", " : "") << parts[i];
  os << '}';
}

}  // namespace

std::string Model::to_string() const {
  std::ostringstream os;
  dump_map(os, regs_, "r");
  dump_map(os, slots_, "fv");
  return os.str();
}

Model initial_model(std::span<const Ident> params, const MachineConfig& cfg) {
  Model m;
  std::size_t slot = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i] == uil::kReturnAddress) {
      throw ModelFault("RET cannot be a parameter");
    }
    if (m.contains(params[i])) throw ModelFault("duplicate parameter " + params[i]);
    if (i < cfg.arg_regs.size()) {
      m = m.bind_reg(params[i], cfg.arg_regs[i]);
    } else {
      m = m.bind_slot(params[i], slot++);
    }
  }
  return m.bind_reg(Ident(uil::kReturnAddress), cfg.ret_addr_reg);
}

}  // namespace mtsra
