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

#include "mtsra/uil.hpp"

namespace mtsra::uil {

bool operator==(const Assign& a, const Assign& b) {
  return a.dst == b.dst && a.rhs == b.rhs;
}

bool operator==(const MemWrite& a, const MemWrite& b) {
  return a.base == b.base && a.index == b.index && a.src == b.src;
}

bool operator==(const If& a, const If& b) {
  return a.test == b.test && a.then_branch == b.then_branch &&
         a.else_branch == b.else_branch;
}

bool operator==(const Call& a, const Call& b) {
  return a.callee == b.callee && a.args == b.args;
}

bool operator==(const Return& a, const Return& b) {
  return a.value == b.value;
}

bool operator==(const Statement& a, const Statement& b) {
  return a.node == b.node;
}

bool operator==(const Definition& a, const Definition& b) {
  return a.name == b.name && a.params == b.params && a.body == b.body;
}

bool operator==(const Program& a, const Program& b) {
  return a.definitions == b.definitions && a.body == b.body;
}

const Definition* Program::find(std::string_view name) const {
  for (const auto& def : definitions) {
    if (def.name == name) return &def;
  }
  return nullptr;
}

ParseError::ParseError(SourceLoc loc, const std::string& what)
    : std::runtime_error(std::to_string(loc.line) + ":" +
                         std::to_string(loc.column) + ": " + what),
      loc_(loc) {}

}  // namespace mtsra::uil
