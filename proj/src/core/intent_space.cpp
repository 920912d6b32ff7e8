// Copyright 2026 The intentdiv Authors.
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

#include "intentdiv/intent_space.hpp"

#include "intentdiv/errors.hpp"

namespace intentdiv {

IntentSpace::IntentSpace(std::vector<std::string> ids) : ids_(std::move(ids)) {
  if (ids_.empty()) throw InputError("intent space must contain at least one intent");
  lookup_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    auto [it, inserted] = lookup_.emplace(ids_[i], static_cast<IntentIndex>(i));
    if (!inserted) throw InputError("duplicate intent id '" + ids_[i] + "'");
  }
}

IntentSpace IntentSpace::Dense(std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return IntentSpace(std::move(ids));
}

const std::string& IntentSpace::id(IntentIndex index) const {
  if (index >= ids_.size()) throw InputError("intent index out of range");
  return ids_[index];
}

IntentIndex IntentSpace::index(std::string_view id) const {
  if (auto found = find(id)) return *found;
  throw InputError("unknown intent id '" + std::string(id) + "'");
}

std::optional<IntentIndex> IntentSpace::find(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

}  // namespace intentdiv
