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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace intentdiv {

// Dense index of an intent inside an IntentSpace, in 0..size()-1.
using IntentIndex = std::uint32_t;

// Ordered set of intent identifiers with a bijection onto dense indices.
class IntentSpace {
 public:
  IntentSpace() = default;

  // Throws InputError on an empty list or duplicate ids.
  explicit IntentSpace(std::vector<std::string> ids);

  // Intents named "0", "1", ..., "n-1".
  static IntentSpace Dense(std::size_t n);

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  const std::string& id(IntentIndex index) const;
  const std::vector<std::string>& ids() const { return ids_; }

  // Throws InputError for an unknown id.
  IntentIndex index(std::string_view id) const;
  std::optional<IntentIndex> find(std::string_view id) const;

  bool operator==(const IntentSpace& other) const { return ids_ == other.ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, IntentIndex> lookup_;
};

}  // namespace intentdiv
