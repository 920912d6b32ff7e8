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

#include <string>
#include <vector>

#include "intentdiv/intent_space.hpp"

namespace intentdiv {

// Largest admissible base value; keeps 1 - Q(j|i) away from zero.
inline constexpr double kMaxBaseValue = 1.0 - 1e-9;

// One recommendation item as seen by the diversifier.
struct Candidate {
  std::string item_id;
  double quality = 0.0;     // upstream ranking score s_ij, >= 0
  double base_value = 0.0;  // enjoyment probability Q(j|i)
  std::vector<IntentIndex> aligned;  // sorted, unique, non-empty
  bool novelty = false;

  bool aligned_with(IntentIndex v) const;
};

// Sorts and deduplicates `aligned`.
void NormalizeAlignment(Candidate& candidate);

// Throws InputError when the candidate breaks an invariant for an intent
// space of the given size: negative or non-finite quality, base value
// outside [0, kMaxBaseValue], empty or out-of-range alignment, unsorted
// alignment.
void Validate(const Candidate& candidate, std::size_t num_intents);

}  // namespace intentdiv
