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

#include "intentdiv/candidate.hpp"

#include <algorithm>
#include <cmath>

#include "intentdiv/errors.hpp"

namespace intentdiv {

bool Candidate::aligned_with(IntentIndex v) const {
  return std::binary_search(aligned.begin(), aligned.end(), v);
}

void NormalizeAlignment(Candidate& candidate) {
  std::sort(candidate.aligned.begin(), candidate.aligned.end());
  candidate.aligned.erase(std::unique(candidate.aligned.begin(), candidate.aligned.end()),
                          candidate.aligned.end());
}

void Validate(const Candidate& candidate, std::size_t num_intents) {
  const std::string who = "candidate '" + candidate.item_id + "': ";
  if (!std::isfinite(candidate.quality) || candidate.quality < 0.0) {
    throw InputError(who + "quality must be finite and non-negative");
  }
  if (!std::isfinite(candidate.base_value) || candidate.base_value < 0.0 ||
      candidate.base_value > kMaxBaseValue) {
    throw InputError(who + "base_value must lie in [0, 1 - 1e-9]");
  }
  if (candidate.aligned.empty()) throw InputError(who + "aligned intent set is empty");
  for (std::size_t k = 0; k < candidate.aligned.size(); ++k) {
    if (candidate.aligned[k] >= num_intents) {
      throw InputError(who + "aligned intent outside the intent space");
    }
    if (k > 0 && candidate.aligned[k] <= candidate.aligned[k - 1]) {
      throw InputError(who + "aligned intents must be sorted and unique");
    }
  }
}

}  // namespace intentdiv
