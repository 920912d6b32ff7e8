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

#include "intentdiv/distribution.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "intentdiv/errors.hpp"

namespace intentdiv {

IntentDistribution::IntentDistribution(std::vector<double> probs, Normalization normalization)
    : probs_(std::move(probs)), normalization_(normalization) {
  if (probs_.empty()) throw InputError("intent distribution must be non-empty");
  for (std::size_t v = 0; v < probs_.size(); ++v) {
    const double p = probs_[v];
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw InputError("probability at index " + std::to_string(v) + " outside [0, 1]");
    }
  }
  const double total = mass();
  if (normalization_ == Normalization::kNormalized) {
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
      throw InputError("normalized distribution sums to " + std::to_string(total));
    }
  } else if (total > 1.0 + kNormalizationTolerance) {
    throw InputError("subnormalized distribution sums to " + std::to_string(total));
  }
}

IntentDistribution IntentDistribution::Uniform(std::size_t n) {
  if (n == 0) throw InputError("intent distribution must be non-empty");
  return IntentDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double IntentDistribution::mass() const {
  return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

}  // namespace intentdiv
