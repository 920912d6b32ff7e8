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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "intentdiv/candidate.hpp"
#include "intentdiv/diversifier.hpp"
#include "intentdiv/random.hpp"

namespace intentdiv::fixtures {

inline Candidate MakeCandidate(std::string id, double quality, double base_value,
                               std::vector<IntentIndex> aligned, bool novelty = false) {
  Candidate c;
  c.item_id = std::move(id);
  c.quality = quality;
  c.base_value = base_value;
  c.aligned = std::move(aligned);
  c.novelty = novelty;
  NormalizeAlignment(c);
  return c;
}

// The hand-traced case: prior (0.6, 0.4), three items with s = 1, q = 0.8
// aligned with {A}, {A}, {B}.
inline std::vector<Candidate> WorkedCandidates() {
  return {MakeCandidate("c1", 1.0, 0.8, {0}), MakeCandidate("c2", 1.0, 0.8, {0}),
          MakeCandidate("c3", 1.0, 0.8, {1})};
}

inline IntentDistribution RandomPrior(StreamRng& rng, std::size_t n) {
  std::vector<double> p(n);
  double total = 0.0;
  for (double& x : p) {
    x = -std::log(1.0 - rng.Uniform());
    total += x;
  }
  for (double& x : p) x /= total;
  return IntentDistribution(std::move(p), Normalization::kNormalized);
}

struct Instance {
  IntentDistribution prior;
  std::vector<Candidate> candidates;
  double epsilon = 1e-12;
};

// Random diversification problem. A share of instances use near-one base
// values, items aligned with every intent and a wide epsilon so that the
// degenerate update path is exercised.
inline Instance RandomInstance(StreamRng& rng, std::size_t max_items, std::size_t max_intents) {
  Instance inst;
  const std::size_t n_intents = 1 + rng.Below(max_intents);
  const std::size_t n_items = 1 + rng.Below(max_items);
  const bool stress = rng.Uniform() < 0.1;
  if (stress) inst.epsilon = 5e-7;
  inst.prior = RandomPrior(rng, n_intents);
  for (std::size_t j = 0; j < n_items; ++j) {
    std::vector<IntentIndex> aligned;
    if (stress && rng.Uniform() < 0.3) {
      for (std::size_t v = 0; v < n_intents; ++v) aligned.push_back(static_cast<IntentIndex>(v));
    } else {
      const std::size_t k = 1 + rng.Below(std::min<std::size_t>(3, n_intents));
      while (aligned.size() < k) {
        const auto v = static_cast<IntentIndex>(rng.Below(n_intents));
        if (std::find(aligned.begin(), aligned.end(), v) == aligned.end()) aligned.push_back(v);
      }
    }
    double q = rng.Uniform() * 0.99;
    if (stress && rng.Uniform() < 0.5) q = kMaxBaseValue;
    // Coarse qualities make exact score ties, and tie-breaks, common.
    const double s = rng.Uniform() < 0.2 ? 0.5 : rng.Uniform();
    inst.candidates.push_back(MakeCandidate("item" + std::to_string(j), s, q, std::move(aligned)));
  }
  return inst;
}

}  // namespace intentdiv::fixtures
