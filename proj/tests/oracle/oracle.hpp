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

#include <cstddef>
#include <span>
#include <vector>

#include "intentdiv/candidate.hpp"
#include "intentdiv/distribution.hpp"
#include "intentdiv/diversifier.hpp"

namespace intentdiv::oracle {

// Direct transcription of the greedy loop: dense belief, every score
// recomputed over every intent at every step. Always records dense
// snapshots. Same preconditions and errors as diversify().
RankedSlate reference_diversify(const IntentDistribution& prior,
                                std::span<const Candidate> candidates,
                                const DiversifierConfig& config);

// Exact probability that a cascade user consumes some item of `slate`: the
// intent is drawn from `prior`, positions are scanned up to `patience`, an
// aligned item is consumed with probability base_value and every rejection
// is followed by continuation with probability `lambda`.
double slate_satisfaction(const IntentDistribution& prior, std::span<const Candidate> slate,
                          std::size_t patience, double lambda);

struct BestSlate {
  std::vector<std::size_t> order;  // indices into the candidate list
  double value = 0.0;
};

// Maximizer of slate_satisfaction over all ordered k-subsets, the
// lexicographically smallest index sequence on ties. Throws InputError
// unless 1 <= k <= |candidates| <= 8.
BestSlate exhaustive_best_slate(const IntentDistribution& prior,
                                std::span<const Candidate> candidates, std::size_t k,
                                std::size_t patience, double lambda);

}  // namespace intentdiv::oracle
