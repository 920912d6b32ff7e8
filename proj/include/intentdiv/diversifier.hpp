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
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "intentdiv/candidate.hpp"
#include "intentdiv/distribution.hpp"

namespace intentdiv {

// How the belief is revised after assuming the user rejected the item just
// placed. The three variants differ only in the treatment of the
// normalizing constant; see posterior_update().
enum class PosteriorMode {
  kPaperLiteral,  // aligned entries rescaled by (1-q)/(1-m), others kept
  kExactBayes,    // full Bayes rule, result sums to 1
  kUnnormalized,  // aligned entries scaled by (1-q), others kept
};

enum class TieBreak {
  kLowestItemId,    // lexicographically smallest item_id wins
  kHighestQuality,  // larger quality wins, then lowest item_id
};

std::string_view ToString(PosteriorMode mode);
std::string_view ToString(TieBreak tie_break);
// Accepts "paper-literal", "exact-bayes", "unnormalized". Throws InputError.
PosteriorMode ParsePosteriorMode(std::string_view name);
// Accepts "lowest-item-id", "highest-quality". Throws InputError.
TieBreak ParseTieBreak(std::string_view name);

struct DiversifierConfig {
  double gamma = 1.0;
  PosteriorMode posterior_mode = PosteriorMode::kPaperLiteral;
  TieBreak tie_break = TieBreak::kLowestItemId;
  double epsilon = 1e-12;
  // Number of positions to fill; 0 places every candidate.
  std::size_t slate_size = 0;
  // Trace snapshots are dense when the intent space is at most this large,
  // sparse deltas otherwise.
  std::size_t dense_snapshot_limit = 64;

  // Throws InputError unless gamma > 0 and epsilon in (0, 1e-6).
  void Validate() const;
};

// Change applied to a belief by one update. Every entry not listed is
// multiplied by `scale`; listed entries take the given (materialized) value.
struct BeliefDelta {
  double scale = 1.0;
  std::vector<std::pair<IntentIndex, double>> entries;
};

struct TraceStep {
  std::size_t candidate = 0;  // index into the input candidate list
  std::string item_id;
  double step_score = 0.0;
  double marginal_satisfaction = 0.0;  // Q(j_m | i, R_{m-1})
  // Posterior after placing this item: dense snapshot or sparse delta.
  std::variant<std::vector<double>, BeliefDelta> posterior;
};

struct RankedSlate {
  std::vector<std::string> order;
  std::vector<std::size_t> indices;  // positions into the input list
  std::vector<TraceStep> trace;
};

// Q(j | i, v): the base value when v is aligned with the item, else 0.
// Throws InputError when v is outside an intent space of `num_intents`.
double intent_conditioned_value(const Candidate& candidate, IntentIndex v,
                                std::size_t num_intents);

// Sum_v d(v) Q(j | i, v) = q * (mass of d on the aligned set).
double expected_satisfaction(const IntentDistribution& belief, const Candidate& candidate);

// s * e^gamma with the convention 0^gamma = 0.
double step_score(double quality, double expected_satisfaction, double gamma);
double step_score(const IntentDistribution& belief, const Candidate& candidate, double gamma);

// True when candidate `a` with score `score_a` should be placed before `b`.
bool PrefersFirst(double score_a, const Candidate& a, double score_b, const Candidate& b,
                  TieBreak tie_break);

// Index (into `remaining`) of the candidate with the highest step score.
// Throws InputError for an empty set.
std::size_t select_next(const IntentDistribution& belief, std::span<const Candidate> remaining,
                        const DiversifierConfig& config);

// Counterfactual belief revision assuming `candidate` was shown and not
// consumed. Entries outside the aligned set are only touched by
// kExactBayes (renormalization). When 1 - m < epsilon the aligned entries
// are zeroed instead.
IntentDistribution posterior_update(const IntentDistribution& belief, const Candidate& candidate,
                                    PosteriorMode mode, double epsilon = 1e-12);

// Greedy intent diversification: repeatedly place the highest-scoring
// remaining candidate and revise the belief as if it had been rejected.
RankedSlate diversify(const IntentDistribution& prior, std::span<const Candidate> candidates,
                      const DiversifierConfig& config);

// Rebuilds the dense posterior after every step of `slate` from the prior.
std::vector<std::vector<double>> MaterializeTrace(const IntentDistribution& prior,
                                                  const RankedSlate& slate);

}  // namespace intentdiv
