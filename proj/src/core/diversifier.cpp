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

#include "intentdiv/diversifier.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "intentdiv/errors.hpp"
#include "intentdiv/lazy_belief.hpp"

namespace intentdiv {

std::string_view ToString(PosteriorMode mode) {
  switch (mode) {
    case PosteriorMode::kPaperLiteral:
      return "paper-literal";
    case PosteriorMode::kExactBayes:
      return "exact-bayes";
    case PosteriorMode::kUnnormalized:
      return "unnormalized";
  }
  return "unknown";
}

std::string_view ToString(TieBreak tie_break) {
  switch (tie_break) {
    case TieBreak::kLowestItemId:
      return "lowest-item-id";
    case TieBreak::kHighestQuality:
      return "highest-quality";
  }
  return "unknown";
}

PosteriorMode ParsePosteriorMode(std::string_view name) {
  if (name == "paper-literal") return PosteriorMode::kPaperLiteral;
  if (name == "exact-bayes") return PosteriorMode::kExactBayes;
  if (name == "unnormalized") return PosteriorMode::kUnnormalized;
  throw InputError("unknown posterior mode '" + std::string(name) + "'");
}

TieBreak ParseTieBreak(std::string_view name) {
  if (name == "lowest-item-id") return TieBreak::kLowestItemId;
  if (name == "highest-quality") return TieBreak::kHighestQuality;
  throw InputError("unknown tie-break rule '" + std::string(name) + "'");
}

void DiversifierConfig::Validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InputError("gamma must be > 0");
  if (!(epsilon > 0.0 && epsilon < 1e-6)) throw InputError("epsilon must lie in (0, 1e-6)");
}

double intent_conditioned_value(const Candidate& candidate, IntentIndex v,
                                std::size_t num_intents) {
  if (v >= num_intents) throw InputError("unknown intent index " + std::to_string(v));
  return candidate.aligned_with(v) ? candidate.base_value : 0.0;
}

double expected_satisfaction(const IntentDistribution& belief, const Candidate& candidate) {
  double aligned_mass = 0.0;
  for (IntentIndex v : candidate.aligned) {
    if (v >= belief.size()) {
      throw InputError("candidate '" + candidate.item_id +
                       "' is aligned with an intent outside the belief's space");
    }
    aligned_mass += belief[v];
  }
  return candidate.base_value * aligned_mass;
}

double step_score(double quality, double expected_satisfaction, double gamma) {
  if (expected_satisfaction <= 0.0) return 0.0;
  return quality * std::pow(expected_satisfaction, gamma);
}

double step_score(const IntentDistribution& belief, const Candidate& candidate, double gamma) {
  if (!(gamma > 0.0)) throw InputError("gamma must be > 0");
  return step_score(candidate.quality, expected_satisfaction(belief, candidate), gamma);
}

bool PrefersFirst(double score_a, const Candidate& a, double score_b, const Candidate& b,
                  TieBreak tie_break) {
  if (score_a != score_b) return score_a > score_b;
  if (tie_break == TieBreak::kHighestQuality && a.quality != b.quality) {
    return a.quality > b.quality;
  }
  return a.item_id < b.item_id;
}

std::size_t select_next(const IntentDistribution& belief, std::span<const Candidate> remaining,
                        const DiversifierConfig& config) {
  config.Validate();
  if (remaining.empty()) throw InputError("select_next: no remaining candidates");
  std::size_t best = 0;
  double best_score = step_score(belief, remaining[0], config.gamma);
  for (std::size_t k = 1; k < remaining.size(); ++k) {
    const double score = step_score(belief, remaining[k], config.gamma);
    if (PrefersFirst(score, remaining[k], best_score, remaining[best], config.tie_break)) {
      best = k;
      best_score = score;
    }
  }
  return best;
}

IntentDistribution posterior_update(const IntentDistribution& belief, const Candidate& candidate,
                                    PosteriorMode mode, double epsilon) {
  const double marginal = expected_satisfaction(belief, candidate);
  const double denominator = 1.0 - marginal;
  std::vector<double> next(belief.probs().begin(), belief.probs().end());

  if (denominator < epsilon) {
    for (IntentIndex v : candidate.aligned) next[v] = 0.0;
    if (mode == PosteriorMode::kExactBayes) {
      double rest = 0.0;
      for (double p : next) rest += p;
      if (rest > 0.0) {
        for (double& p : next) p /= rest;
        return IntentDistribution(std::move(next), Normalization::kNormalized);
      }
    }
    return IntentDistribution(std::move(next), Normalization::kSubnormalized);
  }

  const double keep = 1.0 - candidate.base_value;
  switch (mode) {
    case PosteriorMode::kPaperLiteral:
      for (IntentIndex v : candidate.aligned) next[v] = next[v] * keep / denominator;
      break;
    case PosteriorMode::kExactBayes: {
      // z = evidence / total equals 1 - m for a normalized belief. Summed
      // in the same order, evidence <= total holds exactly, so z <= 1 and
      // unaligned entries never shrink; rounding error in the input's
      // total is carried over rather than amplified by 1 / (1 - m).
      double total = 0.0;
      for (double p : next) total += p;
      for (IntentIndex v : candidate.aligned) next[v] *= keep;
      double evidence = 0.0;
      for (double p : next) evidence += p;
      // Zero evidence means the belief was already empty.
      if (evidence > 0.0) {
        const double z = evidence / total;
        for (double& p : next) p /= z;
      }
      break;
    }
    case PosteriorMode::kUnnormalized:
      for (IntentIndex v : candidate.aligned) next[v] *= keep;
      break;
  }
  for (double& p : next) p = std::min(p, 1.0);

  const bool stays_normalized =
      mode == PosteriorMode::kExactBayes && belief.normalized() && belief.mass() > 0.0;
  return IntentDistribution(std::move(next), stays_normalized ? Normalization::kNormalized
                                                              : Normalization::kSubnormalized);
}

RankedSlate diversify(const IntentDistribution& prior, std::span<const Candidate> candidates,
                      const DiversifierConfig& config) {
  config.Validate();
  if (!prior.normalized()) throw InputError("diversify: prior must be normalized");
  if (candidates.empty()) throw InputError("diversify: candidate list is empty");

  std::unordered_set<std::string_view> seen_ids;
  seen_ids.reserve(candidates.size());
  for (const Candidate& c : candidates) {
    Validate(c, prior.size());
    if (!seen_ids.insert(c.item_id).second) {
      throw InputError("diversify: duplicate item_id '" + c.item_id + "'");
    }
  }

  const std::size_t slots = config.slate_size == 0
                                ? candidates.size()
                                : std::min(config.slate_size, candidates.size());
  const bool dense_trace = prior.size() <= config.dense_snapshot_limit;

  LazyBelief belief(prior);
  std::vector<std::size_t> remaining(candidates.size());
  for (std::size_t k = 0; k < remaining.size(); ++k) remaining[k] = k;

  RankedSlate slate;
  slate.order.reserve(slots);
  slate.indices.reserve(slots);
  slate.trace.reserve(slots);

  for (std::size_t position = 0; position < slots; ++position) {
    std::size_t best_slot = 0;
    double best_score = -1.0;
    double best_marginal = 0.0;
    for (std::size_t slot = 0; slot < remaining.size(); ++slot) {
      const Candidate& c = candidates[remaining[slot]];
      const double marginal = c.base_value * belief.aligned_mass(c);
      const double score = step_score(c.quality, marginal, config.gamma);
      if (slot == 0 || PrefersFirst(score, c, best_score, candidates[remaining[best_slot]],
                                    config.tie_break)) {
        best_slot = slot;
        best_score = score;
        best_marginal = marginal;
      }
    }

    const std::size_t chosen = remaining[best_slot];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_slot));
    const Candidate& c = candidates[chosen];
    BeliefDelta delta = belief.update(c, config.posterior_mode, config.epsilon);

    TraceStep step;
    step.candidate = chosen;
    step.item_id = c.item_id;
    step.step_score = best_score;
    step.marginal_satisfaction = best_marginal;
    if (dense_trace) {
      step.posterior = belief.values();
    } else {
      step.posterior = std::move(delta);
    }
    slate.order.push_back(c.item_id);
    slate.indices.push_back(chosen);
    slate.trace.push_back(std::move(step));
  }
  return slate;
}

std::vector<std::vector<double>> MaterializeTrace(const IntentDistribution& prior,
                                                  const RankedSlate& slate) {
  std::vector<std::vector<double>> out;
  out.reserve(slate.trace.size());
  std::vector<double> current(prior.probs().begin(), prior.probs().end());
  for (const TraceStep& step : slate.trace) {
    if (const auto* dense = std::get_if<std::vector<double>>(&step.posterior)) {
      current = *dense;
    } else {
      const auto& delta = std::get<BeliefDelta>(step.posterior);
      if (delta.scale != 1.0) {
        for (double& p : current) p *= delta.scale;
      }
      for (const auto& [v, value] : delta.entries) current[v] = value;
    }
    out.push_back(current);
  }
  return out;
}

}  // namespace intentdiv
