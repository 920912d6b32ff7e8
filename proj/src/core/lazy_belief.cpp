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

#include "intentdiv/lazy_belief.hpp"

#include <algorithm>

namespace intentdiv {

namespace {
constexpr double kScaleHigh = 1e150;
constexpr double kScaleLow = 1e-150;
}  // namespace

LazyBelief::LazyBelief(const IntentDistribution& prior)
    : raw_(prior.probs().begin(), prior.probs().end()), normalized_(prior.normalized()) {
  Resum();
}

void LazyBelief::Resum() {
  raw_total_ = 0.0;
  for (double r : raw_) raw_total_ += r;
}

double LazyBelief::aligned_mass(const Candidate& candidate) const {
  double raw_mass = 0.0;
  for (IntentIndex v : candidate.aligned) raw_mass += raw_[v];
  return raw_mass * scale_;
}

BeliefDelta LazyBelief::update(const Candidate& candidate, PosteriorMode mode, double epsilon) {
  const double aligned = aligned_mass(candidate);
  const double denominator = 1.0 - candidate.base_value * aligned;
  BeliefDelta delta;
  delta.entries.reserve(candidate.aligned.size());

  if (denominator < epsilon) {
    for (IntentIndex v : candidate.aligned) raw_[v] = 0.0;
    touched_ += candidate.aligned.size();
    Resum();
    if (mode == PosteriorMode::kExactBayes) {
      const double rest = raw_total_ * scale_;
      if (rest > 0.0) {
        scale_ /= rest;
        delta.scale = 1.0 / rest;
      } else {
        normalized_ = false;
      }
    } else {
      normalized_ = false;
    }
    for (IntentIndex v : candidate.aligned) delta.entries.emplace_back(v, 0.0);
    Rebase();
    return delta;
  }

  const double keep = 1.0 - candidate.base_value;
  const double total_before = raw_total_;
  double aligned_before = 0.0;
  for (IntentIndex v : candidate.aligned) aligned_before += raw_[v];
  switch (mode) {
    case PosteriorMode::kPaperLiteral:
      for (IntentIndex v : candidate.aligned) raw_[v] = raw_[v] * keep / denominator;
      normalized_ = false;
      break;
    case PosteriorMode::kExactBayes:
      for (IntentIndex v : candidate.aligned) raw_[v] *= keep;
      break;
    case PosteriorMode::kUnnormalized:
      for (IntentIndex v : candidate.aligned) raw_[v] *= keep;
      normalized_ = false;
      break;
  }
  double aligned_after = 0.0;
  for (IntentIndex v : candidate.aligned) aligned_after += raw_[v];
  raw_total_ += aligned_after - aligned_before;
  // A running total that lost most of its value carries mostly rounding
  // error, so it is recomputed.
  if (!(raw_total_ > 0.5 * total_before)) Resum();
  if (mode == PosteriorMode::kExactBayes && raw_total_ > 0.0) {
    // Normalizing by the actual total rather than 1 - m keeps rounding
    // error from compounding across updates.
    const double next_scale = 1.0 / raw_total_;
    delta.scale = next_scale / scale_;
    scale_ = next_scale;
  }
  touched_ += candidate.aligned.size();
  Rebase();
  for (IntentIndex v : candidate.aligned) delta.entries.emplace_back(v, at(v));
  return delta;
}

void LazyBelief::Rebase() {
  if (scale_ <= kScaleHigh && scale_ >= kScaleLow) return;
  for (double& r : raw_) r *= scale_;
  raw_total_ *= scale_;
  scale_ = 1.0;
}

std::vector<double> LazyBelief::values() const {
  std::vector<double> out(raw_.size());
  for (std::size_t v = 0; v < raw_.size(); ++v) out[v] = std::min(raw_[v] * scale_, 1.0);
  return out;
}

IntentDistribution LazyBelief::materialize() const {
  return IntentDistribution(values(), normalized_ ? Normalization::kNormalized
                                                  : Normalization::kSubnormalized);
}

}  // namespace intentdiv
