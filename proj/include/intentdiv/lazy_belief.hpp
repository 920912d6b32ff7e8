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
#include <vector>

#include "intentdiv/candidate.hpp"
#include "intentdiv/distribution.hpp"
#include "intentdiv/diversifier.hpp"

namespace intentdiv {

// Belief stored as raw per-intent values times one global scale, so that
// a posterior update only writes the entries aligned with the placed item.
// kExactBayes folds its normalization into the scale, computed from a
// running total of the raw entries.
class LazyBelief {
 public:
  explicit LazyBelief(const IntentDistribution& prior);

  std::size_t size() const { return raw_.size(); }
  double at(IntentIndex v) const { return raw_[v] * scale_; }
  double scale() const { return scale_; }

  // Materialized mass on the candidate's aligned set.
  double aligned_mass(const Candidate& candidate) const;

  // Applies the same revision as posterior_update() and returns the change.
  BeliefDelta update(const Candidate& candidate, PosteriorMode mode, double epsilon = 1e-12);

  // Dense copy of the current belief.
  std::vector<double> values() const;
  IntentDistribution materialize() const;

  // Count of raw entries written by update() since construction.
  std::size_t touched_entries() const { return touched_; }

 private:
  void Rebase();
  void Resum();

  std::vector<double> raw_;
  double scale_ = 1.0;
  double raw_total_ = 0.0;
  bool normalized_ = true;
  std::size_t touched_ = 0;
};

}  // namespace intentdiv
