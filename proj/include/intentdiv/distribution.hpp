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

namespace intentdiv {

inline constexpr double kNormalizationTolerance = 1e-9;

enum class Normalization {
  kNormalized,     // entries sum to 1
  kSubnormalized,  // entries sum to at most 1
};

// Belief vector Pr(v | user) over an intent space. Every entry lies in
// [0, 1]; the sum constraint depends on the normalization flag.
class IntentDistribution {
 public:
  IntentDistribution() = default;

  // Validates entries and the sum constraint; throws InputError.
  explicit IntentDistribution(std::vector<double> probs,
                              Normalization normalization = Normalization::kNormalized);

  static IntentDistribution Uniform(std::size_t n);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t v) const { return probs_[v]; }
  std::span<const double> probs() const { return probs_; }
  Normalization normalization() const { return normalization_; }
  bool normalized() const { return normalization_ == Normalization::kNormalized; }

  double mass() const;

 private:
  std::vector<double> probs_;
  Normalization normalization_ = Normalization::kNormalized;
};

}  // namespace intentdiv
