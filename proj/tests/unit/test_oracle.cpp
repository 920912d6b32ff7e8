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

#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "intentdiv/errors.hpp"
#include "intentdiv/random.hpp"
#include "intentdiv/simulator.hpp"
#include "oracle.hpp"

namespace intentdiv {
namespace {

using fixtures::MakeCandidate;

IntentDistribution Prior(std::vector<double> p) {
  return IntentDistribution(std::move(p), Normalization::kNormalized);
}

TEST(Oracle, SatisfactionHandValues) {
  const auto prior = Prior({0.5, 0.5});
  const std::vector<Candidate> one = {MakeCandidate("a", 1, 1.0, {0})};
  EXPECT_NEAR(oracle::slate_satisfaction(prior, one, 5, 1.0), 0.5, 1e-15);
  // Intent 0 consumes "a" or, after rejecting it, "b"; intent 1 always
  // reaches "b". Both are certain.
  const std::vector<Candidate> two = {MakeCandidate("a", 1, 0.5, {0}),
                                      MakeCandidate("b", 1, 1.0, {0, 1})};
  EXPECT_NEAR(oracle::slate_satisfaction(prior, two, 5, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(oracle::slate_satisfaction(prior, two, 5, 0.5), 0.5 * 0.75 + 0.5 * 0.5, 1e-15);
  EXPECT_NEAR(oracle::slate_satisfaction(prior, two, 1, 1.0), 0.25, 1e-15);
  EXPECT_EQ(oracle::slate_satisfaction(prior, std::vector<Candidate>{}, 5, 1.0), 0.0);
}

TEST(Oracle, ExhaustiveSearchBasics) {
  const auto prior = Prior({0.7, 0.3});
  const std::vector<Candidate> c = {MakeCandidate("a", 1, 0.5, {1}),
                                    MakeCandidate("b", 1, 0.5, {0})};
  const auto best = oracle::exhaustive_best_slate(prior, c, 1, 3, 1.0);
  EXPECT_EQ(best.order, (std::vector<std::size_t>{1}));
  EXPECT_NEAR(best.value, 0.35, 1e-15);
  // Symmetric items tie; the smallest index sequence wins.
  const std::vector<Candidate> twins = {MakeCandidate("a", 1, 0.5, {0}),
                                        MakeCandidate("b", 1, 0.5, {0})};
  EXPECT_EQ(oracle::exhaustive_best_slate(prior, twins, 2, 3, 1.0).order,
            (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(oracle::exhaustive_best_slate(prior, twins, 0, 3, 1.0), InputError);
  EXPECT_THROW(oracle::exhaustive_best_slate(prior, twins, 3, 3, 1.0), InputError);
}

TEST(Oracle, SatisfactionMatchesSimulatedPageViews) {
  UserProfile u;
  u.base_logits = {std::log(0.6), std::log(0.4)};
  u.patience = 2;
  u.continuation_prob = 0.8;
  u.seen_creators.assign(1, 0);
  const std::vector<Candidate> slate = {MakeCandidate("a", 1, 0.3, {0}),
                                        MakeCandidate("b", 1, 0.6, {1}),
                                        MakeCandidate("c", 1, 0.9, {0})};
  const double exact =
      oracle::slate_satisfaction(sample_true_intent_dist(u, 12), slate, u.patience, 0.8);
  const std::size_t n = 40000;
  std::size_t hits = 0;
  for (std::uint64_t k = 0; k < n; ++k) {
    PageContext ctx;
    ctx.page_key = StreamKey(77, {k});
    hits += simulate_page_view(u, slate, ctx).consumed_item.has_value();
  }
  const double p = static_cast<double>(hits) / n;
  EXPECT_NEAR(p, exact, 3.0 * std::sqrt(exact * (1 - exact) / n));
}

TEST(Oracle, ReferenceMatchesWorkedCase) {
  const auto prior = Prior({0.6, 0.4});
  const auto c = fixtures::WorkedCandidates();
  const RankedSlate slate = oracle::reference_diversify(prior, c, DiversifierConfig{});
  EXPECT_EQ(slate.order, (std::vector<std::string>{"c1", "c3", "c2"}));
  EXPECT_EQ(slate.indices, (std::vector<std::size_t>{0, 2, 1}));
  const RankedSlate single = oracle::reference_diversify(
      prior, std::vector<Candidate>{c[2]}, DiversifierConfig{});
  EXPECT_EQ(single.order, (std::vector<std::string>{"c3"}));
}

}  // namespace
}  // namespace intentdiv
