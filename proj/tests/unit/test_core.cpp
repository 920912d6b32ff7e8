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
#include <numeric>

#include "fixtures.hpp"
#include "intentdiv/candidate.hpp"
#include "intentdiv/distribution.hpp"
#include "intentdiv/diversifier.hpp"
#include "intentdiv/errors.hpp"
#include "intentdiv/intent_space.hpp"
#include "intentdiv/lazy_belief.hpp"

namespace intentdiv {
namespace {

using fixtures::MakeCandidate;

TEST(IntentSpace, MapsIdsToDenseIndices) {
  IntentSpace space({"explore", "familiar"});
  EXPECT_EQ(space.size(), 2u);
  EXPECT_EQ(space.index("familiar"), 1u);
  EXPECT_EQ(space.id(0), "explore");
  EXPECT_FALSE(space.find("other").has_value());
  EXPECT_THROW(space.index("other"), InputError);
}

TEST(IntentSpace, RejectsEmptyAndDuplicateIds) {
  EXPECT_THROW(IntentSpace(std::vector<std::string>{}), InputError);
  EXPECT_THROW(IntentSpace({"a", "a"}), InputError);
  EXPECT_EQ(IntentSpace::Dense(3).id(2), "2");
}

TEST(IntentDistribution, ValidatesEntriesAndSum) {
  EXPECT_NO_THROW(IntentDistribution({0.6, 0.4}));
  EXPECT_THROW(IntentDistribution({0.6, 0.5}), InputError);
  EXPECT_THROW(IntentDistribution({1.2, -0.2}), InputError);
  EXPECT_THROW(IntentDistribution({NAN, 1.0}), InputError);
  EXPECT_NO_THROW(IntentDistribution({0.2, 0.3}, Normalization::kSubnormalized));
  EXPECT_THROW(IntentDistribution({0.7, 0.5}, Normalization::kSubnormalized), InputError);
  EXPECT_DOUBLE_EQ(IntentDistribution::Uniform(4)[3], 0.25);
}

TEST(Candidate, ValidationCatchesBrokenInvariants) {
  EXPECT_NO_THROW(Validate(MakeCandidate("a", 1.0, 0.5, {0}), 2));
  EXPECT_THROW(Validate(MakeCandidate("a", -1.0, 0.5, {0}), 2), InputError);
  EXPECT_THROW(Validate(MakeCandidate("a", 1.0, 1.0, {0}), 2), InputError);
  EXPECT_THROW(Validate(MakeCandidate("a", 1.0, 0.5, {}), 2), InputError);
  EXPECT_THROW(Validate(MakeCandidate("a", 1.0, 0.5, {2}), 2), InputError);
  Candidate unsorted = MakeCandidate("a", 1.0, 0.5, {0});
  unsorted.aligned = {1, 0};
  EXPECT_THROW(Validate(unsorted, 2), InputError);
}

TEST(Candidate, NormalizeAlignmentSortsAndDeduplicates) {
  Candidate c = MakeCandidate("a", 1.0, 0.5, {3, 1, 3});
  EXPECT_EQ(c.aligned, (std::vector<IntentIndex>{1, 3}));
}

TEST(IntentConditionedValue, BaseValueOnAlignedIntentsOnly) {
  const Candidate c = MakeCandidate("a", 1.0, 0.7, {1});
  EXPECT_DOUBLE_EQ(intent_conditioned_value(c, 1, 3), 0.7);
  EXPECT_DOUBLE_EQ(intent_conditioned_value(c, 0, 3), 0.0);
  EXPECT_THROW(intent_conditioned_value(c, 3, 3), InputError);
}

TEST(ExpectedSatisfaction, EqualsQualityTimesAlignedMass) {
  IntentDistribution d({0.6, 0.4});
  EXPECT_NEAR(expected_satisfaction(d, MakeCandidate("a", 1.0, 0.8, {0})), 0.48, 1e-15);
  EXPECT_NEAR(expected_satisfaction(d, MakeCandidate("a", 1.0, 0.8, {0, 1})), 0.8, 1e-15);
  EXPECT_THROW(expected_satisfaction(d, MakeCandidate("a", 1.0, 0.8, {2})), InputError);
}

TEST(StepScore, ZeroToAnyPowerIsZero) {
  EXPECT_EQ(step_score(1.0, 0.0, 1e-9), 0.0);
  EXPECT_NEAR(step_score(2.0, 0.25, 0.5), 1.0, 1e-15);
  IntentDistribution d({0.6, 0.4});
  EXPECT_THROW(step_score(d, MakeCandidate("a", 1.0, 0.8, {0}), 0.0), InputError);
}

TEST(PrefersFirst, TieRules) {
  const Candidate a = MakeCandidate("a", 0.5, 0.5, {0});
  const Candidate b = MakeCandidate("b", 0.9, 0.5, {0});
  EXPECT_TRUE(PrefersFirst(2.0, b, 1.0, a, TieBreak::kLowestItemId));
  EXPECT_TRUE(PrefersFirst(1.0, a, 1.0, b, TieBreak::kLowestItemId));
  EXPECT_TRUE(PrefersFirst(1.0, b, 1.0, a, TieBreak::kHighestQuality));
}

TEST(SelectNext, PicksHighestScoreAndRejectsEmpty) {
  IntentDistribution d({0.6, 0.4});
  const auto cands = fixtures::WorkedCandidates();
  DiversifierConfig cfg;
  EXPECT_EQ(select_next(d, cands, cfg), 0u);
  EXPECT_EQ(select_next(d, std::span<const Candidate>(cands).subspan(2), cfg), 0u);
  EXPECT_THROW(select_next(d, std::span<const Candidate>(), cfg), InputError);
}

TEST(PosteriorUpdate, PaperLiteralWorkedStep) {
  IntentDistribution d({0.6, 0.4});
  const auto next =
      posterior_update(d, MakeCandidate("c1", 1.0, 0.8, {0}), PosteriorMode::kPaperLiteral);
  EXPECT_NEAR(next[0], 0.6 * 0.2 / 0.52, 1e-15);
  EXPECT_EQ(next[1], 0.4);
  EXPECT_FALSE(next.normalized());
}

TEST(PosteriorUpdate, ExactBayesRenormalizes) {
  IntentDistribution d({0.6, 0.4});
  const auto next =
      posterior_update(d, MakeCandidate("c1", 1.0, 0.8, {0}), PosteriorMode::kExactBayes);
  EXPECT_NEAR(next[0], 0.12 / 0.52, 1e-15);
  EXPECT_NEAR(next[1], 0.4 / 0.52, 1e-15);
  EXPECT_NEAR(next[0] + next[1], 1.0, 1e-12);
  EXPECT_TRUE(next.normalized());
}

TEST(PosteriorUpdate, UnnormalizedScalesAlignedEntries) {
  IntentDistribution d({0.6, 0.4});
  const auto next =
      posterior_update(d, MakeCandidate("c1", 1.0, 0.8, {0}), PosteriorMode::kUnnormalized);
  EXPECT_NEAR(next[0], 0.12, 1e-15);
  EXPECT_EQ(next[1], 0.4);
}

TEST(PosteriorUpdate, DegenerateDenominatorZeroesAlignedEntries) {
  IntentDistribution d({1.0, 0.0});
  const Candidate c = MakeCandidate("c", 1.0, kMaxBaseValue, {0});
  for (PosteriorMode mode :
       {PosteriorMode::kPaperLiteral, PosteriorMode::kExactBayes, PosteriorMode::kUnnormalized}) {
    const auto next = posterior_update(d, c, mode, 5e-7);
    EXPECT_EQ(next[0], 0.0);
    EXPECT_EQ(next[1], 0.0);
  }
  IntentDistribution mixed({0.9999999995, 0.0000000005});
  const auto exact = posterior_update(mixed, MakeCandidate("c", 1.0, kMaxBaseValue, {0}),
                                      PosteriorMode::kExactBayes, 5e-7);
  EXPECT_EQ(exact[0], 0.0);
  EXPECT_NEAR(exact[1], 1.0, 1e-12);
}

TEST(Diversify, WorkedFixture) {
  IntentDistribution prior({0.6, 0.4});
  DiversifierConfig cfg;
  cfg.gamma = 1.0;
  const auto slate = diversify(prior, fixtures::WorkedCandidates(), cfg);
  EXPECT_EQ(slate.order, (std::vector<std::string>{"c1", "c3", "c2"}));
  const auto trace = MaterializeTrace(prior, slate);
  EXPECT_NEAR(trace[1][0], 0.12 / 0.52, 1e-12);
  EXPECT_NEAR(trace[1][1], 0.08 / 0.68, 1e-12);
  EXPECT_NEAR(slate.trace[0].marginal_satisfaction, 0.48, 1e-15);
  EXPECT_NEAR(slate.trace[1].step_score, 0.32, 1e-15);
}

TEST(Diversify, SingleCandidateAndSlateSize) {
  IntentDistribution prior({0.6, 0.4});
  DiversifierConfig cfg;
  const auto one = diversify(prior, std::vector{MakeCandidate("x", 1.0, 0.5, {1})}, cfg);
  EXPECT_EQ(one.order, std::vector<std::string>{"x"});
  cfg.slate_size = 2;
  EXPECT_EQ(diversify(prior, fixtures::WorkedCandidates(), cfg).order.size(), 2u);
  cfg.slate_size = 10;
  EXPECT_EQ(diversify(prior, fixtures::WorkedCandidates(), cfg).order.size(), 3u);
}

TEST(Diversify, RejectsBadInputs) {
  DiversifierConfig cfg;
  IntentDistribution prior({0.6, 0.4});
  EXPECT_THROW(diversify(prior, std::vector<Candidate>{}, cfg), InputError);
  IntentDistribution sub({0.3, 0.4}, Normalization::kSubnormalized);
  EXPECT_THROW(diversify(sub, fixtures::WorkedCandidates(), cfg), InputError);
  auto dup = fixtures::WorkedCandidates();
  dup[1].item_id = "c1";
  EXPECT_THROW(diversify(prior, dup, cfg), InputError);
  cfg.gamma = 0.0;
  EXPECT_THROW(diversify(prior, fixtures::WorkedCandidates(), cfg), InputError);
  cfg.gamma = 1.0;
  cfg.epsilon = 1e-3;
  EXPECT_THROW(diversify(prior, fixtures::WorkedCandidates(), cfg), InputError);
}

TEST(Diversify, TinyGammaFollowsQualityOrder) {
  IntentDistribution prior({0.9, 0.1});
  std::vector<Candidate> cands = {
      MakeCandidate("a", 0.5, 0.5, {0}), MakeCandidate("b", 0.9, 0.5, {1}),
      MakeCandidate("c", 0.7, 0.5, {0}), MakeCandidate("d", 0.8, 0.5, {1})};
  DiversifierConfig cfg;
  cfg.gamma = 1e-9;
  EXPECT_EQ(diversify(prior, cands, cfg).order, (std::vector<std::string>{"b", "d", "c", "a"}));
}

TEST(Diversify, ZeroMassItemsFallBackToTieRule) {
  IntentDistribution prior({1.0, 0.0});
  std::vector<Candidate> cands = {MakeCandidate("z", 0.1, 0.5, {1}),
                                  MakeCandidate("y", 0.9, 0.5, {1})};
  DiversifierConfig cfg;
  EXPECT_EQ(diversify(prior, cands, cfg).order, (std::vector<std::string>{"y", "z"}));
  cfg.tie_break = TieBreak::kHighestQuality;
  EXPECT_EQ(diversify(prior, cands, cfg).order, (std::vector<std::string>{"y", "z"}));
}

TEST(Diversify, LargeSpaceUsesSparseTrace) {
  const std::size_t n = 200;
  IntentDistribution prior = IntentDistribution::Uniform(n);
  std::vector<Candidate> cands;
  for (std::size_t j = 0; j < 20; ++j) {
    cands.push_back(MakeCandidate("i" + std::to_string(j), 1.0 - 0.01 * j, 0.6,
                                  {static_cast<IntentIndex>(j % 7), static_cast<IntentIndex>(j)}));
  }
  for (PosteriorMode mode :
       {PosteriorMode::kPaperLiteral, PosteriorMode::kExactBayes, PosteriorMode::kUnnormalized}) {
    DiversifierConfig cfg;
    cfg.posterior_mode = mode;
    const auto slate = diversify(prior, cands, cfg);
    ASSERT_TRUE(std::holds_alternative<BeliefDelta>(slate.trace[0].posterior));
    EXPECT_LE(std::get<BeliefDelta>(slate.trace[0].posterior).entries.size(), 2u);
    // Replaying the dense update gives the same beliefs.
    IntentDistribution dense = prior;
    const auto trace = MaterializeTrace(prior, slate);
    for (std::size_t m = 0; m < slate.indices.size(); ++m) {
      dense = posterior_update(dense, cands[slate.indices[m]], mode);
      for (std::size_t v = 0; v < n; ++v) ASSERT_NEAR(trace[m][v], dense[v], 1e-12);
    }
  }
}

TEST(LazyBelief, TouchesOnlyAlignedEntriesAndRebases) {
  IntentDistribution prior = IntentDistribution::Uniform(4);
  LazyBelief belief(prior);
  const Candidate c = MakeCandidate("a", 1.0, 0.9, {1, 2});
  const auto delta = belief.update(c, PosteriorMode::kExactBayes);
  EXPECT_EQ(belief.touched_entries(), 2u);
  EXPECT_NEAR(delta.scale, 1.0 / (1.0 - 0.9 * 0.5), 1e-15);
  double total = 0.0;
  for (double p : belief.values()) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
  // Alternating near-certain items shrink both raw entries by 1e-6 every
  // two steps while the scale grows to compensate; the rebase keeps it in
  // range and the values normalized.
  LazyBelief drift(IntentDistribution({0.5, 0.5}));
  const Candidate first = MakeCandidate("s", 1.0, 0.999999, {0});
  const Candidate second = MakeCandidate("t", 1.0, 0.999999, {1});
  for (int k = 0; k < 400; ++k) {
    drift.update(k % 2 == 0 ? first : second, PosteriorMode::kExactBayes);
  }
  const auto v = drift.values();
  EXPECT_TRUE(std::isfinite(v[0]) && std::isfinite(v[1]));
  EXPECT_NEAR(v[0] + v[1], 1.0, 1e-9);
  EXPECT_TRUE(drift.scale() <= 1e150 && drift.scale() >= 1e-150);
}

TEST(Modes, RoundTripNames) {
  for (PosteriorMode m :
       {PosteriorMode::kPaperLiteral, PosteriorMode::kExactBayes, PosteriorMode::kUnnormalized}) {
    EXPECT_EQ(ParsePosteriorMode(ToString(m)), m);
  }
  EXPECT_EQ(ParseTieBreak("highest-quality"), TieBreak::kHighestQuality);
  EXPECT_THROW(ParsePosteriorMode("bayes"), InputError);
}

}  // namespace
}  // namespace intentdiv
