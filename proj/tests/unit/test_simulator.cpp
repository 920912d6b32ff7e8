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
#include "intentdiv/simulator.hpp"

namespace intentdiv {
namespace {

using fixtures::MakeCandidate;

SimConfig SmallConfig() {
  SimConfig cfg;
  cfg.n_users = 60;
  cfg.n_days = 4;
  cfg.sessions_per_day = 4;
  cfg.catalog_size = 2000;
  cfg.n_creators = 200;
  cfg.initial_seen_creators = 30;
  return cfg;
}

UserProfile FixedUser(std::size_t patience, double continuation) {
  UserProfile u;
  u.base_logits = {0.0, 0.0};
  u.patience = patience;
  u.continuation_prob = continuation;
  u.seen_creators.assign(4, 0);
  return u;
}

TEST(SimConfig, ValidationNamesTheField) {
  SimConfig cfg;
  cfg.pool_size = 5;
  try {
    cfg.Validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("pool_size"), std::string::npos);
  }
  EXPECT_THROW(ParseArm("both"), ConfigError);
  EXPECT_EQ(ParseIntentMode("creator"), IntentMode::kCreator);
}

TEST(TrueIntent, ZeroAmplitudeIsHourIndependent) {
  UserProfile u = FixedUser(1, 1.0);
  u.base_logits = {0.3, -0.2};
  u.hourly_amplitude = 0.0;
  const auto a = sample_true_intent_dist(u, 3);
  const auto b = sample_true_intent_dist(u, 17);
  EXPECT_EQ(a[0], b[0]);
  EXPECT_NEAR(a[0], 1.0 / (1.0 + std::exp(-0.5)), 1e-12);
}

TEST(TrueIntent, DayAveragesAreStableAcrossDays) {
  const SimConfig cfg = SmallConfig();
  const Catalog catalog = GenerateCatalog(cfg);
  const UserProfile u = GenerateUser(cfg, catalog, 3);
  std::vector<double> day_means;
  for (std::uint64_t day = 0; day < 30; ++day) {
    StreamRng rng(42, {day});
    double total = 0.0;
    const int samples = 2000;
    for (int s = 0; s < samples; ++s) {
      total += sample_true_intent_dist(u, static_cast<int>(rng.Below(24)), rng.Uniform())[0];
    }
    day_means.push_back(total / samples);
  }
  for (double m : day_means) EXPECT_LT(std::abs(m - day_means[0]), 0.02);
}

TEST(TrueIntent, DifferentUsersDiffer) {
  UserProfile a = FixedUser(1, 1.0);
  UserProfile b = FixedUser(1, 1.0);
  b.base_logits = {1.0, 0.0};
  EXPECT_NE(sample_true_intent_dist(a, 5)[0], sample_true_intent_dist(b, 5)[0]);
}

TEST(Candidates, NoiseFreeQualityEqualsBaseValue) {
  const SimConfig cfg = SmallConfig();
  const Catalog catalog = GenerateCatalog(cfg);
  const UserProfile u = GenerateUser(cfg, catalog, 0);
  StreamRng rng(5);
  const auto pool = generate_candidates(catalog, u, 40, 0.0, rng);
  ASSERT_EQ(pool.candidates.size(), 40u);
  for (const Candidate& c : pool.candidates) EXPECT_EQ(c.quality, c.base_value);
  StreamRng noisy_rng(5);
  const auto noisy = generate_candidates(catalog, u, 40, 0.3, noisy_rng);
  bool differs = false;
  for (const Candidate& c : noisy.candidates) differs |= c.quality != c.base_value;
  EXPECT_TRUE(differs);
}

TEST(Candidates, NoNoveltyOnceEveryCreatorIsSeen) {
  const SimConfig cfg = SmallConfig();
  const Catalog catalog = GenerateCatalog(cfg);
  UserProfile u = GenerateUser(cfg, catalog, 0);
  std::fill(u.seen_creators.begin(), u.seen_creators.end(), 1);
  EXPECT_TRUE(u.seen_all());
  StreamRng rng(6);
  for (const Candidate& c : generate_candidates(catalog, u, 40, 0.0, rng).candidates) {
    EXPECT_FALSE(c.novelty);
    EXPECT_EQ(c.aligned, std::vector<IntentIndex>{kFamiliarity});
  }
}

TEST(Candidates, PoolMeanMatchesCatalogMean) {
  const SimConfig cfg = SmallConfig();
  const Catalog catalog = GenerateCatalog(cfg);
  const UserProfile u = GenerateUser(cfg, catalog, 0);
  StreamRng rng(7);
  double total = 0.0;
  std::size_t count = 0;
  for (int draw = 0; draw < 10000; ++draw) {
    for (const Candidate& c : generate_candidates(catalog, u, 10, 0.0, rng).candidates) {
      total += c.base_value;
      ++count;
    }
  }
  EXPECT_NEAR(total / static_cast<double>(count), catalog.mean_quality(), 0.02);
}

TEST(PageView, NoAlignedItemMeansNoConsumption) {
  UserProfile u = FixedUser(10, 1.0);
  u.base_logits = {50.0, 0.0};  // always draws the first intent
  const std::vector<Candidate> slate = {MakeCandidate("a", 1, 0.9, {1}),
                                        MakeCandidate("b", 1, 0.9, {1})};
  for (std::uint64_t k = 0; k < 200; ++k) {
    PageContext ctx;
    ctx.page_key = k;
    const SessionLog log = simulate_page_view(u, slate, ctx);
    EXPECT_FALSE(log.consumed_item.has_value());
    EXPECT_EQ(log.scanned_depth, 2u);
  }
}

TEST(PageView, CertainItemAtTopIsConsumed) {
  UserProfile u = FixedUser(10, 1.0);
  u.base_logits = {50.0, 0.0};
  const std::vector<Candidate> slate = {MakeCandidate("a", 1, kMaxBaseValue, {0})};
  int hits = 0;
  for (std::uint64_t k = 0; k < 10000; ++k) {
    PageContext ctx;
    ctx.page_key = StreamKey(1, {k});
    hits += simulate_page_view(u, slate, ctx).consumed_position == std::optional<std::size_t>(0);
  }
  EXPECT_GT(hits, 9900);
}

TEST(PageView, PatienceOneScansOnePosition) {
  UserProfile u = FixedUser(1, 1.0);
  const std::vector<Candidate> slate = {MakeCandidate("a", 1, 0.1, {0}),
                                        MakeCandidate("b", 1, 0.1, {1})};
  for (std::uint64_t k = 0; k < 200; ++k) {
    PageContext ctx;
    ctx.page_key = k;
    EXPECT_EQ(simulate_page_view(u, slate, ctx).scanned_depth, 1u);
  }
  EXPECT_THROW(simulate_page_view(u, std::vector<Candidate>{}, PageContext{}), InputError);
}

TEST(Labels, FollowTheConsumedItem) {
  const std::vector<Candidate> served = {MakeCandidate("a", 1, 0.5, {kExploration}),
                                         MakeCandidate("b", 1, 0.5, {0, 1})};
  SessionLog log;
  log.consumed_position = 0;
  auto y = label_from_log(log, served, 2, {1.0});
  ASSERT_TRUE(y.has_value());
  EXPECT_EQ(y->y, (std::vector<double>{1, 0}));
  EXPECT_EQ(y->x, std::vector<double>{1.0});
  log.consumed_position = 1;
  EXPECT_EQ(label_from_log(log, served, 2, {})->y, (std::vector<double>{1, 1}));
  log.consumed_position.reset();
  EXPECT_FALSE(label_from_log(log, served, 2, {}).has_value());
}

TEST(ReturnPropensity, Recursion) {
  EXPECT_DOUBLE_EQ(update_return_propensity(0.4, 0.4, 0.8), 0.4);
  double p = 0.2;
  for (int k = 1; k <= 5; ++k) {
    p = update_return_propensity(p, 1.0, 0.8);
    EXPECT_NEAR(1.0 - p, 0.8 * std::pow(0.8, k), 1e-12);
  }
  EXPECT_EQ(update_return_propensity(0.3, 1.0, 1.0), 0.3);
}

TEST(RankByQuality, DescendingWithTieRule) {
  const std::vector<Candidate> c = {MakeCandidate("b", 0.5, 0.5, {0}),
                                    MakeCandidate("a", 0.5, 0.9, {0}),
                                    MakeCandidate("c", 0.7, 0.5, {0})};
  EXPECT_EQ(RankByQuality(c, 3, TieBreak::kLowestItemId), (std::vector<std::size_t>{2, 1, 0}));
  EXPECT_EQ(RankByQuality(c, 2, TieBreak::kLowestItemId).size(), 2u);
}

TEST(Experiment, TinyGammaServesControlOrder) {
  SimConfig cfg = SmallConfig();
  cfg.record_logs = true;
  cfg.policy.arm = Arm::kControl;
  const auto control = run_experiment(cfg);
  cfg.policy.arm = Arm::kTreatment;
  cfg.policy.gamma = 1e-9;
  const auto treatment = run_experiment(cfg, &control.labels_by_day);
  ASSERT_EQ(control.logs.size(), treatment.logs.size());
  for (std::size_t i = 0; i < control.logs.size(); ++i) {
    ASSERT_EQ(control.logs[i].slate, treatment.logs[i].slate);
  }
  EXPECT_GT(treatment.report.model_calls, 0u);
}

TEST(Experiment, ControlNeverCallsTheModel) {
  SimConfig cfg = SmallConfig();
  const auto result = run_experiment(cfg);
  EXPECT_EQ(result.report.model_calls, 0u);
  EXPECT_EQ(result.report.train_calls, 0u);
}

TEST(Experiment, ZeroSessionsGiveAnEmptyReport) {
  SimConfig cfg = SmallConfig();
  cfg.sessions_per_day = 0;
  const auto result = run_experiment(cfg);
  EXPECT_EQ(result.report.days.size(), cfg.n_days);
  EXPECT_EQ(HorizonTotals(result.report).pages, 0.0);
}

TEST(Experiment, OneConsumptionPerPageAndLabelConservation) {
  SimConfig cfg = SmallConfig();
  cfg.record_logs = true;
  cfg.collect_examples = true;
  const auto result = run_experiment(cfg);
  std::size_t consumed = 0;
  for (const SessionLog& log : result.logs) {
    if (log.consumed_item) {
      ++consumed;
      EXPECT_LE(*log.consumed_position + 1, log.scanned_depth);
    }
  }
  EXPECT_EQ(result.report.labeled_examples, consumed);
  EXPECT_EQ(result.examples.examples.size(), consumed);
  EXPECT_EQ(HorizonTotals(result.report).consumptions, static_cast<double>(consumed));
}

TEST(Experiment, SameSeedSameReport) {
  SimConfig cfg = SmallConfig();
  cfg.policy.arm = Arm::kTreatment;
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  ASSERT_EQ(a.report.users.size(), b.report.users.size());
  for (std::size_t u = 0; u < a.report.users.size(); ++u) {
    EXPECT_EQ(a.report.users[u].satisfaction_sum, b.report.users[u].satisfaction_sum);
    EXPECT_EQ(a.report.users[u].active_users, b.report.users[u].active_users);
  }
  cfg.seed = 2;
  const auto c = run_experiment(cfg);
  EXPECT_NE(HorizonTotals(a.report).satisfaction_sum, HorizonTotals(c.report).satisfaction_sum);
}

TEST(Experiment, CreatorModeRuns) {
  SimConfig cfg = SmallConfig();
  cfg.intent_mode = IntentMode::kCreator;
  cfg.n_creators = 40;
  cfg.initial_seen_creators = 5;
  cfg.policy.arm = Arm::kTreatment;
  const auto result = run_experiment(cfg);
  EXPECT_GT(result.report.model_calls, 0u);
  EXPECT_GT(HorizonTotals(result.report).consumptions, 0.0);
}

// Features causally drive the intent draw, so a model trained on logged
// labels recovers the true per-page exploration probability.
TEST(Experiment, GroundTruthIsRecoverable) {
  SimConfig cfg;
  cfg.n_users = 400;
  cfg.n_days = 8;
  cfg.off_intent_affinity = 0.0;
  cfg.record_pages = true;
  cfg.collect_examples = true;
  const auto result = run_experiment(cfg);
  const IntentModel model = TrainIntentModel(result.examples, TrainConfig{});
  std::vector<double> truth;
  std::vector<double> predicted;
  for (const PageRecord& p : result.report.pages) {
    truth.push_back(p.true_explore);
    predicted.push_back(model.Predict(p.features)[kExploration]);
  }
  const auto r = Pearson(truth, predicted);
  ASSERT_TRUE(r.has_value());
  EXPECT_GT(*r, 0.5);
}

}  // namespace
}  // namespace intentdiv
