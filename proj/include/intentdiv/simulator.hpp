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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intentdiv/candidate.hpp"
#include "intentdiv/distribution.hpp"
#include "intentdiv/diversifier.hpp"
#include "intentdiv/intent_model.hpp"
#include "intentdiv/metrics.hpp"
#include "intentdiv/random.hpp"

namespace intentdiv {

// How intents are instantiated. kNovelty has two intents, "exploration"
// (item from a creator the user has not consumed) and "familiarity";
// alignment is personal and changes as the user consumes. kCreator uses one
// intent per creator and aligns each item with its own creator.
enum class IntentMode { kNovelty, kCreator };

enum class Arm { kControl, kTreatment };

// Where the treatment arm's intent model gets its labels. kControl trains on
// pages served by the quality-only policy to the same users, as a small
// experiment arm would learn from platform-wide logs; kSelf trains on the
// arm's own pages.
enum class TrainSource { kControl, kSelf };

std::string_view ToString(IntentMode mode);
std::string_view ToString(Arm arm);
IntentMode ParseIntentMode(std::string_view name);  // "novelty" | "creator"
Arm ParseArm(std::string_view name);                // "control" | "treatment"
std::string_view ToString(TrainSource source);
TrainSource ParseTrainSource(std::string_view name);  // "control" | "self"

inline constexpr IntentIndex kExploration = 0;
inline constexpr IntentIndex kFamiliarity = 1;

struct Policy {
  Arm arm = Arm::kControl;
  double gamma = 0.02;
  PosteriorMode posterior_mode = PosteriorMode::kPaperLiteral;
  TieBreak tie_break = TieBreak::kLowestItemId;
};

struct SimConfig {
  std::size_t n_users = 2000;
  std::size_t n_days = 30;
  std::size_t sessions_per_day = 8;
  std::size_t page_size = 10;
  std::size_t pool_size = 40;
  IntentMode intent_mode = IntentMode::kNovelty;
  std::size_t catalog_size = 20000;
  std::size_t n_creators = 1000;
  std::size_t n_clusters = 50;
  double creator_popularity_exponent = 1.0;  // Zipf exponent of items per creator
  std::size_t initial_seen_creators = 150;

  double quality_min = 0.3;  // intrinsic quality ~ U(quality_min, quality_max)
  double quality_max = 0.9;
  double quality_noise = 0.0;  // sigma of the log-normal factor on s
  // Consumption probability of an item outside the drawn intent, as a
  // multiple of its base value. 0 gives hard intents.
  double off_intent_affinity = 0.6;

  std::size_t patience_min = 4;
  std::size_t patience_max = 10;
  double continuation_min = 0.75;
  double continuation_max = 0.95;

  double intent_logit_mean = 0.0;  // first intent's base logit, novelty mode
  double intent_logit_sd = 1.0;
  double hourly_amplitude = 0.8;
  double hourly_phase_sd = 0.6;  // per-user phase ~ N(0, sd) around a shared rhythm
  double progress_weight = 1.0;  // within-day drift toward the first intent

  double initial_return_min = 0.5;
  double initial_return_max = 0.9;
  double return_smoothing = 0.8;  // rho

  TrainConfig train{0.1, 3, 256, 1e-3, 0, 1e-12};
  std::size_t train_window_days = 7;
  TrainSource train_source = TrainSource::kControl;

  std::uint64_t seed = 1;
  Policy policy;

  bool record_pages = false;
  bool record_logs = false;
  bool collect_examples = false;

  std::size_t num_intents() const;
  // Throws ConfigError naming the offending field.
  void Validate() const;
};

struct CatalogItem {
  std::string item_id;
  std::uint32_t creator_id = 0;
  std::uint32_t cluster_id = 0;
  std::vector<IntentIndex> aligned;  // creator mode only; novelty mode is per user
  double intrinsic_quality = 0.5;
  double length = 1.0;  // relative item length
};

struct Catalog {
  std::vector<CatalogItem> items;
  std::size_t n_creators = 0;
  std::size_t n_clusters = 0;
  IntentMode intent_mode = IntentMode::kNovelty;

  double mean_quality() const;
};

Catalog GenerateCatalog(const SimConfig& config);

struct UserProfile {
  std::uint32_t user_id = 0;
  std::vector<double> base_logits;
  double hourly_amplitude = 0.0;
  double phase = 0.0;
  double progress_weight = 0.0;
  std::size_t patience = 1;
  double continuation_prob = 1.0;
  double return_propensity = 0.5;
  std::vector<char> seen_creators;

  bool has_seen(std::uint32_t creator) const { return seen_creators[creator] != 0; }
  bool seen_all() const;
};

UserProfile GenerateUser(const SimConfig& config, const Catalog& catalog, std::uint32_t user_id);

// softmax(base_logits + amplitude * sin(2 pi hour / 24 + phase + 2 pi v / |V|))
// plus progress_weight * (progress - 0.5) on the first intent. `progress` is
// the position of the page within the user's day, in [0, 1].
IntentDistribution sample_true_intent_dist(const UserProfile& user, int hour,
                                           double progress = 0.5);

struct CandidatePool {
  std::vector<Candidate> candidates;
  std::vector<std::size_t> catalog_index;
};

// Draws pool_size distinct catalog items uniformly. base_value is the
// intrinsic quality and quality is base_value * exp(noise * N(0, 1)).
CandidatePool generate_candidates(const Catalog& catalog, const UserProfile& user,
                                  std::size_t pool_size, double quality_noise, StreamRng& rng);

// Novelty flag and (novelty mode) alignment of an item for this user.
void AnnotateForUser(Candidate& candidate, const CatalogItem& item, const Catalog& catalog,
                     const UserProfile& user);

struct SessionLog {
  std::uint32_t user_id = 0;
  std::uint32_t day = 0;
  std::uint32_t session = 0;
  int hour = 0;
  std::vector<std::string> slate;
  std::optional<std::size_t> consumed_position;  // 0-based
  std::optional<std::string> consumed_item;
  std::size_t scanned_depth = 0;
  IntentIndex true_intent = 0;
};

struct PageContext {
  std::uint32_t day = 0;
  std::uint32_t session = 0;
  int hour = 12;
  double progress = 0.5;
  double off_intent_affinity = 0.0;
  std::uint64_t page_key = 0;  // seeds the intent draw and all coins
};

// Cascade scan of `served` (slate order): draw the intent, scan up to
// patience positions; an aligned item is consumed with probability
// base_value, any other with off_intent_affinity * base_value; after a
// rejection the user continues with probability continuation_prob.
SessionLog simulate_page_view(const UserProfile& user, std::span<const Candidate> served,
                              const PageContext& context);

// Multi-hot label from the consumed item's alignment; none without a consumption.
std::optional<LabeledExample> label_from_log(const SessionLog& log,
                                             std::span<const Candidate> served,
                                             std::size_t num_intents,
                                             std::vector<double> features);

double update_return_propensity(double propensity, double day_satisfaction, double rho);
void update_return_propensity(UserProfile& user, double day_satisfaction, double rho);

// Quality-only ranking: first `page_size` candidates by descending quality
// under the tie rule.
std::vector<std::size_t> RankByQuality(std::span<const Candidate> candidates,
                                       std::size_t page_size, TieBreak tie_break);

// Labeled examples grouped by the day they were logged.
using LabelsByDay = std::vector<std::vector<LabeledExample>>;

struct ExperimentResult {
  ExperimentReport report;
  std::vector<SessionLog> logs;  // when record_logs
  Dataset examples;              // when collect_examples
  LabelsByDay labels_by_day;     // control arm only
};

// Full day loop for the configured policy. Deterministic given the config.
// A treatment arm with TrainSource::kControl first runs the control arm of
// the same config for its labels unless `control_labels` supplies them.
ExperimentResult run_experiment(const SimConfig& config,
                                const LabelsByDay* control_labels = nullptr);

// Control arm plus one treatment arm per policy, sharing the control labels.
struct PairedRuns {
  ExperimentResult control;
  std::vector<ExperimentResult> treatments;
};
PairedRuns RunPaired(const SimConfig& base, const std::vector<Policy>& treatments);

}  // namespace intentdiv
