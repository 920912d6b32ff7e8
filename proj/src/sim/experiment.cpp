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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "intentdiv/errors.hpp"
#include "intentdiv/simulator.hpp"

namespace intentdiv {

namespace {

enum Purpose : std::uint64_t {
  kActivity = 3,
  kHours = 4,
  kPool = 8,
  kCompletion = 9,
  kPage = 10,
};

constexpr double kFirstVisitGapHours = 72.0;

struct CreatorStat {
  std::uint32_t count = 0;
  bool novel_first = false;
};

struct UserState {
  UserProfile profile;
  double last_visit_hour = -1.0;
  std::size_t active_days = 0;
  std::size_t consumptions = 0;
  std::size_t familiar_consumptions = 0;
  double completion_sum = 0.0;
  double length_sum = 0.0;
  std::vector<char> clusters_seen;
  std::size_t unique_clusters = 0;
  std::unordered_map<std::uint32_t, CreatorStat> creators;
};

void FillFeatures(const UserState& s, std::size_t day, std::size_t session_index,
                  std::size_t session_consumptions, int hour, std::vector<double>& x) {
  const double now = static_cast<double>(day) * 24.0 + hour;
  const double n = static_cast<double>(s.consumptions);
  x[0] = static_cast<double>(session_index);
  x[1] = static_cast<double>(session_consumptions);
  x[2] = s.last_visit_hour < 0.0 ? kFirstVisitGapHours : now - s.last_visit_hour;
  x[3] = n > 0 ? s.completion_sum / n : 0.5;
  x[4] = n > 0 ? s.length_sum / n : 1.0;
  x[5] = day > 0 ? static_cast<double>(s.active_days) / static_cast<double>(day) : 0.0;
  x[6] = n > 0 ? static_cast<double>(s.familiar_consumptions) / n : 0.5;
  x[7] = static_cast<double>(s.unique_clusters);
  x[8] = static_cast<double>(s.creators.size());
  const double angle = 2.0 * std::numbers::pi * hour / 24.0;
  x[9] = std::sin(angle);
  x[10] = std::cos(angle);
}

std::vector<int> SessionHours(std::uint64_t seed, std::uint32_t user, std::size_t day,
                              std::size_t sessions) {
  StreamRng rng(seed, {kHours, user, day});
  std::vector<int> hours(sessions);
  for (int& h : hours) h = static_cast<int>(rng.Below(24));
  std::sort(hours.begin(), hours.end());
  return hours;
}

}  // namespace

ExperimentResult run_experiment(const SimConfig& config, const LabelsByDay* control_labels) {
  config.Validate();
  const bool treatment_arm = config.policy.arm == Arm::kTreatment;
  LabelsByDay own_control_labels;
  if (treatment_arm && config.train_source == TrainSource::kControl && !control_labels) {
    SimConfig control = config;
    control.policy.arm = Arm::kControl;
    control.record_pages = false;
    control.record_logs = false;
    control.collect_examples = false;
    own_control_labels = run_experiment(control).labels_by_day;
    control_labels = &own_control_labels;
  }
  if (control_labels && control_labels->size() < config.n_days) {
    throw ConfigError("control labels cover fewer days than the experiment");
  }
  const Catalog catalog = GenerateCatalog(config);
  const std::size_t n_intents = config.num_intents();
  const std::vector<std::string>& feature_names = CanonicalFeatureNames();
  const std::size_t d = feature_names.size();
  const bool treatment = config.policy.arm == Arm::kTreatment;

  ExperimentResult result;
  ExperimentReport& report = result.report;
  report.arm = std::string(ToString(config.policy.arm));
  report.n_users = config.n_users;
  report.n_days = config.n_days;
  report.users.assign(config.n_users, UserTotals{});
  report.days.resize(config.n_days);

  if (config.intent_mode == IntentMode::kNovelty) {
    result.examples.intents = IntentSpace({"exploration", "familiarity"});
  } else {
    result.examples.intents = IntentSpace::Dense(n_intents);
  }
  result.examples.feature_names = feature_names;

  std::vector<UserState> users(config.n_users);
  for (std::uint32_t u = 0; u < config.n_users; ++u) {
    users[u].profile = GenerateUser(config, catalog, u);
    users[u].clusters_seen.assign(config.n_clusters, 0);
  }

  DiversifierConfig div;
  div.gamma = treatment ? config.policy.gamma : 1.0;
  div.posterior_mode = config.policy.posterior_mode;
  div.tie_break = config.policy.tie_break;
  div.slate_size = config.page_size;

  LabelsByDay examples_by_day(config.n_days);
  const bool learn_from_control = treatment && config.train_source == TrainSource::kControl;
  const LabelsByDay& training_days = learn_from_control ? *control_labels : examples_by_day;
  std::optional<IntentModel> model;
  const IntentDistribution uniform = IntentDistribution::Uniform(n_intents);

  std::vector<double> x(d);
  std::vector<double> scratch(d);
  std::vector<double> prior_probs(n_intents);
  std::vector<Candidate> served;
  std::vector<char> day_clusters(config.n_clusters);

  for (std::size_t day = 0; day < config.n_days; ++day) {
    if (treatment && day > 0) {
      Dataset window;
      window.feature_names = feature_names;
      window.intents = result.examples.intents;
      const std::size_t first = day > config.train_window_days ? day - config.train_window_days : 0;
      for (std::size_t k = first; k < day; ++k) {
        window.examples.insert(window.examples.end(), training_days[k].begin(),
                               training_days[k].end());
      }
      if (!window.examples.empty()) {
        TrainConfig tc = config.train;
        tc.seed = StreamKey(config.seed, {0x6d6f64656cULL, day});
        model = TrainIntentModel(window, tc);
        ++report.train_calls;
      }
    }

    DailyMetrics& today = report.days[day];
    today.day = day;
    for (std::uint32_t uid = 0; uid < config.n_users; ++uid) {
      UserState& s = users[uid];
      UserTotals& totals = report.users[uid];
      today.expected_active_users += s.profile.return_propensity;
      totals.expected_active_users += s.profile.return_propensity;
      if (KeyedUniform(config.seed, {kActivity, uid, day}) >= s.profile.return_propensity) {
        continue;
      }
      today.active_users += 1;
      totals.active_users += 1;

      const std::vector<int> hours = SessionHours(config.seed, uid, day, config.sessions_per_day);
      std::fill(day_clusters.begin(), day_clusters.end(), 0);
      std::size_t clusters_today = 0;
      std::size_t consumed_today = 0;
      double satisfaction_today = 0.0;

      for (std::size_t session = 0; session < config.sessions_per_day; ++session) {
        const int hour = hours[session];
        FillFeatures(s, day, session, consumed_today, hour, x);

        StreamRng pool_rng(config.seed, {kPool, uid, day, session});
        CandidatePool pool = generate_candidates(catalog, s.profile, config.pool_size,
                                                 config.quality_noise, pool_rng);

        double served_explore = 1.0 / static_cast<double>(n_intents);
        std::vector<std::size_t> order;
        if (treatment) {
          const IntentDistribution* prior = &uniform;
          IntentDistribution predicted;
          if (model) {
            model->PredictInto(x, scratch, prior_probs);
            ++report.model_calls;
            predicted = IntentDistribution(prior_probs, Normalization::kNormalized);
            prior = &predicted;
          }
          served_explore = (*prior)[0];
          order = diversify(*prior, pool.candidates, div).indices;
        } else {
          order = RankByQuality(pool.candidates, config.page_size, config.policy.tie_break);
        }
        served.clear();
        for (std::size_t index : order) served.push_back(pool.candidates[index]);

        PageContext ctx;
        ctx.day = static_cast<std::uint32_t>(day);
        ctx.session = static_cast<std::uint32_t>(session);
        ctx.hour = hour;
        ctx.progress = config.sessions_per_day > 1
                           ? static_cast<double>(session) /
                                 static_cast<double>(config.sessions_per_day - 1)
                           : 0.5;
        ctx.off_intent_affinity = config.off_intent_affinity;
        ctx.page_key = StreamKey(config.seed, {kPage, uid, day, session});
        SessionLog log = simulate_page_view(s.profile, served, ctx);

        const SlateMetrics sm = slate_metrics(served, n_intents, served.size());
        DailyMetrics page;
        page.pages = 1;
        page.relevance_sum = sm.mean_relevance * static_cast<double>(served.size());
        page.served_items = static_cast<double>(served.size());
        page.novel_impressions = static_cast<double>(sm.novel_impressions);
        page.coverage_sum = sm.intent_coverage;
        page.effective_intents_sum = sm.effective_intents;

        PageRecord record;
        if (config.record_pages) {
          record.user = uid;
          record.day = static_cast<std::uint32_t>(day);
          record.session = static_cast<std::uint32_t>(session);
          record.features = x;
          record.true_explore = sample_true_intent_dist(s.profile, hour, ctx.progress)[0];
          record.served_explore = served_explore;
          record.novel_impressions = static_cast<std::uint32_t>(sm.novel_impressions);
        }

        if (log.consumed_position) {
          const std::size_t pos = *log.consumed_position;
          const Candidate& item = served[pos];
          const CatalogItem& meta = catalog.items[pool.catalog_index[order[pos]]];
          page.consumptions = 1;
          page.satisfaction_sum = item.base_value;
          satisfaction_today += item.base_value;
          ++consumed_today;
          ++report.consumed_pages;

          if (auto label = label_from_log(log, served, n_intents, x)) {
            ++report.labeled_examples;
            if (!treatment || !learn_from_control) examples_by_day[day].push_back(*label);
            if (config.collect_examples) result.examples.examples.push_back(std::move(*label));
          }

          const bool novel = item.novelty;
          if (novel) page.novel_consumptions = 1;
          CreatorStat& cs = s.creators[meta.creator_id];
          if (cs.count == 0) cs.novel_first = novel;
          ++cs.count;
          if (cs.count == 2 && cs.novel_first) page.repeated_exploration = 1;
          if (!novel) ++s.familiar_consumptions;
          s.profile.seen_creators[meta.creator_id] = 1;
          ++s.consumptions;
          const bool on_intent = item.aligned_with(log.true_intent);
          StreamRng completion_rng(ctx.page_key, {kCompletion});
          const double completion =
              0.35 + 0.5 * item.base_value * (on_intent ? 1.0 : 0.6) + 0.1 * completion_rng.Normal();
          s.completion_sum += std::clamp(completion, 0.0, 1.0);
          s.length_sum += meta.length;
          if (!s.clusters_seen[meta.cluster_id]) {
            s.clusters_seen[meta.cluster_id] = 1;
            ++s.unique_clusters;
          }
          if (!day_clusters[meta.cluster_id]) {
            day_clusters[meta.cluster_id] = 1;
            ++clusters_today;
          }
          if (config.record_pages) {
            record.consumed = true;
            record.novel_consumed = novel;
          }
        }
        s.last_visit_hour = static_cast<double>(day) * 24.0 + hour;

        AddTotals(today, page);
        AddTotals(totals, page);
        if (config.record_pages) report.pages.push_back(std::move(record));
        if (config.record_logs) result.logs.push_back(std::move(log));
      }

      today.unique_clusters_sum += static_cast<double>(clusters_today);
      totals.unique_clusters_sum += static_cast<double>(clusters_today);
      ++s.active_days;
      if (config.sessions_per_day > 0) {
        const double day_satisfaction =
            satisfaction_today / static_cast<double>(config.sessions_per_day);
        update_return_propensity(s.profile, day_satisfaction, config.return_smoothing);
      }
    }
  }
  if (!treatment) result.labels_by_day = std::move(examples_by_day);
  return result;
}

PairedRuns RunPaired(const SimConfig& base, const std::vector<Policy>& treatments) {
  PairedRuns runs;
  SimConfig control = base;
  control.policy.arm = Arm::kControl;
  runs.control = run_experiment(control);
  for (const Policy& policy : treatments) {
    SimConfig arm = base;
    arm.policy = policy;
    arm.policy.arm = Arm::kTreatment;
    runs.treatments.push_back(run_experiment(arm, &runs.control.labels_by_day));
  }
  return runs;
}

}  // namespace intentdiv
