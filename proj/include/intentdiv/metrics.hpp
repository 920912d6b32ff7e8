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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intentdiv/candidate.hpp"
#include "intentdiv/diversifier.hpp"

namespace intentdiv {

struct SlateMetrics {
  double intent_coverage = 0.0;
  double effective_intents = 0.0;
  double mean_relevance = 0.0;
  std::size_t novel_impressions = 0;
};

// Metrics over the first K served items. `served` is in slate order.
// Throws InputError unless 1 <= K <= served.size().
SlateMetrics slate_metrics(std::span<const Candidate> served, std::size_t num_intents,
                           std::size_t k);
SlateMetrics slate_metrics(const RankedSlate& slate, std::span<const Candidate> candidates,
                           std::size_t num_intents, std::size_t k);

struct ConsumptionEvent {
  std::uint64_t user = 0;
  std::uint64_t creator = 0;
  bool novel = false;  // creator unseen by the user at this consumption
};

// Number of (user, creator) pairs whose first consumption was of a novel
// creator and that were consumed at least twice in total. Events must be
// in time order.
std::size_t repeated_exploration(std::span<const ConsumptionEvent> events);

// Totals for one simulated day of one arm.
struct DailyMetrics {
  std::size_t day = 0;
  double active_users = 0;
  double expected_active_users = 0;  // sum of return propensities
  double pages = 0;
  double consumptions = 0;
  double satisfaction_sum = 0;
  double relevance_sum = 0;
  double served_items = 0;
  double novel_impressions = 0;
  double novel_consumptions = 0;
  double repeated_exploration = 0;  // pairs reaching their second consumption
  double unique_clusters_sum = 0;   // over active users
  double coverage_sum = 0;
  double effective_intents_sum = 0;
};

// The same totals accumulated per user over the horizon.
using UserTotals = DailyMetrics;

// One served page, kept for intent-sliced analyses.
struct PageRecord {
  std::uint32_t user = 0;
  std::uint32_t day = 0;
  std::uint32_t session = 0;
  std::vector<double> features;
  double true_explore = 0.0;    // ground-truth Pr(first intent) for the page
  double served_explore = 0.0;  // prior used by the policy (uniform for control)
  double predicted_explore = 0.0;  // filled by an analysis model
  std::uint32_t novel_impressions = 0;
  bool consumed = false;
  bool novel_consumed = false;
};

struct ExperimentReport {
  std::string arm;
  std::size_t n_users = 0;
  std::size_t n_days = 0;
  std::vector<DailyMetrics> days;
  std::vector<UserTotals> users;
  std::size_t model_calls = 0;
  std::size_t train_calls = 0;
  std::size_t labeled_examples = 0;
  std::size_t consumed_pages = 0;
  std::vector<PageRecord> pages;  // only when recording was requested
};

enum class MetricKind {
  kPerDay,  // horizon total / n_days
  kRatio,   // numerator total / denominator total
  kTotal,   // horizon total
};

struct MetricDef {
  std::string name;
  MetricKind kind;
  double DailyMetrics::*numerator;
  double DailyMetrics::*denominator;  // kRatio only
};

// Reported metrics in CSV order.
const std::vector<MetricDef>& ReportMetrics();
const MetricDef& FindMetric(const std::string& name);

// Value of a metric over one day or the whole horizon; absent for 0/0.
std::optional<double> MetricValue(const MetricDef& metric, const DailyMetrics& totals,
                                  double n_days);
std::optional<double> MetricValue(const MetricDef& metric, const ExperimentReport& report);
DailyMetrics HorizonTotals(const ExperimentReport& report);
// Field-wise sum.
void AddTotals(DailyMetrics& into, const DailyMetrics& from);

struct ArmDelta {
  std::string metric;
  std::optional<double> control;
  std::optional<double> treatment;
  std::optional<double> delta;  // (t - c) / c
  std::optional<double> ci_low;
  std::optional<double> ci_high;
};

// Relative change of every reported metric with paired user-level
// percentile bootstrap intervals. Reports must cover the same users.
std::vector<ArmDelta> compare_arms(const ExperimentReport& treatment,
                                   const ExperimentReport& control, std::size_t resamples = 1000,
                                   std::uint64_t seed = 0, double level = 0.95);

struct BucketCounts {
  double pages = 0;
  double novel_impressions = 0;
  double novel_consumptions = 0;
  std::optional<double> novel_ctr;
};

struct BucketDelta {
  std::size_t bucket = 0;
  double lower = 0.0;
  double upper = 0.0;
  BucketCounts control;
  BucketCounts treatment;
  std::optional<double> novel_impressions;
  std::optional<double> novel_consumptions;
  std::optional<double> novel_ctr;
};

// Bucket edges at pooled quantiles of predicted_explore over both arms.
std::vector<double> PooledQuantileEdges(std::span<const PageRecord> control,
                                        std::span<const PageRecord> treatment,
                                        std::size_t n_buckets);

// Per-bucket relative deltas (t - c) / c of novelty counts and novel CTR.
std::vector<BucketDelta> slice_by_predicted_intent(std::span<const PageRecord> control,
                                                   std::span<const PageRecord> treatment,
                                                   std::size_t n_buckets);
std::vector<BucketDelta> SliceWithEdges(std::span<const PageRecord> control,
                                        std::span<const PageRecord> treatment,
                                        std::span<const double> edges);

// Spearman rank correlation with average ranks for ties; absent when either
// side is constant.
std::optional<double> Spearman(std::span<const double> x, std::span<const double> y);

struct SliceTrend {
  std::string metric;
  std::optional<double> rho;  // Spearman of delta against bucket index
  double p_value = 1.0;       // share of bootstrap rho <= 0
  std::size_t resamples = 0;
};

// Trend of novel_consumptions and novel_ctr deltas across buckets with a
// user-level paired bootstrap; bucket edges stay fixed across resamples.
std::vector<SliceTrend> SliceTrends(std::span<const PageRecord> control,
                                    std::span<const PageRecord> treatment, std::size_t n_buckets,
                                    std::size_t resamples, std::uint64_t seed);

}  // namespace intentdiv
