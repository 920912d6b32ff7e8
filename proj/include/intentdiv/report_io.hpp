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

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intentdiv/metrics.hpp"
#include "intentdiv/simulator.hpp"

namespace intentdiv {

// Shortest decimal text that reads back to the same double.
std::string FormatNumber(double value);
// Empty string for an absent value.
std::string FormatNumber(const std::optional<double>& value);

// arm,day,metric,value with one row per day per reported metric, days in
// order and metrics in ReportMetrics() order. Absent values are empty.
void WriteDailyCsv(std::ostream& out, const ExperimentReport& report);

// user,<DailyMetrics fields>: per-user horizon totals.
void WriteUserTotalsCsv(std::ostream& out, const ExperimentReport& report);
// Restores report.users from WriteUserTotalsCsv output. Throws DataError.
std::vector<UserTotals> ReadUserTotalsCsv(std::istream& in, const std::string& source);

// Run metadata plus horizon metric values as one JSON document.
void WriteSummaryJson(std::ostream& out, const ExperimentReport& report);
// Fills arm, n_users, n_days and the counters. Throws DataError.
void ReadSummaryJson(std::istream& in, const std::string& source, ExperimentReport& report);

// user,day,session,true_explore,served_explore,novel_impressions,consumed,
// novel_consumed, then one column per feature.
void WritePagesCsv(std::ostream& out, std::span<const PageRecord> pages,
                   const std::vector<std::string>& feature_names);
std::vector<PageRecord> ReadPagesCsv(std::istream& in, const std::string& source,
                                     std::size_t num_features);

// metric,control,treatment,delta,ci_low,ci_high
void WriteCompareCsv(std::ostream& out, std::span<const ArmDelta> rows);

// One row of the gamma sweep.
struct SweepRow {
  double gamma = 0.0;
  std::optional<double> diversity;  // effective intents per page
  std::optional<double> novelty;    // novel impressions per day
  std::optional<double> relevance;  // mean served quality
  std::optional<double> dau;        // mean active users per day
  std::optional<double> expected_dau;
  std::optional<double> novel_consumptions;
  std::optional<double> satisfaction_mean;
  ArmDelta dau_delta;
  ArmDelta expected_dau_delta;
};

// gamma,diversity,novelty,relevance,dau,expected_dau,novel_consumptions,
// satisfaction_mean,dau_delta,dau_ci_low,dau_ci_high,expected_dau_delta,
// expected_dau_ci_low,expected_dau_ci_high
void WriteSweepCsv(std::ostream& out, std::span<const SweepRow> rows);

// bucket,lower,upper,control_pages,treatment_pages,control_novel_impressions,
// treatment_novel_impressions,control_novel_consumptions,
// treatment_novel_consumptions,delta_novel_impressions,
// delta_novel_consumptions,delta_novel_ctr
void WriteSliceCsv(std::ostream& out, std::span<const BucketDelta> buckets);
// metric,rho,p_value,resamples
void WriteSliceTrendCsv(std::ostream& out, std::span<const SliceTrend> trends);

// One JSON object per page view.
void WriteSessionLogs(std::ostream& out, std::span<const SessionLog> logs);

}  // namespace intentdiv
