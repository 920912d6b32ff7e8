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

#include "intentdiv/report_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "intentdiv/errors.hpp"

namespace intentdiv {

namespace {

using Json = nlohmann::ordered_json;

struct TotalsField {
  const char* name;
  double DailyMetrics::*member;
};

// Every accumulated DailyMetrics field, in CSV order.
const std::vector<TotalsField>& TotalsFields() {
  using D = DailyMetrics;
  static const std::vector<TotalsField> fields = {
      {"active_users", &D::active_users},
      {"expected_active_users", &D::expected_active_users},
      {"pages", &D::pages},
      {"consumptions", &D::consumptions},
      {"satisfaction_sum", &D::satisfaction_sum},
      {"relevance_sum", &D::relevance_sum},
      {"served_items", &D::served_items},
      {"novel_impressions", &D::novel_impressions},
      {"novel_consumptions", &D::novel_consumptions},
      {"repeated_exploration", &D::repeated_exploration},
      {"unique_clusters_sum", &D::unique_clusters_sum},
      {"coverage_sum", &D::coverage_sum},
      {"effective_intents_sum", &D::effective_intents_sum},
  };
  return fields;
}

[[noreturn]] void Fail(const std::string& source, std::size_t line, const std::string& what) {
  throw DataError(source + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> SplitCsv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double ParseNumber(std::string_view cell, const std::string& source, std::size_t line) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || end != cell.data() + cell.size() || !std::isfinite(value)) {
    Fail(source, line, "not a number: '" + std::string(cell) + "'");
  }
  return value;
}

std::string Join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k > 0) out += ',';
    out += parts[k];
  }
  return out;
}

// Reads the header line and checks it against the expected columns.
void ExpectHeader(std::istream& in, const std::string& source, const std::string& expected) {
  std::string header;
  if (!std::getline(in, header)) Fail(source, 1, "missing header");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header != expected) Fail(source, 1, "unexpected header '" + header + "'");
}

Json OptionalNumber(const std::optional<double>& value) {
  return value ? Json(*value) : Json(nullptr);
}

}  // namespace

std::string FormatNumber(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, end);
}

std::string FormatNumber(const std::optional<double>& value) {
  return value ? FormatNumber(*value) : std::string();
}

void WriteDailyCsv(std::ostream& out, const ExperimentReport& report) {
  out << "arm,day,metric,value\n";
  for (const DailyMetrics& day : report.days) {
    for (const MetricDef& m : ReportMetrics()) {
      out << report.arm << ',' << day.day << ',' << m.name << ','
          << FormatNumber(MetricValue(m, day, 1.0)) << '\n';
    }
  }
}

void WriteUserTotalsCsv(std::ostream& out, const ExperimentReport& report) {
  out << "user";
  for (const TotalsField& f : TotalsFields()) out << ',' << f.name;
  out << '\n';
  for (std::size_t u = 0; u < report.users.size(); ++u) {
    out << u;
    for (const TotalsField& f : TotalsFields()) out << ',' << FormatNumber(report.users[u].*f.member);
    out << '\n';
  }
}

std::vector<UserTotals> ReadUserTotalsCsv(std::istream& in, const std::string& source) {
  std::string expected = "user";
  for (const TotalsField& f : TotalsFields()) expected += std::string(",") + f.name;
  ExpectHeader(in, source, expected);
  std::vector<UserTotals> users;
  std::string text;
  std::size_t line = 1;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    const auto cells = SplitCsv(text);
    if (cells.size() != TotalsFields().size() + 1) Fail(source, line, "wrong column count");
    if (ParseNumber(cells[0], source, line) != static_cast<double>(users.size())) {
      Fail(source, line, "users must be listed in order");
    }
    UserTotals totals;
    for (std::size_t k = 0; k < TotalsFields().size(); ++k) {
      totals.*TotalsFields()[k].member = ParseNumber(cells[k + 1], source, line);
    }
    users.push_back(totals);
  }
  return users;
}

void WriteSummaryJson(std::ostream& out, const ExperimentReport& report) {
  Json doc;
  doc["arm"] = report.arm;
  doc["n_users"] = report.n_users;
  doc["n_days"] = report.n_days;
  doc["model_calls"] = report.model_calls;
  doc["train_calls"] = report.train_calls;
  doc["labeled_examples"] = report.labeled_examples;
  doc["consumed_pages"] = report.consumed_pages;
  Json metrics = Json::object();
  for (const MetricDef& m : ReportMetrics()) metrics[m.name] = OptionalNumber(MetricValue(m, report));
  doc["metrics"] = std::move(metrics);
  out << doc.dump(2) << '\n';
}

void ReadSummaryJson(std::istream& in, const std::string& source, ExperimentReport& report) {
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DataError(source + ": " + e.what());
  }
  try {
    report.arm = doc.at("arm").get<std::string>();
    report.n_users = doc.at("n_users").get<std::size_t>();
    report.n_days = doc.at("n_days").get<std::size_t>();
    report.model_calls = doc.at("model_calls").get<std::size_t>();
    report.train_calls = doc.at("train_calls").get<std::size_t>();
    report.labeled_examples = doc.at("labeled_examples").get<std::size_t>();
    report.consumed_pages = doc.at("consumed_pages").get<std::size_t>();
  } catch (const Json::exception& e) {
    throw DataError(source + ": " + e.what());
  }
}

namespace {
const char* kPageColumns =
    "user,day,session,true_explore,served_explore,novel_impressions,consumed,novel_consumed";
constexpr std::size_t kPageFixedColumns = 8;
}  // namespace

void WritePagesCsv(std::ostream& out, std::span<const PageRecord> pages,
                   const std::vector<std::string>& feature_names) {
  out << kPageColumns;
  for (const std::string& name : feature_names) out << ',' << name;
  out << '\n';
  for (const PageRecord& p : pages) {
    out << p.user << ',' << p.day << ',' << p.session << ',' << FormatNumber(p.true_explore) << ','
        << FormatNumber(p.served_explore) << ',' << p.novel_impressions << ','
        << (p.consumed ? 1 : 0) << ',' << (p.novel_consumed ? 1 : 0);
    for (double x : p.features) out << ',' << FormatNumber(x);
    out << '\n';
  }
}

std::vector<PageRecord> ReadPagesCsv(std::istream& in, const std::string& source,
                                     std::size_t num_features) {
  std::string header;
  if (!std::getline(in, header)) Fail(source, 1, "missing header");
  if (header.rfind(kPageColumns, 0) != 0 ||
      SplitCsv(header).size() != kPageFixedColumns + num_features) {
    Fail(source, 1, "unexpected header");
  }
  std::vector<PageRecord> pages;
  std::string text;
  std::size_t line = 1;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    const auto cells = SplitCsv(text);
    if (cells.size() != kPageFixedColumns + num_features) Fail(source, line, "wrong column count");
    PageRecord p;
    p.user = static_cast<std::uint32_t>(ParseNumber(cells[0], source, line));
    p.day = static_cast<std::uint32_t>(ParseNumber(cells[1], source, line));
    p.session = static_cast<std::uint32_t>(ParseNumber(cells[2], source, line));
    p.true_explore = ParseNumber(cells[3], source, line);
    p.served_explore = ParseNumber(cells[4], source, line);
    p.novel_impressions = static_cast<std::uint32_t>(ParseNumber(cells[5], source, line));
    p.consumed = ParseNumber(cells[6], source, line) != 0.0;
    p.novel_consumed = ParseNumber(cells[7], source, line) != 0.0;
    p.features.reserve(num_features);
    for (std::size_t k = 0; k < num_features; ++k) {
      p.features.push_back(ParseNumber(cells[kPageFixedColumns + k], source, line));
    }
    pages.push_back(std::move(p));
  }
  return pages;
}

void WriteCompareCsv(std::ostream& out, std::span<const ArmDelta> rows) {
  out << "metric,control,treatment,delta,ci_low,ci_high\n";
  for (const ArmDelta& r : rows) {
    out << r.metric << ',' << FormatNumber(r.control) << ',' << FormatNumber(r.treatment) << ','
        << FormatNumber(r.delta) << ',' << FormatNumber(r.ci_low) << ','
        << FormatNumber(r.ci_high) << '\n';
  }
}

void WriteSweepCsv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "gamma,diversity,novelty,relevance,dau,expected_dau,novel_consumptions,"
         "satisfaction_mean,dau_delta,dau_ci_low,dau_ci_high,expected_dau_delta,"
         "expected_dau_ci_low,expected_dau_ci_high\n";
  for (const SweepRow& r : rows) {
    out << Join({FormatNumber(r.gamma), FormatNumber(r.diversity), FormatNumber(r.novelty),
                 FormatNumber(r.relevance), FormatNumber(r.dau), FormatNumber(r.expected_dau),
                 FormatNumber(r.novel_consumptions), FormatNumber(r.satisfaction_mean),
                 FormatNumber(r.dau_delta.delta), FormatNumber(r.dau_delta.ci_low),
                 FormatNumber(r.dau_delta.ci_high), FormatNumber(r.expected_dau_delta.delta),
                 FormatNumber(r.expected_dau_delta.ci_low),
                 FormatNumber(r.expected_dau_delta.ci_high)})
        << '\n';
  }
}

void WriteSliceCsv(std::ostream& out, std::span<const BucketDelta> buckets) {
  out << "bucket,lower,upper,control_pages,treatment_pages,control_novel_impressions,"
         "treatment_novel_impressions,control_novel_consumptions,treatment_novel_consumptions,"
         "delta_novel_impressions,delta_novel_consumptions,delta_novel_ctr\n";
  for (const BucketDelta& b : buckets) {
    out << Join({std::to_string(b.bucket), FormatNumber(b.lower), FormatNumber(b.upper),
                 FormatNumber(b.control.pages), FormatNumber(b.treatment.pages),
                 FormatNumber(b.control.novel_impressions),
                 FormatNumber(b.treatment.novel_impressions),
                 FormatNumber(b.control.novel_consumptions),
                 FormatNumber(b.treatment.novel_consumptions), FormatNumber(b.novel_impressions),
                 FormatNumber(b.novel_consumptions), FormatNumber(b.novel_ctr)})
        << '\n';
  }
}

void WriteSliceTrendCsv(std::ostream& out, std::span<const SliceTrend> trends) {
  out << "metric,rho,p_value,resamples\n";
  for (const SliceTrend& t : trends) {
    out << t.metric << ',' << FormatNumber(t.rho) << ',' << FormatNumber(t.p_value) << ','
        << t.resamples << '\n';
  }
}

void WriteSessionLogs(std::ostream& out, std::span<const SessionLog> logs) {
  for (const SessionLog& log : logs) {
    Json record;
    record["user_id"] = log.user_id;
    record["day"] = log.day;
    record["session"] = log.session;
    record["hour"] = log.hour;
    record["slate"] = log.slate;
    record["consumed_position"] =
        log.consumed_position ? Json(*log.consumed_position + 1) : Json(nullptr);
    record["consumed_item"] = log.consumed_item ? Json(*log.consumed_item) : Json(nullptr);
    record["scanned_depth"] = log.scanned_depth;
    record["true_intent"] = log.true_intent;
    out << record.dump() << '\n';
  }
}

}  // namespace intentdiv
