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

#include "intentdiv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "intentdiv/errors.hpp"
#include "intentdiv/random.hpp"

namespace intentdiv {

SlateMetrics slate_metrics(std::span<const Candidate> served, std::size_t num_intents,
                           std::size_t k) {
  if (k == 0 || k > served.size()) {
    throw InputError("slate_metrics: K must lie in 1..slate length");
  }
  SlateMetrics out;
  std::vector<std::pair<IntentIndex, double>> mass;
  double relevance = 0.0;
  for (std::size_t m = 0; m < k; ++m) {
    const Candidate& c = served[m];
    relevance += c.quality;
    if (c.novelty) ++out.novel_impressions;
    const double share = 1.0 / static_cast<double>(c.aligned.size());
    for (IntentIndex v : c.aligned) mass.emplace_back(v, share);
  }
  std::sort(mass.begin(), mass.end());
  std::vector<double> per_intent;
  for (std::size_t i = 0; i < mass.size();) {
    double total = 0.0;
    std::size_t j = i;
    while (j < mass.size() && mass[j].first == mass[i].first) total += mass[j++].second;
    per_intent.push_back(total);
    i = j;
  }
  const double denom = static_cast<double>(std::min(k, num_intents));
  out.intent_coverage = static_cast<double>(per_intent.size()) / denom;
  double entropy = 0.0;
  for (double w : per_intent) {
    const double p = w / static_cast<double>(k);
    if (p > 0.0) entropy -= p * std::log(p);
  }
  out.effective_intents = std::exp(entropy);
  out.mean_relevance = relevance / static_cast<double>(k);
  return out;
}

SlateMetrics slate_metrics(const RankedSlate& slate, std::span<const Candidate> candidates,
                           std::size_t num_intents, std::size_t k) {
  std::vector<Candidate> served;
  served.reserve(slate.indices.size());
  for (std::size_t index : slate.indices) served.push_back(candidates[index]);
  return slate_metrics(served, num_intents, k);
}

std::size_t repeated_exploration(std::span<const ConsumptionEvent> events) {
  struct PairState {
    bool novel_first = false;
    std::size_t count = 0;
  };
  std::map<std::pair<std::uint64_t, std::uint64_t>, PairState> pairs;
  for (const ConsumptionEvent& e : events) {
    PairState& s = pairs[{e.user, e.creator}];
    if (s.count == 0) s.novel_first = e.novel;
    ++s.count;
  }
  std::size_t total = 0;
  for (const auto& [key, s] : pairs) {
    if (s.novel_first && s.count >= 2) ++total;
  }
  return total;
}

const std::vector<MetricDef>& ReportMetrics() {
  using D = DailyMetrics;
  static const std::vector<MetricDef> defs = {
      {"dau", MetricKind::kPerDay, &D::active_users, nullptr},
      {"expected_dau", MetricKind::kPerDay, &D::expected_active_users, nullptr},
      {"pages", MetricKind::kPerDay, &D::pages, nullptr},
      {"consumptions", MetricKind::kPerDay, &D::consumptions, nullptr},
      {"satisfaction_mean", MetricKind::kRatio, &D::satisfaction_sum, &D::pages},
      {"mean_relevance", MetricKind::kRatio, &D::relevance_sum, &D::served_items},
      {"novel_impressions", MetricKind::kPerDay, &D::novel_impressions, nullptr},
      {"novel_consumptions", MetricKind::kPerDay, &D::novel_consumptions, nullptr},
      {"novel_ctr", MetricKind::kRatio, &D::novel_consumptions, &D::novel_impressions},
      {"repeated_exploration", MetricKind::kTotal, &D::repeated_exploration, nullptr},
      {"unique_clusters_per_user", MetricKind::kRatio, &D::unique_clusters_sum,
       &D::active_users},
      {"intent_coverage", MetricKind::kRatio, &D::coverage_sum, &D::pages},
      {"effective_intents", MetricKind::kRatio, &D::effective_intents_sum, &D::pages},
  };
  return defs;
}

const MetricDef& FindMetric(const std::string& name) {
  for (const MetricDef& m : ReportMetrics()) {
    if (m.name == name) return m;
  }
  throw InputError("unknown metric '" + name + "'");
}

std::optional<double> MetricValue(const MetricDef& metric, const DailyMetrics& totals,
                                  double n_days) {
  const double num = totals.*metric.numerator;
  switch (metric.kind) {
    case MetricKind::kPerDay:
      if (n_days <= 0) return std::nullopt;
      return num / n_days;
    case MetricKind::kTotal:
      return num;
    case MetricKind::kRatio: {
      const double den = totals.*metric.denominator;
      if (den == 0.0) return std::nullopt;
      return num / den;
    }
  }
  return std::nullopt;
}

void AddTotals(DailyMetrics& into, const DailyMetrics& from) {
  into.active_users += from.active_users;
  into.expected_active_users += from.expected_active_users;
  into.pages += from.pages;
  into.consumptions += from.consumptions;
  into.satisfaction_sum += from.satisfaction_sum;
  into.relevance_sum += from.relevance_sum;
  into.served_items += from.served_items;
  into.novel_impressions += from.novel_impressions;
  into.novel_consumptions += from.novel_consumptions;
  into.repeated_exploration += from.repeated_exploration;
  into.unique_clusters_sum += from.unique_clusters_sum;
  into.coverage_sum += from.coverage_sum;
  into.effective_intents_sum += from.effective_intents_sum;
}

DailyMetrics HorizonTotals(const ExperimentReport& report) {
  DailyMetrics total;
  for (const DailyMetrics& d : report.days) AddTotals(total, d);
  return total;
}

std::optional<double> MetricValue(const MetricDef& metric, const ExperimentReport& report) {
  return MetricValue(metric, HorizonTotals(report), static_cast<double>(report.n_days));
}

namespace {

std::optional<double> RelativeDelta(std::optional<double> t, std::optional<double> c) {
  if (!t || !c || *c == 0.0) return std::nullopt;
  return (*t - *c) / *c;
}

double Quantile(std::vector<double>& sorted_values, double q) {
  const double pos = q * static_cast<double>(sorted_values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

std::vector<double> AverageRanks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j - 1);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

}  // namespace

std::vector<ArmDelta> compare_arms(const ExperimentReport& treatment,
                                   const ExperimentReport& control, std::size_t resamples,
                                   std::uint64_t seed, double level) {
  if (treatment.users.size() != control.users.size()) {
    throw InputError("compare_arms: reports cover different user sets");
  }
  if (treatment.n_days != control.n_days) {
    throw InputError("compare_arms: reports cover different horizons");
  }
  const std::size_t n = control.users.size();
  const double n_days = static_cast<double>(control.n_days);
  const auto& metrics = ReportMetrics();

  std::vector<ArmDelta> rows;
  // Point estimates from the same per-user totals the bootstrap resamples.
  DailyMetrics t_total;
  DailyMetrics c_total;
  for (std::size_t i = 0; i < n; ++i) {
    AddTotals(t_total, treatment.users[i]);
    AddTotals(c_total, control.users[i]);
  }
  for (const MetricDef& m : metrics) {
    ArmDelta row;
    row.metric = m.name;
    row.treatment = MetricValue(m, t_total, n_days);
    row.control = MetricValue(m, c_total, n_days);
    row.delta = RelativeDelta(row.treatment, row.control);
    rows.push_back(row);
  }
  if (resamples == 0 || n == 0) return rows;

  std::vector<std::vector<double>> draws(metrics.size());
  StreamRng rng(seed, {0x626f6f74ULL});
  std::vector<std::size_t> pick(n);
  for (std::size_t r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i) pick[i] = rng.Below(n);
    DailyMetrics t_once;
    DailyMetrics c_once;
    for (std::size_t i : pick) {
      AddTotals(t_once, treatment.users[i]);
      AddTotals(c_once, control.users[i]);
    }
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      auto d = RelativeDelta(MetricValue(metrics[k], t_once, n_days),
                             MetricValue(metrics[k], c_once, n_days));
      if (d) draws[k].push_back(*d);
    }
  }
  const double tail = (1.0 - level) / 2.0;
  for (std::size_t k = 0; k < metrics.size(); ++k) {
    if (!rows[k].delta || draws[k].empty()) continue;
    std::sort(draws[k].begin(), draws[k].end());
    rows[k].ci_low = Quantile(draws[k], tail);
    rows[k].ci_high = Quantile(draws[k], 1.0 - tail);
  }
  return rows;
}

std::vector<double> PooledQuantileEdges(std::span<const PageRecord> control,
                                        std::span<const PageRecord> treatment,
                                        std::size_t n_buckets) {
  if (n_buckets == 0) throw InputError("n_buckets must be >= 1");
  std::vector<double> pooled;
  pooled.reserve(control.size() + treatment.size());
  for (const PageRecord& p : control) pooled.push_back(p.predicted_explore);
  for (const PageRecord& p : treatment) pooled.push_back(p.predicted_explore);
  if (pooled.empty()) throw InputError("slicing needs at least one page");
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> edges;
  edges.push_back(pooled.front());
  for (std::size_t b = 1; b < n_buckets; ++b) {
    edges.push_back(pooled[b * pooled.size() / n_buckets]);
  }
  edges.push_back(pooled.back());
  return edges;
}

namespace {

std::size_t BucketOf(double p, std::span<const double> edges) {
  // Interior edges are lower bounds of buckets 1..n-1.
  auto first = edges.begin() + 1;
  auto last = edges.end() - 1;
  return static_cast<std::size_t>(std::upper_bound(first, last, p) - first);
}

void Accumulate(BucketCounts& b, const PageRecord& p) {
  b.pages += 1;
  b.novel_impressions += p.novel_impressions;
  b.novel_consumptions += p.novel_consumed ? 1.0 : 0.0;
}

void Finish(BucketDelta& d) {
  for (BucketCounts* b : {&d.control, &d.treatment}) {
    if (b->novel_impressions > 0) b->novel_ctr = b->novel_consumptions / b->novel_impressions;
  }
  if (d.control.pages > 0 && d.treatment.pages > 0) {
    d.novel_impressions = RelativeDelta(d.treatment.novel_impressions / d.treatment.pages,
                                        d.control.novel_impressions / d.control.pages);
    d.novel_consumptions = RelativeDelta(d.treatment.novel_consumptions / d.treatment.pages,
                                         d.control.novel_consumptions / d.control.pages);
  }
  d.novel_ctr = RelativeDelta(d.treatment.novel_ctr, d.control.novel_ctr);
}

}  // namespace

std::vector<BucketDelta> SliceWithEdges(std::span<const PageRecord> control,
                                        std::span<const PageRecord> treatment,
                                        std::span<const double> edges) {
  if (edges.size() < 2) throw InputError("slicing needs at least two edges");
  const std::size_t n_buckets = edges.size() - 1;
  std::vector<BucketDelta> out(n_buckets);
  for (std::size_t b = 0; b < n_buckets; ++b) {
    out[b].bucket = b;
    out[b].lower = edges[b];
    out[b].upper = edges[b + 1];
  }
  for (const PageRecord& p : control) Accumulate(out[BucketOf(p.predicted_explore, edges)].control, p);
  for (const PageRecord& p : treatment) {
    Accumulate(out[BucketOf(p.predicted_explore, edges)].treatment, p);
  }
  for (BucketDelta& d : out) Finish(d);
  return out;
}

std::vector<BucketDelta> slice_by_predicted_intent(std::span<const PageRecord> control,
                                                   std::span<const PageRecord> treatment,
                                                   std::size_t n_buckets) {
  const std::vector<double> edges = PooledQuantileEdges(control, treatment, n_buckets);
  return SliceWithEdges(control, treatment, edges);
}

std::optional<double> Spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("Spearman: size mismatch");
  if (x.size() < 2) return std::nullopt;
  const std::vector<double> rx = AverageRanks(x);
  const std::vector<double> ry = AverageRanks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n - 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

std::optional<double> TrendOf(const std::vector<BucketDelta>& buckets,
                              std::optional<double> BucketDelta::*field) {
  std::vector<double> index;
  std::vector<double> value;
  for (const BucketDelta& b : buckets) {
    if (b.*field) {
      index.push_back(static_cast<double>(b.bucket));
      value.push_back(*(b.*field));
    }
  }
  return Spearman(index, value);
}

}  // namespace

std::vector<SliceTrend> SliceTrends(std::span<const PageRecord> control,
                                    std::span<const PageRecord> treatment, std::size_t n_buckets,
                                    std::size_t resamples, std::uint64_t seed) {
  const std::vector<double> edges = PooledQuantileEdges(control, treatment, n_buckets);
  const std::vector<BucketDelta> observed = SliceWithEdges(control, treatment, edges);

  struct Field {
    const char* name;
    std::optional<double> BucketDelta::*member;
  };
  const Field fields[] = {{"novel_consumptions", &BucketDelta::novel_consumptions},
                          {"novel_ctr", &BucketDelta::novel_ctr}};

  std::vector<SliceTrend> trends;
  for (const Field& f : fields) {
    SliceTrend t;
    t.metric = f.name;
    t.rho = TrendOf(observed, f.member);
    t.resamples = resamples;
    trends.push_back(t);
  }
  if (resamples == 0) return trends;

  // Per-user bucket counts so a resample is a weighted sum.
  std::uint32_t n_users = 0;
  for (const PageRecord& p : control) n_users = std::max(n_users, p.user + 1);
  for (const PageRecord& p : treatment) n_users = std::max(n_users, p.user + 1);
  std::vector<BucketCounts> c_user(static_cast<std::size_t>(n_users) * n_buckets);
  std::vector<BucketCounts> t_user(c_user.size());
  for (const PageRecord& p : control) {
    Accumulate(c_user[p.user * n_buckets + BucketOf(p.predicted_explore, edges)], p);
  }
  for (const PageRecord& p : treatment) {
    Accumulate(t_user[p.user * n_buckets + BucketOf(p.predicted_explore, edges)], p);
  }

  StreamRng rng(seed, {0x736c696365ULL});
  std::vector<std::size_t> non_positive(trends.size(), 0);
  for (std::size_t r = 0; r < resamples; ++r) {
    std::vector<BucketDelta> sample(n_buckets);
    for (std::size_t b = 0; b < n_buckets; ++b) sample[b].bucket = b;
    for (std::uint32_t i = 0; i < n_users; ++i) {
      const std::size_t u = rng.Below(n_users);
      for (std::size_t b = 0; b < n_buckets; ++b) {
        const BucketCounts& c = c_user[u * n_buckets + b];
        const BucketCounts& t = t_user[u * n_buckets + b];
        sample[b].control.pages += c.pages;
        sample[b].control.novel_impressions += c.novel_impressions;
        sample[b].control.novel_consumptions += c.novel_consumptions;
        sample[b].treatment.pages += t.pages;
        sample[b].treatment.novel_impressions += t.novel_impressions;
        sample[b].treatment.novel_consumptions += t.novel_consumptions;
      }
    }
    for (BucketDelta& d : sample) Finish(d);
    for (std::size_t k = 0; k < trends.size(); ++k) {
      const auto rho = TrendOf(sample, fields[k].member);
      if (!rho || *rho <= 0.0) ++non_positive[k];
    }
  }
  for (std::size_t k = 0; k < trends.size(); ++k) {
    trends[k].p_value = static_cast<double>(non_positive[k]) / static_cast<double>(resamples);
  }
  return trends;
}

}  // namespace intentdiv
