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
#include <numeric>

#include "intentdiv/errors.hpp"
#include "intentdiv/intent_model.hpp"

namespace intentdiv {

namespace {
constexpr std::size_t kReliabilityBins = 10;
}  // namespace

std::optional<double> RankAuc(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) throw InputError("RankAuc: size mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double positive_rank_sum = 0.0;
  double positives = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    // Ranks i+1..j share their mean.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] > 0.5) {
        positive_rank_sum += rank;
        positives += 1.0;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0) return std::nullopt;
  return (positive_rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

Evaluation EvaluatePredictions(const std::vector<std::vector<double>>& predictions,
                               std::span<const LabeledExample> examples,
                               const IntentSpace& intents, double log_floor) {
  if (examples.empty()) throw InputError("evaluate: empty dataset");
  if (predictions.size() != examples.size()) throw InputError("evaluate: size mismatch");
  const std::size_t n = examples.size();
  const std::size_t n_intents = intents.size();
  const double floor = std::log(log_floor);

  Evaluation eval;
  eval.examples = n;
  double total_loss = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = predictions[i];
    const auto& y = examples[i].y;
    if (p.size() != n_intents || y.size() != n_intents) {
      throw InputError("evaluate: intent dimension mismatch");
    }
    std::size_t best = 0;
    for (std::size_t v = 0; v < n_intents; ++v) {
      if (y[v] != 0.0) total_loss -= y[v] * std::max(std::log(p[v]), floor);
      if (p[v] > p[best]) best = v;
    }
    if (y[best] > 0.5) ++hits;
  }
  eval.log_loss = total_loss / static_cast<double>(n);
  eval.accuracy = static_cast<double>(hits) / static_cast<double>(n);

  std::vector<double> scores(n);
  std::vector<double> labels(n);
  for (std::size_t v = 0; v < n_intents; ++v) {
    IntentEvaluation ie;
    ie.intent = intents.id(static_cast<IntentIndex>(v));
    ie.reliability.resize(kReliabilityBins);
    for (std::size_t b = 0; b < kReliabilityBins; ++b) {
      ie.reliability[b].lower = static_cast<double>(b) / kReliabilityBins;
      ie.reliability[b].upper = static_cast<double>(b + 1) / kReliabilityBins;
    }
    double sum_p = 0.0;
    double sum_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = predictions[i][v];
      labels[i] = examples[i].y[v];
      sum_p += scores[i];
      sum_y += labels[i];
      const std::size_t b =
          std::min(kReliabilityBins - 1, static_cast<std::size_t>(scores[i] * kReliabilityBins));
      ie.reliability[b].count += 1;
      ie.reliability[b].mean_prediction += scores[i];
      ie.reliability[b].mean_label += labels[i];
    }
    for (ReliabilityBin& bin : ie.reliability) {
      if (bin.count > 0) {
        bin.mean_prediction /= static_cast<double>(bin.count);
        bin.mean_label /= static_cast<double>(bin.count);
      }
    }
    ie.mean_prediction = sum_p / static_cast<double>(n);
    ie.mean_label = sum_y / static_cast<double>(n);
    if (sum_y > 0.0) ie.calibration_ratio = sum_p / sum_y;
    ie.auc = RankAuc(scores, labels);
    eval.per_intent.push_back(std::move(ie));
  }
  return eval;
}

Evaluation evaluate(const IntentModel& model, const Dataset& data) {
  if (data.feature_names != model.feature_names) {
    throw InputError("evaluate: dataset features do not match the model");
  }
  if (!(data.intents == model.intents)) {
    throw InputError("evaluate: dataset intents do not match the model");
  }
  return EvaluatePredictions(PredictAll(model, data), data.examples, data.intents);
}

std::optional<double> Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("Pearson: size mismatch");
  const std::size_t n = x.size();
  if (n < 3) return std::nullopt;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<FeatureCorrelation> feature_correlations(const Dataset& data,
                                                     std::span<const double> predictions) {
  if (predictions.size() != data.examples.size()) {
    throw InputError("feature_correlations: one prediction per example required");
  }
  std::vector<FeatureCorrelation> out;
  std::vector<double> column(data.examples.size());
  for (std::size_t k = 0; k < data.feature_names.size(); ++k) {
    for (std::size_t i = 0; i < data.examples.size(); ++i) column[i] = data.examples[i].x[k];
    out.push_back({data.feature_names[k], Pearson(column, predictions)});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.r.has_value() != b.r.has_value()) return a.r.has_value();
    if (a.r && std::abs(*a.r) != std::abs(*b.r)) return std::abs(*a.r) > std::abs(*b.r);
    return a.feature < b.feature;
  });
  return out;
}

}  // namespace intentdiv
