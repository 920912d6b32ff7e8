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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intentdiv/distribution.hpp"
#include "intentdiv/intent_space.hpp"

namespace intentdiv {

// Canonical page-level features produced by the simulator. The hour of day
// enters as a (sin, cos) pair.
const std::vector<std::string>& CanonicalFeatureNames();

struct LabeledExample {
  std::vector<double> x;
  std::vector<double> y;  // 0/1 per intent, at least one 1
};

struct Dataset {
  std::vector<std::string> feature_names;
  IntentSpace intents;
  std::vector<LabeledExample> examples;

  // Throws InputError on dimension mismatch, non-finite features, labels
  // outside {0, 1} or an all-zero label row.
  void Validate() const;
};

// Softmax regression weights. W is row-major |V| x d.
struct IntentModelParams {
  std::size_t num_intents = 0;
  std::size_t num_features = 0;
  std::vector<double> W;
  std::vector<double> b;

  static IntentModelParams Zeros(std::size_t num_intents, std::size_t num_features);
  double& w(std::size_t v, std::size_t k) { return W[v * num_features + k]; }
  double w(std::size_t v, std::size_t k) const { return W[v * num_features + k]; }
};

struct ParamsGradient {
  std::vector<double> W;
  std::vector<double> b;
};

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 5;
  std::size_t batch_size = 64;
  double l2 = 0.0;
  std::uint64_t seed = 0;
  double log_floor = 1e-12;

  // Throws InputError unless learning_rate > 0, epochs >= 1,
  // batch_size >= 1 and l2 >= 0.
  void Validate() const;
};

// softmax(W x + b). Throws InputError on dimension mismatch.
IntentDistribution predict_intents(const IntentModelParams& params, std::span<const double> x);

// Allocation-free variant writing |V| probabilities into `out`.
void PredictInto(const IntentModelParams& params, std::span<const double> x,
                 std::span<double> out);

// -sum_n sum_v y log f_v(x_n) + l2 * ||W||^2, with log f floored at log(log_floor).
double loss(const IntentModelParams& params, std::span<const LabeledExample> batch, double l2,
            double log_floor = 1e-12);

// Gradient of loss() with respect to W and b.
ParamsGradient gradient(const IntentModelParams& params, std::span<const LabeledExample> batch,
                        double l2);

// Mini-batch gradient descent from zero weights on already-scaled features.
// Each step moves by learning_rate times the batch-mean gradient, with the
// l2 term spread evenly over the batches of an epoch.
IntentModelParams train(std::span<const LabeledExample> examples, std::size_t num_intents,
                        const TrainConfig& config);

// Per-feature affine map to zero mean and unit variance. Constant features
// keep scale 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer Fit(std::span<const LabeledExample> examples, std::size_t num_features);
  void Apply(std::span<const double> x, std::span<double> out) const;
  std::vector<double> Apply(std::span<const double> x) const;
};

// Trained predictor bundled with its feature manifest and scaling.
struct IntentModel {
  std::vector<std::string> feature_names;
  IntentSpace intents;
  Standardizer standardizer;
  IntentModelParams params;

  IntentDistribution Predict(std::span<const double> raw_x) const;
  void PredictInto(std::span<const double> raw_x, std::span<double> scratch,
                   std::span<double> out) const;
};

// Fits the standardizer on `data`, then train().
IntentModel TrainIntentModel(const Dataset& data, const TrainConfig& config);

// Predictions for every example of `data`, row per example.
std::vector<std::vector<double>> PredictAll(const IntentModel& model, const Dataset& data);

struct ReliabilityBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  double mean_prediction = 0.0;
  double mean_label = 0.0;
};

struct IntentEvaluation {
  std::string intent;
  std::optional<double> auc;                // absent for a constant label column
  std::optional<double> calibration_ratio;  // absent when no positive labels
  double mean_prediction = 0.0;
  double mean_label = 0.0;
  std::vector<ReliabilityBin> reliability;  // 10 equal-width bins on [0, 1]
};

struct Evaluation {
  std::size_t examples = 0;
  double log_loss = 0.0;  // mean per example
  double accuracy = 0.0;  // argmax prediction lands on a positive label
  std::vector<IntentEvaluation> per_intent;
};

// Area under the ROC curve from the Mann-Whitney rank statistic, tied
// scores sharing their average rank. Absent unless both classes occur.
std::optional<double> RankAuc(std::span<const double> scores, std::span<const double> labels);

// Throws InputError for an empty set or mismatched sizes.
Evaluation EvaluatePredictions(const std::vector<std::vector<double>>& predictions,
                               std::span<const LabeledExample> examples,
                               const IntentSpace& intents, double log_floor = 1e-12);

Evaluation evaluate(const IntentModel& model, const Dataset& data);

// Sample Pearson correlation; absent when either side is constant or n < 3.
std::optional<double> Pearson(std::span<const double> x, std::span<const double> y);

struct FeatureCorrelation {
  std::string feature;
  std::optional<double> r;
};

// Pearson r of each raw feature with `predictions`, sorted by |r|
// descending; absent entries last, ties by feature name.
std::vector<FeatureCorrelation> feature_correlations(const Dataset& data,
                                                     std::span<const double> predictions);

// Line-delimited dataset records {"x": {name: value}, "y": {intent: 0/1}}.
// The first record fixes the feature and intent order. Throws DataError.
Dataset ReadDataset(std::istream& in, const std::string& source = "<dataset>");
void WriteDataset(std::ostream& out, const Dataset& data);

// Single JSON document with features, intents, standardization and weights.
void SaveModel(std::ostream& out, const IntentModel& model);
IntentModel LoadModel(std::istream& in, const std::string& source = "<model>");

}  // namespace intentdiv
