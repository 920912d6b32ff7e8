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

#include "intentdiv/intent_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "intentdiv/errors.hpp"
#include "intentdiv/random.hpp"

namespace intentdiv {

const std::vector<std::string>& CanonicalFeatureNames() {
  static const std::vector<std::string> names = {
      "session_length",           "session_consumptions",
      "time_since_last_session",  "avg_completion_ratio",
      "avg_item_length",          "past_activity_level",
      "repeated_consumption_ratio", "unique_clusters_consumed",
      "unique_creators",          "hour_sin",
      "hour_cos",
  };
  return names;
}

void Dataset::Validate() const {
  const std::size_t d = feature_names.size();
  const std::size_t n_intents = intents.size();
  for (std::size_t n = 0; n < examples.size(); ++n) {
    const LabeledExample& e = examples[n];
    const std::string where = "example " + std::to_string(n) + ": ";
    if (e.x.size() != d) throw InputError(where + "feature dimension mismatch");
    if (e.y.size() != n_intents) throw InputError(where + "label dimension mismatch");
    for (double value : e.x) {
      if (!std::isfinite(value)) throw InputError(where + "non-finite feature");
    }
    bool any = false;
    for (double y : e.y) {
      if (y != 0.0 && y != 1.0) throw InputError(where + "labels must be 0 or 1");
      any = any || y == 1.0;
    }
    if (!any) throw InputError(where + "no positive label");
  }
}

IntentModelParams IntentModelParams::Zeros(std::size_t num_intents, std::size_t num_features) {
  IntentModelParams p;
  p.num_intents = num_intents;
  p.num_features = num_features;
  p.W.assign(num_intents * num_features, 0.0);
  p.b.assign(num_intents, 0.0);
  return p;
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InputError("learning_rate must be > 0");
  }
  if (epochs < 1) throw InputError("epochs must be >= 1");
  if (batch_size < 1) throw InputError("batch_size must be >= 1");
  if (!(l2 >= 0.0) || !std::isfinite(l2)) throw InputError("l2 must be >= 0");
  if (!(log_floor > 0.0 && log_floor < 1.0)) throw InputError("log_floor must lie in (0, 1)");
}

void PredictInto(const IntentModelParams& params, std::span<const double> x,
                 std::span<double> out) {
  if (x.size() != params.num_features) {
    throw InputError("feature dimension " + std::to_string(x.size()) + " does not match model (" +
                     std::to_string(params.num_features) + ")");
  }
  double max_logit = -INFINITY;
  for (std::size_t v = 0; v < params.num_intents; ++v) {
    const double* row = params.W.data() + v * params.num_features;
    double z = params.b[v];
    for (std::size_t k = 0; k < x.size(); ++k) z += row[k] * x[k];
    out[v] = z;
    max_logit = std::max(max_logit, z);
  }
  double total = 0.0;
  for (std::size_t v = 0; v < params.num_intents; ++v) {
    out[v] = std::exp(out[v] - max_logit);
    total += out[v];
  }
  for (std::size_t v = 0; v < params.num_intents; ++v) out[v] /= total;
}

IntentDistribution predict_intents(const IntentModelParams& params, std::span<const double> x) {
  std::vector<double> out(params.num_intents);
  PredictInto(params, x, out);
  return IntentDistribution(std::move(out), Normalization::kNormalized);
}

double loss(const IntentModelParams& params, std::span<const LabeledExample> batch, double l2,
            double log_floor) {
  if (batch.empty()) throw InputError("loss: empty batch");
  const double floor = std::log(log_floor);
  std::vector<double> f(params.num_intents);
  double total = 0.0;
  for (const LabeledExample& e : batch) {
    PredictInto(params, e.x, f);
    for (std::size_t v = 0; v < params.num_intents; ++v) {
      if (e.y[v] != 0.0) total -= e.y[v] * std::max(std::log(f[v]), floor);
    }
  }
  double norm = 0.0;
  for (double w : params.W) norm += w * w;
  return total + l2 * norm;
}

ParamsGradient gradient(const IntentModelParams& params, std::span<const LabeledExample> batch,
                        double l2) {
  if (batch.empty()) throw InputError("gradient: empty batch");
  const std::size_t d = params.num_features;
  ParamsGradient g;
  g.W.assign(params.W.size(), 0.0);
  g.b.assign(params.num_intents, 0.0);
  std::vector<double> f(params.num_intents);
  for (const LabeledExample& e : batch) {
    PredictInto(params, e.x, f);
    double label_mass = 0.0;
    for (double y : e.y) label_mass += y;
    for (std::size_t v = 0; v < params.num_intents; ++v) {
      const double dz = f[v] * label_mass - e.y[v];
      g.b[v] += dz;
      double* row = g.W.data() + v * d;
      for (std::size_t k = 0; k < d; ++k) row[k] += dz * e.x[k];
    }
  }
  for (std::size_t i = 0; i < g.W.size(); ++i) g.W[i] += 2.0 * l2 * params.W[i];
  return g;
}

IntentModelParams train(std::span<const LabeledExample> examples, std::size_t num_intents,
                        const TrainConfig& config) {
  config.Validate();
  if (examples.empty()) throw InputError("train: empty dataset");
  if (num_intents == 0) throw InputError("train: empty intent space");
  const std::size_t d = examples.front().x.size();
  for (const LabeledExample& e : examples) {
    if (e.x.size() != d || e.y.size() != num_intents) {
      throw InputError("train: inconsistent example dimensions");
    }
  }

  IntentModelParams params = IntentModelParams::Zeros(num_intents, d);
  const std::size_t n = examples.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  StreamRng rng(config.seed, {0x747261696eULL});

  ParamsGradient g;
  g.W.resize(params.W.size());
  g.b.resize(num_intents);
  std::vector<double> f(num_intents);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.Below(i)]);
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      const double batch_n = static_cast<double>(stop - start);
      std::fill(g.W.begin(), g.W.end(), 0.0);
      std::fill(g.b.begin(), g.b.end(), 0.0);
      for (std::size_t i = start; i < stop; ++i) {
        const LabeledExample& e = examples[order[i]];
        PredictInto(params, e.x, f);
        double label_mass = 0.0;
        for (double y : e.y) label_mass += y;
        for (std::size_t v = 0; v < num_intents; ++v) {
          const double dz = f[v] * label_mass - e.y[v];
          g.b[v] += dz;
          double* row = g.W.data() + v * d;
          for (std::size_t k = 0; k < d; ++k) row[k] += dz * e.x[k];
        }
      }
      const double step = config.learning_rate / batch_n;
      const double decay = config.learning_rate * 2.0 * config.l2 / static_cast<double>(n);
      for (std::size_t i = 0; i < params.W.size(); ++i) {
        params.W[i] -= step * g.W[i] + decay * params.W[i];
      }
      for (std::size_t v = 0; v < num_intents; ++v) params.b[v] -= step * g.b[v];
    }
  }
  return params;
}

Standardizer Standardizer::Fit(std::span<const LabeledExample> examples,
                               std::size_t num_features) {
  Standardizer s;
  s.mean.assign(num_features, 0.0);
  s.scale.assign(num_features, 1.0);
  if (examples.empty()) return s;
  const double n = static_cast<double>(examples.size());
  for (const LabeledExample& e : examples) {
    for (std::size_t k = 0; k < num_features; ++k) s.mean[k] += e.x[k];
  }
  for (double& m : s.mean) m /= n;
  std::vector<double> var(num_features, 0.0);
  for (const LabeledExample& e : examples) {
    for (std::size_t k = 0; k < num_features; ++k) {
      const double dev = e.x[k] - s.mean[k];
      var[k] += dev * dev;
    }
  }
  for (std::size_t k = 0; k < num_features; ++k) {
    const double sd = std::sqrt(var[k] / n);
    s.scale[k] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

void Standardizer::Apply(std::span<const double> x, std::span<double> out) const {
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = (x[k] - mean[k]) / scale[k];
}

std::vector<double> Standardizer::Apply(std::span<const double> x) const {
  if (x.size() != mean.size()) throw InputError("standardizer: feature dimension mismatch");
  std::vector<double> out(x.size());
  Apply(x, out);
  return out;
}

IntentDistribution IntentModel::Predict(std::span<const double> raw_x) const {
  return predict_intents(params, standardizer.Apply(raw_x));
}

void IntentModel::PredictInto(std::span<const double> raw_x, std::span<double> scratch,
                              std::span<double> out) const {
  if (raw_x.size() != params.num_features) throw InputError("feature dimension mismatch");
  if (scratch.size() < raw_x.size() || out.size() < params.num_intents) {
    throw InputError("PredictInto: buffer too small");
  }
  standardizer.Apply(raw_x, scratch);
  intentdiv::PredictInto(params, scratch.first(raw_x.size()), out);
}

IntentModel TrainIntentModel(const Dataset& data, const TrainConfig& config) {
  config.Validate();
  data.Validate();
  if (data.examples.empty()) throw InputError("train: empty dataset");
  IntentModel model;
  model.feature_names = data.feature_names;
  model.intents = data.intents;
  model.standardizer = Standardizer::Fit(data.examples, data.feature_names.size());
  std::vector<LabeledExample> scaled;
  scaled.reserve(data.examples.size());
  for (const LabeledExample& e : data.examples) {
    scaled.push_back({model.standardizer.Apply(e.x), e.y});
  }
  model.params = train(scaled, data.intents.size(), config);
  return model;
}

std::vector<std::vector<double>> PredictAll(const IntentModel& model, const Dataset& data) {
  std::vector<std::vector<double>> out;
  out.reserve(data.examples.size());
  std::vector<double> scratch(data.feature_names.size());
  for (const LabeledExample& e : data.examples) {
    std::vector<double> p(model.intents.size());
    model.PredictInto(e.x, scratch, p);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace intentdiv
