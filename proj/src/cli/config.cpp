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

#include <fstream>
#include <sstream>

#include "intentdiv/cli.hpp"
#include "intentdiv/errors.hpp"

namespace intentdiv::cli {

namespace {

void AddSimKeys(Json& c) {
  const SimConfig d;
  c["n_users"] = d.n_users;
  c["n_days"] = d.n_days;
  c["sessions_per_day"] = d.sessions_per_day;
  c["page_size"] = d.page_size;
  c["pool_size"] = d.pool_size;
  c["intent_mode"] = std::string(ToString(d.intent_mode));
  c["catalog_size"] = d.catalog_size;
  c["n_creators"] = d.n_creators;
  c["n_clusters"] = d.n_clusters;
  c["creator_popularity_exponent"] = d.creator_popularity_exponent;
  c["initial_seen_creators"] = d.initial_seen_creators;
  c["quality_min"] = d.quality_min;
  c["quality_max"] = d.quality_max;
  c["quality_noise"] = d.quality_noise;
  c["off_intent_affinity"] = d.off_intent_affinity;
  c["patience_min"] = d.patience_min;
  c["patience_max"] = d.patience_max;
  c["continuation_min"] = d.continuation_min;
  c["continuation_max"] = d.continuation_max;
  c["intent_logit_mean"] = d.intent_logit_mean;
  c["intent_logit_sd"] = d.intent_logit_sd;
  c["hourly_amplitude"] = d.hourly_amplitude;
  c["hourly_phase_sd"] = d.hourly_phase_sd;
  c["progress_weight"] = d.progress_weight;
  c["initial_return_min"] = d.initial_return_min;
  c["initial_return_max"] = d.initial_return_max;
  c["return_smoothing"] = d.return_smoothing;
  c["learning_rate"] = d.train.learning_rate;
  c["epochs"] = d.train.epochs;
  c["batch_size"] = d.train.batch_size;
  c["l2"] = d.train.l2;
  c["train_window_days"] = d.train_window_days;
  c["train_source"] = std::string(ToString(d.train_source));
  c["posterior_mode"] = std::string(ToString(d.policy.posterior_mode));
  c["tie_break"] = std::string(ToString(d.policy.tie_break));
}

void AddTrainKeys(Json& c) {
  const TrainConfig d;
  c["learning_rate"] = d.learning_rate;
  c["epochs"] = d.epochs;
  c["batch_size"] = d.batch_size;
  c["l2"] = d.l2;
  c["log_floor"] = d.log_floor;
}

// JSON kinds that a key's default admits.
bool SameKind(const Json& def, const Json& value) {
  if (def.is_number_unsigned()) return value.is_number_unsigned();
  if (def.is_number_integer()) return value.is_number_integer();
  if (def.is_number_float()) return value.is_number();
  if (def.is_array()) {
    if (!value.is_array()) return false;
    for (const Json& v : value) {
      if (!v.is_number()) return false;
    }
    return true;
  }
  return def.type() == value.type();
}

std::string KindName(const Json& def) {
  if (def.is_number_unsigned()) return "a non-negative integer";
  if (def.is_number_integer()) return "an integer";
  if (def.is_number()) return "a number";
  if (def.is_string()) return "a string";
  if (def.is_boolean()) return "a boolean";
  if (def.is_array()) return "an array of numbers";
  return "a value";
}

const Json& At(const Json& config, const char* key) {
  auto it = config.find(key);
  if (it == config.end()) throw ConfigError(std::string("missing config key '") + key + "'");
  return *it;
}

std::size_t Size(const Json& config, const char* key) {
  return At(config, key).get<std::size_t>();
}

double Number(const Json& config, const char* key) { return At(config, key).get<double>(); }

std::string Text(const Json& config, const char* key) {
  return At(config, key).get<std::string>();
}

// Parsers throw InputError; configuration problems exit as usage errors,
// so rethrow with the key name attached.
template <typename F>
auto Parsed(const Json& config, const char* key, F parse) {
  try {
    return parse(Text(config, key));
  } catch (const InputError& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

}  // namespace

const std::vector<std::string>& Subcommands() {
  static const std::vector<std::string> names = {"diversify", "simulate", "sweep-gamma",
                                                 "train-intent", "analyze"};
  return names;
}

Json DefaultConfig(std::string_view command) {
  Json c = Json::object();
  c["seed"] = SimConfig{}.seed;
  c["out"] = "out";
  if (command == "diversify") {
    const DiversifierConfig d;
    c["input"] = "";
    c["gamma"] = d.gamma;
    c["posterior_mode"] = std::string(ToString(d.posterior_mode));
    c["tie_break"] = std::string(ToString(d.tie_break));
    c["epsilon"] = d.epsilon;
    c["slate_size"] = d.slate_size;
  } else if (command == "simulate") {
    c["arm"] = "both";
    c["gamma"] = SimConfig{}.policy.gamma;
    AddSimKeys(c);
    c["resamples"] = 1000u;
    c["write_logs"] = true;
    c["write_pages"] = true;
    c["write_examples"] = true;
  } else if (command == "sweep-gamma") {
    c["gammas"] = Json::array({0.005, 0.01, 0.02, 0.04});
    AddSimKeys(c);
    c["resamples"] = 1000u;
    c["workers"] = 0u;
  } else if (command == "train-intent") {
    c["dataset"] = "";
    AddTrainKeys(c);
    c["holdout"] = 0.3;
  } else if (command == "analyze") {
    c["control_dir"] = "";
    c["treatment_dir"] = "";
    c["model"] = "";
    AddTrainKeys(c);
    c["buckets"] = 10u;
    c["resamples"] = 1000u;
  } else {
    throw ConfigError("unknown subcommand '" + std::string(command) + "'");
  }
  return c;
}

void MergeConfig(Json& config, const Json& overrides, std::string_view origin) {
  if (!overrides.is_object()) throw ConfigError(std::string(origin) + ": expected a JSON object");
  for (const auto& [key, value] : overrides.items()) {
    auto it = config.find(key);
    if (it == config.end()) {
      throw ConfigError(std::string(origin) + ": unknown key '" + key + "'");
    }
    if (!SameKind(*it, value)) {
      throw ConfigError(std::string(origin) + ": '" + key + "' must be " + KindName(*it));
    }
    // Keep float-typed keys floating so the resolved copy is stable.
    *it = it->is_number_float() ? Json(value.get<double>()) : value;
  }
}

Json LoadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    Json doc = Json::parse(in);
    if (!doc.is_object()) throw ConfigError(path.string() + ": expected a JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (value.is_object()) throw ConfigError(path.string() + ": '" + key + "' must be flat");
    }
    return doc;
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::pair<std::string, Json> ParseAssignment(std::string_view text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("expected key=value, got '" + std::string(text) + "'");
  }
  const std::string key(text.substr(0, eq));
  const std::string raw(text.substr(eq + 1));
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  return {key, value};
}

SimConfig SimConfigFrom(const Json& c) {
  SimConfig s;
  try {
    s.n_users = Size(c, "n_users");
    s.n_days = Size(c, "n_days");
    s.sessions_per_day = Size(c, "sessions_per_day");
    s.page_size = Size(c, "page_size");
    s.pool_size = Size(c, "pool_size");
    s.catalog_size = Size(c, "catalog_size");
    s.n_creators = Size(c, "n_creators");
    s.n_clusters = Size(c, "n_clusters");
    s.creator_popularity_exponent = Number(c, "creator_popularity_exponent");
    s.initial_seen_creators = Size(c, "initial_seen_creators");
    s.quality_min = Number(c, "quality_min");
    s.quality_max = Number(c, "quality_max");
    s.quality_noise = Number(c, "quality_noise");
    s.off_intent_affinity = Number(c, "off_intent_affinity");
    s.patience_min = Size(c, "patience_min");
    s.patience_max = Size(c, "patience_max");
    s.continuation_min = Number(c, "continuation_min");
    s.continuation_max = Number(c, "continuation_max");
    s.intent_logit_mean = Number(c, "intent_logit_mean");
    s.intent_logit_sd = Number(c, "intent_logit_sd");
    s.hourly_amplitude = Number(c, "hourly_amplitude");
    s.hourly_phase_sd = Number(c, "hourly_phase_sd");
    s.progress_weight = Number(c, "progress_weight");
    s.initial_return_min = Number(c, "initial_return_min");
    s.initial_return_max = Number(c, "initial_return_max");
    s.return_smoothing = Number(c, "return_smoothing");
    s.train.learning_rate = Number(c, "learning_rate");
    s.train.epochs = At(c, "epochs").get<int>();
    s.train.batch_size = Size(c, "batch_size");
    s.train.l2 = Number(c, "l2");
    s.train_window_days = Size(c, "train_window_days");
    s.seed = At(c, "seed").get<std::uint64_t>();
  } catch (const Json::exception& e) {
    throw ConfigError(e.what());
  }
  s.intent_mode = Parsed(c, "intent_mode", ParseIntentMode);
  s.train_source = Parsed(c, "train_source", ParseTrainSource);
  s.policy.posterior_mode = Parsed(c, "posterior_mode", ParsePosteriorMode);
  s.policy.tie_break = Parsed(c, "tie_break", ParseTieBreak);
  if (c.contains("gamma")) s.policy.gamma = Number(c, "gamma");
  s.Validate();
  try {
    s.train.Validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  return s;
}

TrainConfig TrainConfigFrom(const Json& c) {
  TrainConfig t;
  try {
    t.learning_rate = Number(c, "learning_rate");
    t.epochs = At(c, "epochs").get<int>();
    t.batch_size = Size(c, "batch_size");
    t.l2 = Number(c, "l2");
    t.log_floor = Number(c, "log_floor");
    t.seed = At(c, "seed").get<std::uint64_t>();
    t.Validate();
  } catch (const Json::exception& e) {
    throw ConfigError(e.what());
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  return t;
}

DiversifierConfig DiversifierConfigFrom(const Json& c) {
  DiversifierConfig d;
  d.gamma = Number(c, "gamma");
  d.epsilon = Number(c, "epsilon");
  d.slate_size = Size(c, "slate_size");
  d.posterior_mode = Parsed(c, "posterior_mode", ParsePosteriorMode);
  d.tie_break = Parsed(c, "tie_break", ParseTieBreak);
  try {
    d.Validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  return d;
}

void WriteResolvedConfig(const Json& config, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "resolved_config.json");
  out << config.dump(2) << '\n';
  if (!out) throw DataError("cannot write " + (dir / "resolved_config.json").string());
}

}  // namespace intentdiv::cli
