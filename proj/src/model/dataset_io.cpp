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

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "intentdiv/errors.hpp"
#include "intentdiv/intent_model.hpp"

namespace intentdiv {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void Fail(const std::string& source, std::size_t line, const std::string& what) {
  throw DataError(source + ":" + std::to_string(line) + ": " + what);
}

std::vector<double> NumberArray(const Json& value, const char* key) {
  if (!value.contains(key) || !value[key].is_array()) {
    throw DataError(std::string("missing array \"") + key + "\"");
  }
  std::vector<double> out;
  for (const Json& x : value[key]) {
    if (!x.is_number()) throw DataError(std::string("\"") + key + "\" must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::string> StringArray(const Json& value, const char* key) {
  if (!value.contains(key) || !value[key].is_array()) {
    throw DataError(std::string("missing array \"") + key + "\"");
  }
  std::vector<std::string> out;
  for (const Json& x : value[key]) {
    if (!x.is_string()) throw DataError(std::string("\"") + key + "\" must hold strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

}  // namespace

Dataset ReadDataset(std::istream& in, const std::string& source) {
  Dataset data;
  std::vector<std::string> intent_ids;
  bool have_schema = false;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json record;
    try {
      record = Json::parse(text);
    } catch (const Json::parse_error& e) {
      Fail(source, line, std::string("malformed JSON: ") + e.what());
    }
    if (!record.is_object() || !record.contains("x") || !record["x"].is_object() ||
        !record.contains("y") || !record["y"].is_object()) {
      Fail(source, line, "expected {\"x\": {...}, \"y\": {...}}");
    }
    const Json& x = record["x"];
    const Json& y = record["y"];
    if (!have_schema) {
      for (const auto& [name, value] : x.items()) data.feature_names.push_back(name);
      for (const auto& [name, value] : y.items()) intent_ids.push_back(name);
      if (intent_ids.empty()) Fail(source, line, "label object is empty");
      try {
        data.intents = IntentSpace(intent_ids);
      } catch (const InputError& e) {
        Fail(source, line, e.what());
      }
      have_schema = true;
    }
    if (x.size() != data.feature_names.size()) Fail(source, line, "feature set differs");
    if (y.size() != intent_ids.size()) Fail(source, line, "label set differs");
    LabeledExample e;
    e.x.reserve(data.feature_names.size());
    for (const std::string& name : data.feature_names) {
      auto it = x.find(name);
      if (it == x.end()) Fail(source, line, "missing feature \"" + name + "\"");
      if (!it->is_number()) Fail(source, line, "feature \"" + name + "\" must be a number");
      e.x.push_back(it->get<double>());
      if (!std::isfinite(e.x.back())) Fail(source, line, "feature \"" + name + "\" not finite");
    }
    bool any = false;
    for (const std::string& name : intent_ids) {
      auto it = y.find(name);
      if (it == y.end()) Fail(source, line, "missing label \"" + name + "\"");
      if (!it->is_number()) Fail(source, line, "label \"" + name + "\" must be 0 or 1");
      const double value = it->get<double>();
      if (value != 0.0 && value != 1.0) Fail(source, line, "label \"" + name + "\" must be 0 or 1");
      any = any || value == 1.0;
      e.y.push_back(value);
    }
    if (!any) Fail(source, line, "example has no positive label");
    data.examples.push_back(std::move(e));
  }
  if (data.examples.empty()) Fail(source, line, "dataset is empty");
  return data;
}

void WriteDataset(std::ostream& out, const Dataset& data) {
  for (const LabeledExample& e : data.examples) {
    Json record;
    Json x = Json::object();
    for (std::size_t k = 0; k < data.feature_names.size(); ++k) x[data.feature_names[k]] = e.x[k];
    Json y = Json::object();
    for (std::size_t v = 0; v < data.intents.size(); ++v) {
      y[data.intents.id(static_cast<IntentIndex>(v))] = static_cast<int>(e.y[v]);
    }
    record["x"] = std::move(x);
    record["y"] = std::move(y);
    out << record.dump() << '\n';
  }
}

void SaveModel(std::ostream& out, const IntentModel& model) {
  Json doc;
  doc["features"] = model.feature_names;
  doc["intents"] = model.intents.ids();
  doc["feature_mean"] = model.standardizer.mean;
  doc["feature_scale"] = model.standardizer.scale;
  Json weights = Json::array();
  for (std::size_t v = 0; v < model.params.num_intents; ++v) {
    weights.push_back(std::vector<double>(
        model.params.W.begin() + static_cast<std::ptrdiff_t>(v * model.params.num_features),
        model.params.W.begin() +
            static_cast<std::ptrdiff_t>((v + 1) * model.params.num_features)));
  }
  doc["W"] = std::move(weights);
  doc["b"] = model.params.b;
  out << doc.dump(2) << '\n';
}

IntentModel LoadModel(std::istream& in, const std::string& source) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json doc;
  try {
    doc = Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw DataError(source + ": malformed JSON: " + e.what());
  }
  try {
    IntentModel model;
    model.feature_names = StringArray(doc, "features");
    model.intents = IntentSpace(StringArray(doc, "intents"));
    model.standardizer.mean = NumberArray(doc, "feature_mean");
    model.standardizer.scale = NumberArray(doc, "feature_scale");
    const std::size_t d = model.feature_names.size();
    const std::size_t n = model.intents.size();
    if (model.standardizer.mean.size() != d || model.standardizer.scale.size() != d) {
      throw DataError("standardization size differs from feature count");
    }
    model.params = IntentModelParams::Zeros(n, d);
    model.params.b = NumberArray(doc, "b");
    if (model.params.b.size() != n) throw DataError("bias size differs from intent count");
    if (!doc.contains("W") || !doc["W"].is_array() || doc["W"].size() != n) {
      throw DataError("\"W\" must have one row per intent");
    }
    for (std::size_t v = 0; v < n; ++v) {
      const Json& row = doc["W"][v];
      if (!row.is_array() || row.size() != d) throw DataError("\"W\" row has wrong length");
      for (std::size_t k = 0; k < d; ++k) model.params.w(v, k) = row[k].get<double>();
    }
    return model;
  } catch (const InputError& e) {
    throw DataError(source + ": " + e.what());
  } catch (const Json::exception& e) {
    throw DataError(source + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(source + ": " + e.what());
  }
}

}  // namespace intentdiv
