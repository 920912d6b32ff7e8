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

#include "intentdiv/slate_io.hpp"

#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "intentdiv/errors.hpp"

namespace intentdiv {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void Fail(const std::string& source, std::size_t line, const std::string& what) {
  throw DataError(source + ":" + std::to_string(line) + ": " + what);
}

std::string IntentIdFrom(const Json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  throw DataError("intent ids must be strings or integers");
}

double NumberField(const Json& record, const char* key) {
  auto it = record.find(key);
  if (it == record.end()) throw DataError(std::string("missing field \"") + key + "\"");
  if (!it->is_number()) throw DataError(std::string("field \"") + key + "\" must be a number");
  return it->get<double>();
}

IntentDistribution ParsePrior(const Json& record, IntentSpace& space) {
  if (!record.contains("intents") || !record["intents"].is_array()) {
    throw DataError("prior record needs an \"intents\" array");
  }
  if (!record.contains("probs") || !record["probs"].is_array()) {
    throw DataError("prior record needs a \"probs\" array");
  }
  std::vector<std::string> ids;
  for (const Json& id : record["intents"]) ids.push_back(IntentIdFrom(id));
  std::vector<double> probs;
  for (const Json& p : record["probs"]) {
    if (!p.is_number()) throw DataError("\"probs\" entries must be numbers");
    probs.push_back(p.get<double>());
  }
  if (ids.size() != probs.size()) {
    throw DataError("\"intents\" and \"probs\" differ in length");
  }
  space = IntentSpace(std::move(ids));
  return IntentDistribution(std::move(probs), Normalization::kNormalized);
}

Candidate ParseCandidate(const Json& record, const IntentSpace& space) {
  Candidate c;
  auto id = record.find("item_id");
  if (id == record.end()) throw DataError("missing field \"item_id\"");
  if (id->is_string()) {
    c.item_id = id->get<std::string>();
  } else if (id->is_number_integer()) {
    c.item_id = std::to_string(id->get<long long>());
  } else {
    throw DataError("\"item_id\" must be a string or integer");
  }
  c.quality = NumberField(record, "quality");
  c.base_value = NumberField(record, "base_value");
  auto aligned = record.find("aligned");
  if (aligned == record.end() || !aligned->is_array()) {
    throw DataError("candidate needs an \"aligned\" array");
  }
  for (const Json& v : *aligned) {
    const std::string name = IntentIdFrom(v);
    auto index = space.find(name);
    if (!index) throw DataError("unknown intent \"" + name + "\"");
    c.aligned.push_back(*index);
  }
  if (auto novelty = record.find("novelty"); novelty != record.end()) {
    if (!novelty->is_boolean()) throw DataError("\"novelty\" must be a boolean");
    c.novelty = novelty->get<bool>();
  }
  NormalizeAlignment(c);
  Validate(c, space.size());
  return c;
}

Json CandidateRecord(const Candidate& c, const IntentSpace& space) {
  Json record;
  record["item_id"] = c.item_id;
  record["quality"] = c.quality;
  record["base_value"] = c.base_value;
  Json aligned = Json::array();
  for (IntentIndex v : c.aligned) aligned.push_back(space.id(v));
  record["aligned"] = std::move(aligned);
  record["novelty"] = c.novelty;
  return record;
}

}  // namespace

SlateInput ReadSlateInput(std::istream& in, const std::string& source) {
  SlateInput input;
  bool have_prior = false;
  std::unordered_set<std::string> seen;
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
    if (!record.is_object()) Fail(source, line, "expected a JSON object");
    try {
      if (!have_prior) {
        input.prior = ParsePrior(record, input.space);
        have_prior = true;
        continue;
      }
      if (record.contains("intents")) Fail(source, line, "duplicate prior record");
      Candidate c = ParseCandidate(record, input.space);
      if (!seen.insert(c.item_id).second) {
        Fail(source, line, "duplicate item_id \"" + c.item_id + "\"");
      }
      input.candidates.push_back(std::move(c));
    } catch (const DataError& e) {
      const std::string what = e.what();
      if (what.rfind(source + ":", 0) == 0) throw;
      Fail(source, line, what);
    } catch (const InputError& e) {
      Fail(source, line, e.what());
    } catch (const Json::exception& e) {
      Fail(source, line, e.what());
    }
  }
  if (!have_prior) Fail(source, line, "missing prior record");
  if (input.candidates.empty()) Fail(source, line, "no candidate records");
  return input;
}

void WriteSlate(std::ostream& out, const SlateInput& input, const RankedSlate& slate) {
  Json prior;
  prior["intents"] = input.space.ids();
  prior["probs"] = std::vector<double>(input.prior.probs().begin(), input.prior.probs().end());
  out << prior.dump() << '\n';
  for (std::size_t position = 0; position < slate.trace.size(); ++position) {
    const TraceStep& step = slate.trace[position];
    Json record = CandidateRecord(input.candidates[step.candidate], input.space);
    record["position"] = position + 1;
    record["step_score"] = step.step_score;
    record["marginal_satisfaction"] = step.marginal_satisfaction;
    Json posterior;
    if (const auto* dense = std::get_if<std::vector<double>>(&step.posterior)) {
      posterior["probs"] = *dense;
    } else {
      const auto& delta = std::get<BeliefDelta>(step.posterior);
      posterior["scale"] = delta.scale;
      Json updates = Json::object();
      for (const auto& [v, value] : delta.entries) updates[input.space.id(v)] = value;
      posterior["updates"] = std::move(updates);
    }
    record["posterior"] = std::move(posterior);
    out << record.dump() << '\n';
  }
}

}  // namespace intentdiv
