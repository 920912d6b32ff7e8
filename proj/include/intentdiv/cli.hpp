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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "intentdiv/diversifier.hpp"
#include "intentdiv/intent_model.hpp"
#include "intentdiv/simulator.hpp"

namespace intentdiv::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,  // bad flags or configuration
  kExitData = 2,   // unreadable or malformed input data
};

// Subcommand names in help order.
const std::vector<std::string>& Subcommands();

// Every key a subcommand accepts, with its default value. The result is
// also the key order of resolved_config.json.
Json DefaultConfig(std::string_view command);

// Overwrites keys of `config` with those of `overrides`. Throws ConfigError
// naming `origin` for an unknown key or a value of the wrong JSON type.
void MergeConfig(Json& config, const Json& overrides, std::string_view origin);

// Reads a flat JSON object. Throws ConfigError.
Json LoadConfigFile(const std::filesystem::path& path);

// Parses "key=value": the value as JSON when it parses, otherwise as a string.
std::pair<std::string, Json> ParseAssignment(std::string_view text);

// Typed views of a resolved config. Throw ConfigError on invalid values.
SimConfig SimConfigFrom(const Json& config);
TrainConfig TrainConfigFrom(const Json& config);
DiversifierConfig DiversifierConfigFrom(const Json& config);

// Writes resolved_config.json into `dir`, creating it.
void WriteResolvedConfig(const Json& config, const std::filesystem::path& dir);

// Subcommand bodies; `config` is fully resolved.
void RunDiversify(const Json& config);
void RunSimulate(const Json& config);
void RunSweepGamma(const Json& config);
void RunTrainIntent(const Json& config);
void RunAnalyze(const Json& config);

// Entry point: parses argv, runs the subcommand and maps exceptions to
// exit codes, printing diagnostics to stderr.
int Main(int argc, char** argv);

}  // namespace intentdiv::cli
