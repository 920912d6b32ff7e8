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

#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "intentdiv/errors.hpp"
#include "intentdiv/slate_io.hpp"

namespace intentdiv {
namespace {

const char* kWorked =
    "{\"intents\": [\"A\", \"B\"], \"probs\": [0.6, 0.4]}\n"
    "\n"
    "{\"item_id\": \"c1\", \"quality\": 1.0, \"base_value\": 0.8, \"aligned\": [\"A\"]}\n"
    "{\"item_id\": 2, \"quality\": 1.0, \"base_value\": 0.8, \"aligned\": [\"B\", \"A\"], "
    "\"novelty\": true}\n";

std::string ErrorOf(const std::string& text) {
  std::istringstream in(text);
  try {
    ReadSlateInput(in, "f.jsonl");
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(SlateIo, ReadsPriorAndCandidates) {
  std::istringstream in(kWorked);
  const SlateInput input = ReadSlateInput(in, "f.jsonl");
  EXPECT_EQ(input.space.ids(), (std::vector<std::string>{"A", "B"}));
  EXPECT_DOUBLE_EQ(input.prior[0], 0.6);
  ASSERT_EQ(input.candidates.size(), 2u);
  EXPECT_EQ(input.candidates[1].item_id, "2");
  EXPECT_EQ(input.candidates[1].aligned, (std::vector<IntentIndex>{0, 1}));
  EXPECT_TRUE(input.candidates[1].novelty);
}

TEST(SlateIo, DiagnosticsCarryLineNumbers) {
  EXPECT_EQ(ErrorOf("").rfind("f.jsonl:0: missing prior", 0), 0u);
  EXPECT_EQ(ErrorOf("{\"intents\": [\"A\"], \"probs\": [1.0]}\n").rfind("f.jsonl:1: no candidate",
                                                                         0),
            0u);
  const std::string bad_intent =
      "{\"intents\": [\"A\"], \"probs\": [1.0]}\n"
      "{\"item_id\": \"x\", \"quality\": 1, \"base_value\": 0.5, \"aligned\": [\"Z\"]}\n";
  EXPECT_EQ(ErrorOf(bad_intent).rfind("f.jsonl:2: unknown intent", 0), 0u);
  const std::string dup =
      "{\"intents\": [\"A\"], \"probs\": [1.0]}\n"
      "{\"item_id\": \"x\", \"quality\": 1, \"base_value\": 0.5, \"aligned\": [\"A\"]}\n"
      "{\"item_id\": \"x\", \"quality\": 1, \"base_value\": 0.5, \"aligned\": [\"A\"]}\n";
  EXPECT_EQ(ErrorOf(dup).rfind("f.jsonl:3: duplicate item_id", 0), 0u);
  EXPECT_EQ(ErrorOf("{\"intents\": [\"A\"], \"probs\": [1.0]}\nnot json\n").rfind("f.jsonl:2:", 0),
            0u);
  EXPECT_EQ(ErrorOf("{\"intents\": [\"A\", \"B\"], \"probs\": [0.9, 0.3]}\n").rfind("f.jsonl:1:", 0),
            0u);
  const std::string bad_value =
      "{\"intents\": [\"A\"], \"probs\": [1.0]}\n"
      "{\"item_id\": \"x\", \"quality\": 1, \"base_value\": 1.5, \"aligned\": [\"A\"]}\n";
  EXPECT_EQ(ErrorOf(bad_value).rfind("f.jsonl:2:", 0), 0u);
}

TEST(SlateIo, WritesTraceRecords) {
  std::istringstream in(kWorked);
  const SlateInput input = ReadSlateInput(in, "f.jsonl");
  DiversifierConfig cfg;
  const RankedSlate slate = diversify(input.prior, input.candidates, cfg);
  std::ostringstream out;
  WriteSlate(out, input, slate);
  std::istringstream lines(out.str());
  std::string line;
  std::vector<nlohmann::json> records;
  while (std::getline(lines, line)) records.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[0]["probs"][0], 0.6);
  EXPECT_EQ(records[1]["item_id"], "2");
  EXPECT_EQ(records[1]["position"], 1);
  EXPECT_EQ(records[1]["aligned"], (nlohmann::json{"A", "B"}));
  EXPECT_EQ(records[2]["position"], 2);
  EXPECT_TRUE(records[2]["posterior"].contains("probs"));
}

}  // namespace
}  // namespace intentdiv
