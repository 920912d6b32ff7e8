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

#include <iosfwd>
#include <string>
#include <vector>

#include "intentdiv/candidate.hpp"
#include "intentdiv/distribution.hpp"
#include "intentdiv/diversifier.hpp"
#include "intentdiv/intent_space.hpp"

namespace intentdiv {

// Contents of a diversification input file: one prior record followed by
// candidate records, one JSON object per line.
//
//   {"intents": ["A", "B"], "probs": [0.6, 0.4]}
//   {"item_id": "c1", "quality": 1.0, "base_value": 0.8, "aligned": ["A"], "novelty": false}
struct SlateInput {
  IntentSpace space;
  IntentDistribution prior;
  std::vector<Candidate> candidates;
};

// Parses the line-delimited format. Blank lines are skipped. Throws
// DataError with "<source>:<line>: " prefixed diagnostics.
SlateInput ReadSlateInput(std::istream& in, const std::string& source = "<input>");

// Writes the prior record, then one record per placed item carrying its
// candidate fields plus "position", "step_score", "marginal_satisfaction"
// and "posterior". The posterior is {"probs": [...]} for dense snapshots or
// {"scale": s, "updates": {"intent": value, ...}} for sparse deltas.
void WriteSlate(std::ostream& out, const SlateInput& input, const RankedSlate& slate);

}  // namespace intentdiv
