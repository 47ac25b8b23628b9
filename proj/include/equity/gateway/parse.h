// Copyright 2026 The Equity Audit Authors
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

#ifndef EQUITY_GATEWAY_PARSE_H_
#define EQUITY_GATEWAY_PARSE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "equity/core/task.h"
#include "equity/gateway/types.h"

namespace equity::gateway {

// The earliest "answer is X" / "answer: X" where X is an offered option
// label; failing that, the earliest "(X)" or line that starts with "X." /
// "X)" / "X:" / a lone "X". Falls back to the option whose full text the
// reply equals, then to the single option whose full text the reply
// contains. Letters mentioned in passing ("Both A and C") are not answers.
std::optional<char> ParseQaAnswer(std::string_view raw_text,
                                  const std::map<char, std::string>& options);

// Expects exactly one "criterion i: <label>" line for every i in
// 1..criteria_count. Labels are case-insensitive and may use spaces,
// underscores or hyphens ("NOT INCLUDED", "not_included").
std::optional<std::vector<EligibilityLabel>> ParseEligibility(
    std::string_view raw_text, std::size_t criteria_count);

std::optional<EligibilityLabel> ParseEligibilityLabel(std::string_view text);

class RefusalLexicon {
 public:
  RefusalLexicon(std::string version, std::vector<std::string> phrases);

  static RefusalLexicon Load(const std::filesystem::path& path);
  static const RefusalLexicon& Default();

  bool Matches(std::string_view text) const;
  const std::string& version() const { return version_; }
  const std::vector<std::string>& phrases() const { return phrases_; }

 private:
  std::string version_;
  std::vector<std::string> phrases_;  // lowercase, straight apostrophes
};

struct RepetitionRule {
  std::size_t min_length = 20;
  std::size_t min_count = 3;
};

// Lowercases and collapses whitespace runs to single spaces.
std::string NormalizeForRepetition(std::string_view text);

// True when some window of `rule.min_length` characters of the normalized
// text occurs at least `rule.min_count` times (overlapping occurrences
// count).
bool HasRepetition(std::string_view text, const RepetitionRule& rule = {});

// Drops "criterion i: label" lines, which repeat by construction in
// eligibility replies.
std::string StripCriterionLines(std::string_view text);

// rejection > missing_document > repetition; nullopt for a clean reply.
std::optional<FailureKind> ClassifyFailure(std::string_view raw_text,
                                           bool parsed_ok, Task task,
                                           const RefusalLexicon& refusals,
                                           const RepetitionRule& rule = {});

// Parses `response.raw_text` for the request's task and sets `parsed` and
// `failure`.
void ParseAndClassify(const RequestContext& context, ModelResponse& response,
                      const RefusalLexicon& refusals,
                      const RepetitionRule& rule = {});

}  // namespace equity::gateway

#endif  // EQUITY_GATEWAY_PARSE_H_
