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

#ifndef EQUITY_RANKER_RANKER_H_
#define EQUITY_RANKER_RANKER_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "equity/core/category.h"
#include "equity/corpus/types.h"
#include "equity/gateway/dispatcher.h"
#include "equity/gateway/prompt.h"
#include "equity/gateway/types.h"

namespace equity::ranker {

using gateway::EligibilityLabel;

// Per-label credit. Any "excluded" verdict zeroes the trial regardless of
// weights.
struct ScoreWeights {
  double included = 1.0;
  double not_excluded = 0.5;
  double not_included = 0.0;
};

struct TrialScore {
  std::string trial_id;
  double score = 0.0;
  std::vector<EligibilityLabel> verdicts;
  bool hard_excluded = false;
  std::optional<gateway::FailureKind> failure;
  bool transport_failed = false;
};

// Throws ContractError on empty verdicts.
TrialScore ScoreTrial(const std::vector<EligibilityLabel>& verdicts,
                      const ScoreWeights& weights = {});

struct Ranking {
  std::string topic_id;
  Category category = Category::kBase;
  std::vector<TrialScore> trials;  // best first
  // A trial could not be scored because its backend call failed.
  bool incomplete = false;

  std::vector<std::string> TrialIds() const;
};

// Sorts by score descending, then trial id ascending. Throws ContractError
// on duplicate trial ids.
Ranking SortRanking(std::string topic_id, Category category,
                    std::vector<TrialScore> trials);

std::string RankRequestId(std::string_view topic_id, Category category,
                          std::string_view trial_id);

// One request per candidate trial, in candidate order.
std::vector<gateway::ModelRequest> BuildRankRequests(
    std::string_view topic_id, Category category, std::string_view note,
    const std::vector<const corpus::TrialDoc*>& candidates,
    const gateway::PromptTemplate& prompt,
    const gateway::DecodeParams& decode = {});

// Scores the responses (aligned with `candidates`) and sorts them. An
// unparseable reply scores 0 and keeps its failure kind.
Ranking RankFromResponses(std::string topic_id, Category category,
                          const std::vector<const corpus::TrialDoc*>& candidates,
                          const std::vector<gateway::ModelResponse>& responses,
                          const ScoreWeights& weights = {});

Ranking RankTrials(std::string_view topic_id, Category category,
                   std::string_view note,
                   const std::vector<const corpus::TrialDoc*>& candidates,
                   gateway::Dispatcher& dispatcher,
                   const gateway::PromptTemplate& prompt,
                   const ScoreWeights& weights = {});

// TREC run-file lines: "topic Q0 trial rank score tag", rank from 1. The
// tag is `run_tag` + "_" + category name.
void WriteRunFile(std::ostream& out, const std::vector<Ranking>& rankings,
                  std::string_view run_tag);

}  // namespace equity::ranker

#endif  // EQUITY_RANKER_RANKER_H_
