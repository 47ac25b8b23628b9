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

#include "equity/ranker/ranker.h"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>

#include "equity/core/error.h"

namespace equity::ranker {

TrialScore ScoreTrial(const std::vector<EligibilityLabel>& verdicts,
                      const ScoreWeights& weights) {
  if (verdicts.empty()) throw ContractError("cannot score an empty verdict list");
  TrialScore result;
  result.verdicts = verdicts;
  double credit = 0.0;
  for (EligibilityLabel label : verdicts) {
    switch (label) {
      case EligibilityLabel::kExcluded:
        result.hard_excluded = true;
        break;
      case EligibilityLabel::kIncluded:
        credit += weights.included;
        break;
      case EligibilityLabel::kNotExcluded:
        credit += weights.not_excluded;
        break;
      case EligibilityLabel::kNotIncluded:
        credit += weights.not_included;
        break;
    }
  }
  result.score = result.hard_excluded
                     ? 0.0
                     : credit / static_cast<double>(verdicts.size());
  return result;
}

std::vector<std::string> Ranking::TrialIds() const {
  std::vector<std::string> ids;
  ids.reserve(trials.size());
  for (const TrialScore& trial : trials) ids.push_back(trial.trial_id);
  return ids;
}

Ranking SortRanking(std::string topic_id, Category category,
                    std::vector<TrialScore> trials) {
  std::set<std::string> seen;
  for (const TrialScore& trial : trials) {
    if (!seen.insert(trial.trial_id).second) {
      throw ContractError("trial " + trial.trial_id + " ranked twice for " +
                          topic_id);
    }
  }
  std::sort(trials.begin(), trials.end(),
            [](const TrialScore& a, const TrialScore& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.trial_id < b.trial_id;
            });
  Ranking ranking;
  ranking.topic_id = std::move(topic_id);
  ranking.category = category;
  ranking.incomplete =
      std::any_of(trials.begin(), trials.end(),
                  [](const TrialScore& t) { return t.transport_failed; });
  ranking.trials = std::move(trials);
  return ranking;
}

std::string RankRequestId(std::string_view topic_id, Category category,
                          std::string_view trial_id) {
  return "ctm/" + std::string(topic_id) + "/" + std::string(CategoryName(category)) +
         "/" + std::string(trial_id);
}

std::vector<gateway::ModelRequest> BuildRankRequests(
    std::string_view topic_id, Category category, std::string_view note,
    const std::vector<const corpus::TrialDoc*>& candidates,
    const gateway::PromptTemplate& prompt, const gateway::DecodeParams& decode) {
  std::vector<gateway::ModelRequest> requests;
  requests.reserve(candidates.size());
  for (const corpus::TrialDoc* trial : candidates) {
    gateway::ModelRequest request;
    request.request_id = RankRequestId(topic_id, category, trial->id);
    request.messages = {{"user", gateway::RenderCtmPrompt(prompt, note, *trial)}};
    request.decode = decode;
    request.context.task = Task::kCtm;
    request.context.item_id = std::string(topic_id);
    request.context.trial_id = trial->id;
    request.context.category = category;
    request.context.criteria_count = trial->CriteriaCount();
    requests.push_back(std::move(request));
  }
  return requests;
}

Ranking RankFromResponses(std::string topic_id, Category category,
                          const std::vector<const corpus::TrialDoc*>& candidates,
                          const std::vector<gateway::ModelResponse>& responses,
                          const ScoreWeights& weights) {
  if (candidates.size() != responses.size()) {
    throw ContractError("RankFromResponses: " + std::to_string(candidates.size()) +
                        " candidates but " + std::to_string(responses.size()) +
                        " responses");
  }
  std::vector<TrialScore> scores;
  scores.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const gateway::ModelResponse& response = responses[i];
    const auto* verdicts =
        std::get_if<std::vector<EligibilityLabel>>(&response.parsed);
    TrialScore score;
    if (verdicts != nullptr && !verdicts->empty()) {
      score = ScoreTrial(*verdicts, weights);
    }
    score.trial_id = candidates[i]->id;
    score.failure = response.failure;
    score.transport_failed = response.transport_error.has_value();
    scores.push_back(std::move(score));
  }
  return SortRanking(std::move(topic_id), category, std::move(scores));
}

Ranking RankTrials(std::string_view topic_id, Category category,
                   std::string_view note,
                   const std::vector<const corpus::TrialDoc*>& candidates,
                   gateway::Dispatcher& dispatcher,
                   const gateway::PromptTemplate& prompt,
                   const ScoreWeights& weights) {
  if (candidates.empty()) throw ContractError("no candidate trials to rank");
  const std::vector<gateway::ModelRequest> requests =
      BuildRankRequests(topic_id, category, note, candidates, prompt);
  return RankFromResponses(std::string(topic_id), category, candidates,
                           dispatcher.Run(requests), weights);
}

void WriteRunFile(std::ostream& out, const std::vector<Ranking>& rankings,
                  std::string_view run_tag) {
  for (const Ranking& ranking : rankings) {
    const std::string tag =
        std::string(run_tag) + "_" + std::string(CategoryName(ranking.category));
    for (std::size_t i = 0; i < ranking.trials.size(); ++i) {
      char score[32];
      std::snprintf(score, sizeof(score), "%.6f", ranking.trials[i].score);
      out << ranking.topic_id << " Q0 " << ranking.trials[i].trial_id << ' '
          << (i + 1) << ' ' << score << ' ' << tag << '\n';
    }
  }
}

}  // namespace equity::ranker
