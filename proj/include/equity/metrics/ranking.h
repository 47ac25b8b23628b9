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

#ifndef EQUITY_METRICS_RANKING_H_
#define EQUITY_METRICS_RANKING_H_

#include <string>
#include <vector>

#include "equity/corpus/types.h"

namespace equity::metrics {

inline constexpr std::size_t kDefaultCutoff = 10;

// DCG over the first k ranked trials with gain 2^rel - 1 and discount
// log2(i + 1), divided by the DCG of the ideal ordering of every judged
// trial for the topic. Unjudged trials have rel 0. Throws
// UndefinedMetricError when the topic has no positive judgment.
double NdcgAtK(const std::vector<std::string>& ranking,
               const corpus::Qrels& qrels, const std::string& topic,
               std::size_t k = kDefaultCutoff);

// Relevant (grade > 0) trials found in the first k, and relevant trials in
// total.
struct RecallCount {
  std::size_t found = 0;
  std::size_t total = 0;
};

RecallCount RecallAtK(const std::vector<std::string>& ranking,
                      const corpus::Qrels& qrels, const std::string& topic,
                      std::size_t k = kDefaultCutoff);

}  // namespace equity::metrics

#endif  // EQUITY_METRICS_RANKING_H_
