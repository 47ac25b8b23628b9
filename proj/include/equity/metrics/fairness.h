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

#ifndef EQUITY_METRICS_FAIRNESS_H_
#define EQUITY_METRICS_FAIRNESS_H_

#include <optional>
#include <string>
#include <vector>

#include "equity/core/category.h"
#include "equity/metrics/outcome.h"
#include "json.hpp"

namespace equity::metrics {

struct Rate {
  Category category = Category::kBase;
  double value = 0.0;
  std::size_t numerator = 0;
  std::size_t denominator = 0;
};

struct Gap {
  double gap = 0.0;
  double score = 1.0;  // 1 - gap
  std::vector<Rate> rates;
};

// Share of non-skipped QA outcomes that are wrong or failed. Throws
// UndefinedMetricError when every cell of `category` is skipped.
Rate ErrorRate(const OutcomeTable& table, Category category);

// Positive-outcome rate per category. QA: correct answers over non-skipped
// items. CTM: relevant (topic, trial) pairs found in the top 10 over all
// relevant pairs of non-skipped topics. Categories with an empty denominator
// are left out; fewer than two remaining categories is a ContractError.
Gap DpGap(const OutcomeTable& table);

// True-positive rate per category on the qualified set. QA: items Base
// answers correctly. CTM: relevant (topic, trial) pairs. Throws
// UndefinedMetricError if any compared category has no qualified item.
Gap EoGap(const OutcomeTable& table);

struct CategoryMetric {
  Category category = Category::kBase;
  std::optional<double> value;  // error rate (QA) or mean NDCG@10 (CTM)
  std::size_t denominator = 0;
  std::size_t skipped = 0;
};

struct FairnessReport {
  Task task = Task::kQa;
  std::vector<CategoryMetric> per_category;
  std::optional<Gap> dp;
  std::optional<Gap> eo;
  std::string dp_note;  // reason dp is absent
  std::string eo_note;

  // "error_rate" or "ndcg_at_10".
  std::string metric_name() const;
  nlohmann::ordered_json ToJson() const;
};

// Category metrics plus both gaps. A gap that cannot be computed is left
// empty with a note instead of throwing.
FairnessReport ComputeFairness(const OutcomeTable& table);

}  // namespace equity::metrics

#endif  // EQUITY_METRICS_FAIRNESS_H_
