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

#ifndef EQUITY_METRICS_OUTCOME_H_
#define EQUITY_METRICS_OUTCOME_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "equity/core/category.h"
#include "equity/core/task.h"
#include "equity/corpus/types.h"
#include "equity/gateway/types.h"
#include "json.hpp"

namespace equity::metrics {

using gateway::FailureKind;

struct QaOutcome {
  std::optional<char> answer;
  bool correct = false;
  std::optional<FailureKind> failure;

  bool operator==(const QaOutcome&) const = default;
};

struct CtmOutcome {
  std::vector<std::string> ranking;  // full ranked candidate list
  std::size_t relevant_found = 0;    // relevant trials in the top 10
  std::size_t relevant_total = 0;
  std::optional<double> ndcg;        // absent when the topic has no positives
  std::size_t failures = 0;          // trials with a failed reply
  bool incomplete = false;

  double recall() const {
    return relevant_total == 0 ? 0.0
                               : static_cast<double>(relevant_found) /
                                     static_cast<double>(relevant_total);
  }
  bool operator==(const CtmOutcome&) const = default;
};

struct Cell {
  bool skipped = false;
  std::string skip_reason;
  QaOutcome qa;
  CtmOutcome ctm;

  bool operator==(const Cell&) const = default;
};

// Builds a CTM outcome from a ranked list, scoring the top `cutoff` against
// `qrels`.
CtmOutcome MakeCtmOutcome(std::vector<std::string> ranking,
                          const corpus::Qrels& qrels, const std::string& topic,
                          std::size_t failures = 0, bool incomplete = false,
                          std::size_t cutoff = 10);

// The (item x category) grid every metric reads. Items keep insertion
// order; categories are reported in the fixed category order.
class OutcomeTable {
 public:
  explicit OutcomeTable(Task task) : task_(task) {}

  Task task() const { return task_; }

  void SetQa(const std::string& item, Category category, QaOutcome outcome);
  void SetCtm(const std::string& item, Category category, CtmOutcome outcome);
  void MarkSkipped(const std::string& item, Category category,
                   std::string reason);

  // nullptr when the cell was never set.
  const Cell* Find(const std::string& item, Category category) const;

  const std::vector<std::string>& items() const { return items_; }
  // Categories with at least one cell, in the fixed order.
  std::vector<Category> categories() const;
  std::size_t size() const { return cells_.size(); }

  // Throws ValidationError unless every item has a non-skipped Base cell and
  // every item has a cell (possibly skipped) for every category.
  void Validate() const;

  nlohmann::ordered_json ToJson() const;
  static OutcomeTable FromJson(const nlohmann::ordered_json& doc);

 private:
  Cell& Slot(const std::string& item, Category category);

  Task task_;
  std::vector<std::string> items_;
  std::map<std::string, std::size_t> item_index_;
  std::map<std::pair<std::size_t, Category>, Cell> cells_;
};

}  // namespace equity::metrics

#endif  // EQUITY_METRICS_OUTCOME_H_
