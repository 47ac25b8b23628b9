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

#include "equity/metrics/outcome.h"

#include <set>

#include "equity/core/error.h"
#include "equity/metrics/ranking.h"

namespace equity::metrics {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json FailureJson(const std::optional<FailureKind>& failure) {
  return failure ? ordered_json(std::string(gateway::FailureKindName(*failure)))
                 : ordered_json(nullptr);
}

std::optional<FailureKind> FailureFromJson(const ordered_json& value) {
  if (value.is_null()) return std::nullopt;
  std::optional<FailureKind> kind =
      gateway::ParseFailureKind(value.get<std::string>());
  if (!kind) throw ParseError("unknown failure kind " + value.dump());
  return kind;
}

}  // namespace

CtmOutcome MakeCtmOutcome(std::vector<std::string> ranking,
                          const corpus::Qrels& qrels, const std::string& topic,
                          std::size_t failures, bool incomplete,
                          std::size_t cutoff) {
  CtmOutcome outcome;
  const RecallCount recall = RecallAtK(ranking, qrels, topic, cutoff);
  outcome.relevant_found = recall.found;
  outcome.relevant_total = recall.total;
  if (recall.total > 0) outcome.ndcg = NdcgAtK(ranking, qrels, topic, cutoff);
  outcome.ranking = std::move(ranking);
  outcome.failures = failures;
  outcome.incomplete = incomplete;
  return outcome;
}

Cell& OutcomeTable::Slot(const std::string& item, Category category) {
  auto [it, inserted] = item_index_.emplace(item, items_.size());
  if (inserted) items_.push_back(item);
  return cells_[{it->second, category}];
}

void OutcomeTable::SetQa(const std::string& item, Category category,
                         QaOutcome outcome) {
  if (task_ != Task::kQa) throw ContractError("SetQa on a CTM table");
  Cell& cell = Slot(item, category);
  cell = Cell{};
  cell.qa = std::move(outcome);
}

void OutcomeTable::SetCtm(const std::string& item, Category category,
                          CtmOutcome outcome) {
  if (task_ != Task::kCtm) throw ContractError("SetCtm on a QA table");
  Cell& cell = Slot(item, category);
  cell = Cell{};
  cell.ctm = std::move(outcome);
}

void OutcomeTable::MarkSkipped(const std::string& item, Category category,
                               std::string reason) {
  Cell& cell = Slot(item, category);
  cell = Cell{};
  cell.skipped = true;
  cell.skip_reason = std::move(reason);
}

const Cell* OutcomeTable::Find(const std::string& item,
                               Category category) const {
  auto index = item_index_.find(item);
  if (index == item_index_.end()) return nullptr;
  auto it = cells_.find({index->second, category});
  return it == cells_.end() ? nullptr : &it->second;
}

std::vector<Category> OutcomeTable::categories() const {
  std::set<Category> present;
  for (const auto& [key, cell] : cells_) present.insert(key.second);
  return {present.begin(), present.end()};
}

void OutcomeTable::Validate() const {
  const std::vector<Category> cats = categories();
  for (const std::string& item : items_) {
    const Cell* base = Find(item, Category::kBase);
    if (base == nullptr || base->skipped) {
      throw ValidationError("item " + item + " has no Base outcome");
    }
    for (Category category : cats) {
      if (Find(item, category) == nullptr) {
        throw ValidationError("item " + item + " has no cell for " +
                              std::string(CategoryName(category)) +
                              " (mark it skipped instead)");
      }
    }
  }
}

ordered_json OutcomeTable::ToJson() const {
  ordered_json out;
  out["task"] = std::string(TaskName(task_));
  ordered_json cats = ordered_json::array();
  const std::vector<Category> present = categories();
  for (Category category : present) {
    cats.push_back(std::string(CategoryName(category)));
  }
  out["categories"] = std::move(cats);
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < items_.size(); ++i) {
    ordered_json row;
    row["item"] = items_[i];
    ordered_json cells = ordered_json::object();
    for (Category category : present) {
      auto it = cells_.find({i, category});
      if (it == cells_.end()) continue;
      const Cell& cell = it->second;
      ordered_json node;
      if (cell.skipped) {
        node["skipped"] = cell.skip_reason;
      } else if (task_ == Task::kQa) {
        node["answer"] = cell.qa.answer
                             ? ordered_json(std::string(1, *cell.qa.answer))
                             : ordered_json(nullptr);
        node["correct"] = cell.qa.correct;
        node["failure"] = FailureJson(cell.qa.failure);
      } else {
        node["ranking"] = cell.ctm.ranking;
        node["relevant_found"] = cell.ctm.relevant_found;
        node["relevant_total"] = cell.ctm.relevant_total;
        node["recall_at_10"] = cell.ctm.recall();
        node["ndcg_at_10"] = cell.ctm.ndcg ? ordered_json(*cell.ctm.ndcg)
                                           : ordered_json(nullptr);
        node["failures"] = cell.ctm.failures;
        node["incomplete"] = cell.ctm.incomplete;
      }
      cells[std::string(CategoryName(category))] = std::move(node);
    }
    row["cells"] = std::move(cells);
    rows.push_back(std::move(row));
  }
  out["rows"] = std::move(rows);
  return out;
}

OutcomeTable OutcomeTable::FromJson(const ordered_json& doc) {
  OutcomeTable table(ParseTask(doc.at("task").get<std::string>()));
  for (const ordered_json& row : doc.at("rows")) {
    const std::string item = row.at("item").get<std::string>();
    for (const auto& [name, node] : row.at("cells").items()) {
      const std::optional<Category> category = ParseCategory(name);
      if (!category) throw ParseError("unknown category " + name);
      if (node.contains("skipped")) {
        table.MarkSkipped(item, *category, node.at("skipped").get<std::string>());
      } else if (table.task() == Task::kQa) {
        QaOutcome outcome;
        if (!node.at("answer").is_null()) {
          outcome.answer = node.at("answer").get<std::string>().at(0);
        }
        outcome.correct = node.at("correct").get<bool>();
        outcome.failure = FailureFromJson(node.at("failure"));
        table.SetQa(item, *category, std::move(outcome));
      } else {
        CtmOutcome outcome;
        outcome.ranking = node.at("ranking").get<std::vector<std::string>>();
        outcome.relevant_found = node.at("relevant_found").get<std::size_t>();
        outcome.relevant_total = node.at("relevant_total").get<std::size_t>();
        if (!node.at("ndcg_at_10").is_null()) {
          outcome.ndcg = node.at("ndcg_at_10").get<double>();
        }
        outcome.failures = node.at("failures").get<std::size_t>();
        outcome.incomplete = node.at("incomplete").get<bool>();
        table.SetCtm(item, *category, std::move(outcome));
      }
    }
  }
  return table;
}

}  // namespace equity::metrics
