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

#include "equity/metrics/correlation.h"

#include <algorithm>
#include <cstdio>

#include "equity/core/error.h"

namespace equity::metrics {
namespace {

std::string QaOutput(const QaOutcome& outcome) {
  if (outcome.failure) {
    return "failure:" + std::string(gateway::FailureKindName(*outcome.failure));
  }
  return outcome.answer ? std::string(1, *outcome.answer) : std::string("-");
}

std::string TopTen(const CtmOutcome& outcome) {
  std::string out;
  const std::size_t n = std::min<std::size_t>(10, outcome.ranking.size());
  for (std::size_t i = 0; i < n; ++i) {
    out += outcome.ranking[i];
    out += '\n';
  }
  return out;
}

std::string FormatEntry(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

}  // namespace

std::optional<ItemState> StateOf(const OutcomeTable& table,
                                 const std::string& item, Category category) {
  const Cell* base = table.Find(item, Category::kBase);
  const Cell* cell = table.Find(item, category);
  if (base == nullptr || base->skipped || cell == nullptr || cell->skipped) {
    return std::nullopt;
  }
  ItemState state;
  if (table.task() == Task::kQa) {
    state.output = QaOutput(cell->qa);
    const bool incorrect = !cell->qa.correct || cell->qa.failure.has_value();
    state.wrong = incorrect && state.output != QaOutput(base->qa);
  } else {
    state.output = TopTen(cell->ctm);
    state.wrong = state.output != TopTen(base->ctm);
  }
  return state;
}

double PairCorrelation(const OutcomeTable& table, Category a, Category b,
                       CorrelationMode mode, PairStats* stats) {
  PairStats local;
  double sum = 0.0;
  for (const std::string& item : table.items()) {
    const std::optional<ItemState> sa = StateOf(table, item, a);
    const std::optional<ItemState> sb = StateOf(table, item, b);
    if (!sa || !sb) continue;
    ++local.shared;
    if (sa->wrong && sb->wrong) {
      if (sa->output == sb->output) {
        sum += 1.0;
      } else {
        ++local.uncovered;
        if (mode == CorrelationMode::kStrict) continue;
      }
    } else if (sa->wrong != sb->wrong) {
      sum -= 1.0;
    }
    ++local.scored;
  }
  if (stats != nullptr) *stats = local;
  if (local.scored == 0) {
    throw UndefinedMetricError("no scored items for " +
                               std::string(CategoryName(a)) + " vs " +
                               std::string(CategoryName(b)));
  }
  return sum / static_cast<double>(local.scored);
}

CorrelationMatrix ComputeCorrelationMatrix(const OutcomeTable& table,
                                           CorrelationMode mode) {
  CorrelationMatrix matrix;
  for (Category category : table.categories()) {
    if (category != Category::kBase) matrix.categories.push_back(category);
  }
  const std::size_t n = matrix.categories.size();
  if (n < 2) {
    throw ContractError("correlation matrix needs at least two categories");
  }
  matrix.values.assign(n * n, std::nullopt);
  matrix.stats.assign(n * n, PairStats{});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      PairStats stats;
      std::optional<double> value;
      try {
        value = PairCorrelation(table, matrix.categories[i],
                                matrix.categories[j], mode, &stats);
      } catch (const UndefinedMetricError&) {
      }
      matrix.values[i * n + j] = matrix.values[j * n + i] = value;
      matrix.stats[i * n + j] = matrix.stats[j * n + i] = stats;
    }
  }
  return matrix;
}

std::string CorrelationMatrix::ToCsv() const {
  std::string out = "category";
  for (Category category : categories) {
    out += ',';
    out += CategoryName(category);
  }
  out += '\n';
  for (std::size_t i = 0; i < size(); ++i) {
    out += CategoryName(categories[i]);
    for (std::size_t j = 0; j < size(); ++j) {
      out += ',';
      if (at(i, j)) out += FormatEntry(*at(i, j));
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json CorrelationMatrix::ToJson() const {
  nlohmann::ordered_json out;
  nlohmann::ordered_json names = nlohmann::ordered_json::array();
  for (Category category : categories) {
    names.push_back(std::string(CategoryName(category)));
  }
  out["categories"] = std::move(names);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  nlohmann::ordered_json coverage = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < size(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    nlohmann::ordered_json cov = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < size(); ++j) {
      row.push_back(at(i, j) ? nlohmann::ordered_json(*at(i, j))
                             : nlohmann::ordered_json(nullptr));
      cov.push_back(stats[i * size() + j].coverage());
    }
    rows.push_back(std::move(row));
    coverage.push_back(std::move(cov));
  }
  out["values"] = std::move(rows);
  out["coverage"] = std::move(coverage);
  return out;
}

}  // namespace equity::metrics
