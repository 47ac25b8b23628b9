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

#ifndef EQUITY_METRICS_CORRELATION_H_
#define EQUITY_METRICS_CORRELATION_H_

#include <optional>
#include <string>
#include <vector>

#include "equity/core/category.h"
#include "equity/metrics/outcome.h"
#include "json.hpp"

namespace equity::metrics {

// kStrict drops items where both categories are wrong with different outputs
// instead of scoring them 0, and reports how many items were kept.
enum class CorrelationMode { kDefault, kStrict };

struct PairStats {
  std::size_t shared = 0;     // items with both cells present and not skipped
  std::size_t scored = 0;     // items contributing to the mean
  std::size_t uncovered = 0;  // both wrong, different outputs

  double coverage() const {
    return shared == 0 ? 0.0
                       : static_cast<double>(scored) /
                             static_cast<double>(shared);
  }
};

// Whether `category` changed the outcome of `item` for the worse relative to
// Base, and the output that identifies the change. QA: an incorrect or failed
// reply that differs from Base's reply. CTM: a top-10 that differs from
// Base's top-10. Returns nullopt when the cell or Base is absent or skipped.
struct ItemState {
  bool wrong = false;
  std::string output;
};
std::optional<ItemState> StateOf(const OutcomeTable& table,
                                 const std::string& item, Category category);

// Mean per-item score over shared items: +1 when both are wrong with the
// same output, -1 when exactly one is wrong, 0 otherwise. Throws
// UndefinedMetricError when no item is scored.
double PairCorrelation(const OutcomeTable& table, Category a, Category b,
                       CorrelationMode mode = CorrelationMode::kDefault,
                       PairStats* stats = nullptr);

struct CorrelationMatrix {
  std::vector<Category> categories;
  // Row-major, categories.size() squared; nullopt where undefined.
  std::vector<std::optional<double>> values;
  std::vector<PairStats> stats;

  std::size_t size() const { return categories.size(); }
  const std::optional<double>& at(std::size_t row, std::size_t col) const {
    return values[row * categories.size() + col];
  }
  // Header row of category names, then one row per category; undefined
  // entries are empty fields.
  std::string ToCsv() const;
  nlohmann::ordered_json ToJson() const;
};

// Every pair of the table's non-Base categories. Throws ContractError with
// fewer than two of them.
CorrelationMatrix ComputeCorrelationMatrix(
    const OutcomeTable& table,
    CorrelationMode mode = CorrelationMode::kDefault);

}  // namespace equity::metrics

#endif  // EQUITY_METRICS_CORRELATION_H_
