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

#include "equity/metrics/fairness.h"

#include <algorithm>

#include "equity/core/error.h"

namespace equity::metrics {
namespace {

bool QaPositive(const QaOutcome& outcome) {
  return outcome.correct && !outcome.failure;
}

Gap MakeGap(std::vector<Rate> rates) {
  Gap out;
  auto [lo, hi] = std::minmax_element(
      rates.begin(), rates.end(),
      [](const Rate& a, const Rate& b) { return a.value < b.value; });
  out.gap = hi->value - lo->value;
  out.score = 1.0 - out.gap;
  out.rates = std::move(rates);
  return out;
}

Rate Fraction(Category category, std::size_t numerator,
              std::size_t denominator) {
  Rate rate{category, 0.0, numerator, denominator};
  if (denominator > 0) {
    rate.value =
        static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  return rate;
}

// Micro recall over the relevant pairs of every non-skipped topic.
Rate CtmRecall(const OutcomeTable& table, Category category) {
  std::size_t found = 0;
  std::size_t total = 0;
  for (const std::string& item : table.items()) {
    const Cell* cell = table.Find(item, category);
    if (cell == nullptr || cell->skipped) continue;
    found += cell->ctm.relevant_found;
    total += cell->ctm.relevant_total;
  }
  return Fraction(category, found, total);
}

nlohmann::ordered_json GapJson(const Gap& gap) {
  nlohmann::ordered_json out;
  out["gap"] = gap.gap;
  out["score"] = gap.score;
  nlohmann::ordered_json rates = nlohmann::ordered_json::object();
  for (const Rate& rate : gap.rates) {
    rates[std::string(CategoryName(rate.category))] = {
        {"rate", rate.value},
        {"numerator", rate.numerator},
        {"denominator", rate.denominator}};
  }
  out["rates"] = std::move(rates);
  return out;
}

}  // namespace

Rate ErrorRate(const OutcomeTable& table, Category category) {
  if (table.task() != Task::kQa) {
    throw ContractError("error rate is defined for QA tables only");
  }
  std::size_t errors = 0;
  std::size_t total = 0;
  for (const std::string& item : table.items()) {
    const Cell* cell = table.Find(item, category);
    if (cell == nullptr || cell->skipped) continue;
    ++total;
    if (!QaPositive(cell->qa)) ++errors;
  }
  if (total == 0) {
    throw UndefinedMetricError("no outcomes for " +
                               std::string(CategoryName(category)));
  }
  return Fraction(category, errors, total);
}

Gap DpGap(const OutcomeTable& table) {
  std::vector<Rate> rates;
  for (Category category : table.categories()) {
    Rate rate;
    if (table.task() == Task::kQa) {
      std::size_t positive = 0;
      std::size_t total = 0;
      for (const std::string& item : table.items()) {
        const Cell* cell = table.Find(item, category);
        if (cell == nullptr || cell->skipped) continue;
        ++total;
        if (QaPositive(cell->qa)) ++positive;
      }
      rate = Fraction(category, positive, total);
    } else {
      rate = CtmRecall(table, category);
    }
    if (rate.denominator > 0) rates.push_back(rate);
  }
  if (rates.size() < 2) {
    throw ContractError("demographic parity needs at least two categories");
  }
  return MakeGap(std::move(rates));
}

Gap EoGap(const OutcomeTable& table) {
  std::vector<Rate> rates;
  for (Category category : table.categories()) {
    Rate rate;
    if (table.task() == Task::kQa) {
      std::size_t hits = 0;
      std::size_t qualified = 0;
      for (const std::string& item : table.items()) {
        const Cell* base = table.Find(item, Category::kBase);
        if (base == nullptr || base->skipped || !QaPositive(base->qa)) continue;
        const Cell* cell = table.Find(item, category);
        if (cell == nullptr || cell->skipped) continue;
        ++qualified;
        if (QaPositive(cell->qa)) ++hits;
      }
      rate = Fraction(category, hits, qualified);
    } else {
      rate = CtmRecall(table, category);
    }
    if (rate.denominator == 0) {
      throw UndefinedMetricError("empty qualified set for " +
                                 std::string(CategoryName(category)));
    }
    rates.push_back(rate);
  }
  if (rates.size() < 2) {
    throw ContractError("equal opportunity needs at least two categories");
  }
  return MakeGap(std::move(rates));
}

std::string FairnessReport::metric_name() const {
  return task == Task::kQa ? "error_rate" : "ndcg_at_10";
}

FairnessReport ComputeFairness(const OutcomeTable& table) {
  FairnessReport report;
  report.task = table.task();
  for (Category category : table.categories()) {
    CategoryMetric metric;
    metric.category = category;
    double sum = 0.0;
    for (const std::string& item : table.items()) {
      const Cell* cell = table.Find(item, category);
      if (cell == nullptr) continue;
      if (cell->skipped) {
        ++metric.skipped;
        continue;
      }
      if (table.task() == Task::kQa) {
        ++metric.denominator;
        if (!QaPositive(cell->qa)) sum += 1.0;
      } else if (cell->ctm.ndcg) {
        ++metric.denominator;
        sum += *cell->ctm.ndcg;
      }
    }
    if (metric.denominator > 0) {
      metric.value = sum / static_cast<double>(metric.denominator);
    }
    report.per_category.push_back(metric);
  }
  try {
    report.dp = DpGap(table);
  } catch (const Error& e) {
    report.dp_note = e.what();
  }
  try {
    report.eo = EoGap(table);
  } catch (const Error& e) {
    report.eo_note = e.what();
  }
  return report;
}

nlohmann::ordered_json FairnessReport::ToJson() const {
  nlohmann::ordered_json out;
  out["task"] = std::string(TaskName(task));
  out["metric"] = metric_name();
  nlohmann::ordered_json cats = nlohmann::ordered_json::object();
  for (const CategoryMetric& metric : per_category) {
    cats[std::string(CategoryName(metric.category))] = {
        {"value", metric.value ? nlohmann::ordered_json(*metric.value)
                               : nlohmann::ordered_json(nullptr)},
        {"denominator", metric.denominator},
        {"skipped", metric.skipped}};
  }
  out["categories"] = std::move(cats);
  out["dp"] = dp ? GapJson(*dp) : nlohmann::ordered_json({{"note", dp_note}});
  out["eo"] = eo ? GapJson(*eo) : nlohmann::ordered_json({{"note", eo_note}});
  return out;
}

}  // namespace equity::metrics
