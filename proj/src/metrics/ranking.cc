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

#include "equity/metrics/ranking.h"

#include <algorithm>
#include <cmath>

#include "equity/core/error.h"

namespace equity::metrics {
namespace {

double Gain(int grade) { return std::ldexp(1.0, grade) - 1.0; }

double Discount(std::size_t rank) {  // rank is 1-based
  return std::log2(static_cast<double>(rank) + 1.0);
}

}  // namespace

double NdcgAtK(const std::vector<std::string>& ranking,
               const corpus::Qrels& qrels, const std::string& topic,
               std::size_t k) {
  std::vector<int> ideal;
  for (const auto& [trial, grade] : qrels.Judged(topic)) {
    if (grade > 0) ideal.push_back(grade);
  }
  if (ideal.empty()) {
    throw UndefinedMetricError("topic " + topic +
                               " has no positive judgments; NDCG undefined");
  }
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, ideal.size()); ++i) {
    idcg += Gain(ideal[i]) / Discount(i + 1);
  }
  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, ranking.size()); ++i) {
    const int grade = qrels.Grade(topic, ranking[i]).value_or(0);
    if (grade > 0) dcg += Gain(grade) / Discount(i + 1);
  }
  return dcg / idcg;
}

RecallCount RecallAtK(const std::vector<std::string>& ranking,
                      const corpus::Qrels& qrels, const std::string& topic,
                      std::size_t k) {
  RecallCount count;
  count.total = qrels.Relevant(topic).size();
  for (std::size_t i = 0; i < std::min(k, ranking.size()); ++i) {
    if (qrels.Grade(topic, ranking[i]).value_or(0) > 0) ++count.found;
  }
  return count;
}

}  // namespace equity::metrics
