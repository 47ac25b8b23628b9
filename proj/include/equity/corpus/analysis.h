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

#ifndef EQUITY_CORPUS_ANALYSIS_H_
#define EQUITY_CORPUS_ANALYSIS_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "equity/core/category.h"
#include "equity/corpus/types.h"
#include "equity/perturb/lexicon.h"
#include "json.hpp"

namespace equity::corpus {

struct FilterResult {
  std::vector<QAItem> kept;
  std::vector<QAItem> removed;
};

// Moves items whose question or gold option mentions a demographic-essential
// topic (pregnancy, prostate, sickle cell, ...) into `removed`.
FilterResult FilterDemographicEssential(const std::vector<QAItem>& items,
                                        const perturb::Lexicon& lexicon);

struct CompositionRow {
  std::string label;  // category name, or "Not Mentioned"
  std::size_t count = 0;
  double percent = 0.0;
};

// Counts on one axis. Each item is assigned to the category of its earliest
// mention on that axis, so the rows partition the dataset.
struct AxisComposition {
  Axis axis = Axis::kRace;
  std::vector<CompositionRow> rows;  // axis categories in order, then
                                     // "Not Mentioned"
};

struct CompositionReport {
  std::string dataset;
  std::size_t total = 0;
  std::vector<AxisComposition> axes;  // sex, race, sdoh
  // Word-count histogram keyed by bucket lower bound (width 10).
  std::map<std::size_t, std::size_t> word_histogram;
};

inline constexpr std::size_t kHistogramBucketWidth = 10;

CompositionReport CorpusStats(std::string_view dataset,
                              const std::vector<std::string>& texts,
                              const perturb::Lexicon& lexicon);
CompositionReport CorpusStats(std::string_view dataset,
                              const std::vector<QAItem>& items,
                              const perturb::Lexicon& lexicon);
CompositionReport CorpusStats(std::string_view dataset,
                              const std::vector<PatientTopic>& topics,
                              const perturb::Lexicon& lexicon);

// "1.2" style percentage: one decimal, two below 0.1 so rare categories do
// not print as 0.0.
std::string FormatPercent(double percent);

nlohmann::ordered_json ToJson(const CompositionReport& report);

}  // namespace equity::corpus

#endif  // EQUITY_CORPUS_ANALYSIS_H_
