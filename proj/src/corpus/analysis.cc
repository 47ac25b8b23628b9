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

#include "equity/corpus/analysis.h"

#include <cstdio>

#include "equity/core/text.h"
#include "equity/perturb/detect.h"

namespace equity::corpus {

FilterResult FilterDemographicEssential(const std::vector<QAItem>& items,
                                        const perturb::Lexicon& lexicon) {
  FilterResult result;
  for (const QAItem& item : items) {
    const auto gold = item.options.find(item.gold);
    const bool essential =
        lexicon.MatchesEssential(item.question) ||
        (gold != item.options.end() && lexicon.MatchesEssential(gold->second));
    (essential ? result.removed : result.kept).push_back(item);
  }
  return result;
}

CompositionReport CorpusStats(std::string_view dataset,
                              const std::vector<std::string>& texts,
                              const perturb::Lexicon& lexicon) {
  CompositionReport report;
  report.dataset = std::string(dataset);
  report.total = texts.size();
  const Axis axes[] = {Axis::kSex, Axis::kRace, Axis::kSdoh};
  std::vector<std::vector<std::size_t>> counts(3,
                                               std::vector<std::size_t>(kCategoryCount, 0));
  std::vector<std::size_t> not_mentioned(3, 0);

  for (const std::string& text : texts) {
    const std::vector<perturb::AttributeSpan> spans =
        perturb::DetectAttributes(text, lexicon);
    for (std::size_t a = 0; a < 3; ++a) {
      bool found = false;
      for (const perturb::AttributeSpan& span : spans) {
        if (AxisOf(span.category) == axes[a]) {
          ++counts[a][Index(span.category)];
          found = true;
          break;
        }
      }
      if (!found) ++not_mentioned[a];
    }
    const std::size_t words = SplitUnicodeWhitespace(text).size();
    ++report.word_histogram[words / kHistogramBucketWidth *
                            kHistogramBucketWidth];
  }

  auto percent = [&](std::size_t count) {
    return report.total == 0 ? 0.0
                             : 100.0 * static_cast<double>(count) /
                                   static_cast<double>(report.total);
  };
  for (std::size_t a = 0; a < 3; ++a) {
    AxisComposition composition;
    composition.axis = axes[a];
    for (Category category : CategoriesOnAxis(axes[a])) {
      const std::size_t count = counts[a][Index(category)];
      composition.rows.push_back(
          {std::string(CategoryName(category)), count, percent(count)});
    }
    composition.rows.push_back(
        {"Not Mentioned", not_mentioned[a], percent(not_mentioned[a])});
    report.axes.push_back(std::move(composition));
  }
  return report;
}

CompositionReport CorpusStats(std::string_view dataset,
                              const std::vector<QAItem>& items,
                              const perturb::Lexicon& lexicon) {
  std::vector<std::string> texts;
  texts.reserve(items.size());
  for (const QAItem& item : items) texts.push_back(item.question);
  return CorpusStats(dataset, texts, lexicon);
}

CompositionReport CorpusStats(std::string_view dataset,
                              const std::vector<PatientTopic>& topics,
                              const perturb::Lexicon& lexicon) {
  std::vector<std::string> texts;
  texts.reserve(topics.size());
  for (const PatientTopic& topic : topics) texts.push_back(topic.text);
  return CorpusStats(dataset, texts, lexicon);
}

std::string FormatPercent(double percent) {
  char buffer[32];
  const bool small = percent > 0.0 && percent < 0.1;
  std::snprintf(buffer, sizeof(buffer), small ? "%.2f" : "%.1f", percent);
  return buffer;
}

nlohmann::ordered_json ToJson(const CompositionReport& report) {
  nlohmann::ordered_json out;
  out["dataset"] = report.dataset;
  out["total"] = report.total;
  for (const AxisComposition& axis : report.axes) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const CompositionRow& row : axis.rows) {
      rows.push_back({{"label", row.label},
                      {"count", row.count},
                      {"percent", row.percent},
                      {"display", std::to_string(row.count) + " (" +
                                      FormatPercent(row.percent) + "%)"}});
    }
    out["composition"][std::string(AxisName(axis.axis))] = std::move(rows);
  }
  nlohmann::ordered_json histogram = nlohmann::ordered_json::array();
  for (const auto& [bucket, count] : report.word_histogram) {
    histogram.push_back({{"from", bucket},
                         {"to", bucket + kHistogramBucketWidth},
                         {"count", count}});
  }
  out["word_histogram"] = std::move(histogram);
  return out;
}

}  // namespace equity::corpus
