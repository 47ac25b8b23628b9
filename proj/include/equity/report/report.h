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

#ifndef EQUITY_REPORT_REPORT_H_
#define EQUITY_REPORT_REPORT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "equity/report/audit.h"
#include "json.hpp"

namespace equity::report {

// Files written per format:
//   csv  metrics_long.csv, metrics_wide.csv, correlation.csv
//   json report.json
//   svg  radar.svg, heatmap.svg, fairness_bars.svg
// CSV files start with a "# config_hash=<hash>" line; SVG files carry the
// hash in <desc>. Category columns follow the fixed category order. Throws
// UsageError for an unknown format. Returns the written paths.
std::vector<std::filesystem::path> EmitReport(
    const AuditRun& run, const std::vector<std::string>& formats,
    const std::filesystem::path& out_dir);

// Long form: one row per (category, metric).
//   category,metric,value,denominator,skipped
std::string MetricsLongCsv(const AuditRun& run);
// Wide form: one row per metric with a column per category, then the gap
// and score columns.
//   metric,<categories...>,eo_gap,eo_score,dp_gap,dp_score
std::string MetricsWideCsv(const AuditRun& run);
std::string CorrelationCsv(const AuditRun& run);
nlohmann::ordered_json ReportJson(const AuditRun& run);

std::string RadarSvg(const AuditRun& run);
std::string HeatmapSvg(const AuditRun& run);
std::string FairnessBarsSvg(const AuditRun& run);

// Diverging blue-white-red color for a correlation value clamped to
// [-1, 1], as "#rrggbb".
std::string HeatmapColor(double value);

enum class Direction { kImproved, kWorsened, kUnchanged };

const char* DirectionName(Direction direction);

struct MetricChange {
  std::string metric;  // "eo_gap", "dp_gap" or "<metric>:<Category>"
  bool lower_is_better = true;
  std::optional<double> before;
  std::optional<double> after;
  std::optional<double> absolute;  // after - before
  std::optional<double> percent;  // 100 * absolute / |before|; unset at 0
  std::optional<Direction> direction;
};

struct Comparison {
  std::string before_hash;
  std::string after_hash;
  std::vector<MetricChange> changes;

  std::string ToCsv() const;
  nlohmann::ordered_json ToJson() const;
};

inline constexpr double kCompareTolerance = 1e-9;

MetricChange Change(std::string metric, bool lower_is_better,
                    std::optional<double> before, std::optional<double> after,
                    double tolerance = kCompareTolerance);

// Throws ComparabilityError listing every difference in task, input
// digests and categories.
Comparison CompareRuns(const AuditRun& before, const AuditRun& after,
                       double tolerance = kCompareTolerance);

}  // namespace equity::report

#endif  // EQUITY_REPORT_REPORT_H_
