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

#include "equity/report/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>

#include "equity/core/error.h"
#include "equity/report/config.h"

namespace equity::report {
namespace {

using nlohmann::ordered_json;

std::string Fixed(double value, int digits = 6) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

std::string Optional(const std::optional<double>& value) {
  return value ? Fixed(*value) : std::string();
}

std::string XmlEscape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string HashLine(const AuditRun& run) {
  return "# config_hash=" + run.config_hash + "\n";
}

std::string SvgOpen(const AuditRun& run, int width, int height,
                    std::string_view title) {
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
      std::to_string(width) + "\" height=\"" + std::to_string(height) +
      "\" viewBox=\"0 0 " + std::to_string(width) + " " +
      std::to_string(height) + "\" font-family=\"sans-serif\">\n";
  out += "<title>" + XmlEscape(title) + "</title>\n";
  out += "<desc>config_hash=" + run.config_hash + "</desc>\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  return out;
}

std::string Text(double x, double y, std::string_view text,
                 std::string_view anchor = "middle", int size = 11) {
  return "<text x=\"" + Fixed(x, 2) + "\" y=\"" + Fixed(y, 2) +
         "\" font-size=\"" + std::to_string(size) + "\" text-anchor=\"" +
         std::string(anchor) + "\">" + XmlEscape(text) + "</text>\n";
}

std::optional<double> GapOf(const std::optional<metrics::Gap>& gap) {
  if (!gap) return std::nullopt;
  return gap->gap;
}

std::optional<double> ScoreOf(const std::optional<metrics::Gap>& gap) {
  if (!gap) return std::nullopt;
  return gap->score;
}

std::optional<double> RateFor(const std::optional<metrics::Gap>& gap,
                              Category category) {
  if (!gap) return std::nullopt;
  for (const metrics::Rate& rate : gap->rates) {
    if (rate.category == category) return rate.value;
  }
  return std::nullopt;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string MetricsLongCsv(const AuditRun& run) {
  const metrics::FairnessReport& f = run.fairness;
  std::string out = HashLine(run);
  out += "category,metric,value,denominator,skipped\n";
  for (const metrics::CategoryMetric& m : f.per_category) {
    out += std::string(CategoryName(m.category)) + "," + f.metric_name() +
           "," + Optional(m.value) + "," + std::to_string(m.denominator) +
           "," + std::to_string(m.skipped) + "\n";
  }
  for (const auto& [name, gap] :
       {std::pair{"eo", &f.eo}, std::pair{"dp", &f.dp}}) {
    for (const metrics::Rate& rate : *gap ? (*gap)->rates
                                          : std::vector<metrics::Rate>{}) {
      out += std::string(CategoryName(rate.category)) + "," + name + "_rate," +
             Fixed(rate.value) + "," + std::to_string(rate.denominator) +
             ",\n";
    }
    out += std::string("all,") + name + "_gap," + Optional(GapOf(*gap)) +
           ",,\n";
    out += std::string("all,") + name + "_score," + Optional(ScoreOf(*gap)) +
           ",,\n";
  }
  return out;
}

std::string MetricsWideCsv(const AuditRun& run) {
  const metrics::FairnessReport& f = run.fairness;
  std::string out = HashLine(run);
  out += "metric";
  for (const metrics::CategoryMetric& m : f.per_category) {
    out += ",";
    out += CategoryName(m.category);
  }
  out += ",eo_gap,eo_score,dp_gap,dp_score\n";

  out += f.metric_name();
  for (const metrics::CategoryMetric& m : f.per_category) {
    out += "," + Optional(m.value);
  }
  out += "," + Optional(GapOf(f.eo)) + "," + Optional(ScoreOf(f.eo)) + "," +
         Optional(GapOf(f.dp)) + "," + Optional(ScoreOf(f.dp)) + "\n";

  for (const auto& [name, gap] :
       {std::pair{"eo_rate", &f.eo}, std::pair{"dp_rate", &f.dp}}) {
    out += name;
    for (const metrics::CategoryMetric& m : f.per_category) {
      out += "," + Optional(RateFor(*gap, m.category));
    }
    out += ",,,,\n";
  }
  return out;
}

std::string CorrelationCsv(const AuditRun& run) {
  std::string out = HashLine(run);
  if (run.correlation) {
    out += run.correlation->ToCsv();
  } else {
    out += "# undefined: " + run.correlation_note + "\n";
  }
  return out;
}

ordered_json ReportJson(const AuditRun& run) {
  ordered_json out;
  out["config_hash"] = run.config_hash;
  out["seed"] = run.config.value("seed", std::uint64_t{0});
  out["task"] = run.config.value("task", std::string());
  out["status"] = RunStatusName(run.status);
  out["fairness"] = run.fairness.ToJson();
  if (run.correlation) {
    out["correlation"] = run.correlation->ToJson();
  } else {
    out["correlation"] = {{"note", run.correlation_note}};
  }
  ordered_json failures = ordered_json::object();
  for (const auto& [kind, count] : run.failures) failures[kind] = count;
  out["failures"] = std::move(failures);
  out["cost"] = run.cost;
  out["skipped"] = run.skipped.size();
  return out;
}

std::string RadarSvg(const AuditRun& run) {
  constexpr int kSize = 560;
  constexpr double kCenter = kSize / 2.0;
  constexpr double kRadius = 200.0;
  const metrics::FairnessReport& f = run.fairness;
  const std::size_t n = f.per_category.size();

  double peak = 0.0;
  for (const metrics::CategoryMetric& m : f.per_category) {
    if (m.value) peak = std::max(peak, *m.value);
  }
  const double scale = std::max(0.1, std::ceil(peak * 10.0 - 1e-9) / 10.0);

  std::string out = SvgOpen(run, kSize, kSize, "Per-category " + f.metric_name());
  for (int ring = 1; ring <= 4; ++ring) {
    out += "<circle class=\"ring\" cx=\"" + Fixed(kCenter, 2) + "\" cy=\"" +
           Fixed(kCenter, 2) + "\" r=\"" + Fixed(kRadius * ring / 4.0, 2) +
           "\" fill=\"none\" stroke=\"#dddddd\"/>\n";
  }
  out += Text(kCenter, 20, f.metric_name() + " (outer ring = " +
                               Fixed(scale, 2) + ")");
  std::string points;
  for (std::size_t i = 0; i < n; ++i) {
    const metrics::CategoryMetric& m = f.per_category[i];
    const double angle =
        -std::numbers::pi / 2 + 2 * std::numbers::pi * static_cast<double>(i) /
                                    static_cast<double>(n);
    const double x = kCenter + kRadius * std::cos(angle);
    const double y = kCenter + kRadius * std::sin(angle);
    out += "<line class=\"axis\" data-category=\"" +
           std::string(CategoryName(m.category)) + "\" x1=\"" +
           Fixed(kCenter, 2) + "\" y1=\"" + Fixed(kCenter, 2) + "\" x2=\"" +
           Fixed(x, 2) + "\" y2=\"" + Fixed(y, 2) +
           "\" stroke=\"#999999\"/>\n";
    out += Text(kCenter + (kRadius + 22) * std::cos(angle),
                kCenter + (kRadius + 22) * std::sin(angle) + 4,
                std::string(CategoryLabel(m.category)) + (m.value ? "" : " (n/a)"),
                "middle", 10);
    const double r = m.value ? kRadius * std::min(1.0, *m.value / scale) : 0.0;
    points += (points.empty() ? "" : " ") + Fixed(kCenter + r * std::cos(angle), 2) +
              "," + Fixed(kCenter + r * std::sin(angle), 2);
  }
  out += "<polygon class=\"series\" points=\"" + points +
         "\" fill=\"#4393c3\" fill-opacity=\"0.35\" stroke=\"#2166ac\"/>\n";
  out += "</svg>\n";
  return out;
}

std::string HeatmapColor(double value) {
  const double v = std::clamp(std::isfinite(value) ? value : 0.0, -1.0, 1.0);
  // Endpoints: #2166ac at -1, #ffffff at 0, #b2182b at +1.
  const double t = std::abs(v);
  const int end_r = v < 0 ? 0x21 : 0xb2;
  const int end_g = v < 0 ? 0x66 : 0x18;
  const int end_b = v < 0 ? 0xac : 0x2b;
  auto mix = [t](int end) {
    return static_cast<int>(std::lround(255.0 + (end - 255.0) * t));
  };
  char buffer[8];
  std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", mix(end_r),
                mix(end_g), mix(end_b));
  return buffer;
}

std::string HeatmapSvg(const AuditRun& run) {
  constexpr int kCell = 28;
  constexpr int kMargin = 120;
  if (!run.correlation) {
    std::string out = SvgOpen(run, 480, 80, "Category correlation");
    out += Text(240, 45, "correlation undefined: " + run.correlation_note);
    return out + "</svg>\n";
  }
  const metrics::CorrelationMatrix& m = *run.correlation;
  const int n = static_cast<int>(m.size());
  const int side = kMargin + n * kCell + 20;
  std::string out = SvgOpen(run, side, side + 40, "Category correlation");
  for (int i = 0; i < n; ++i) {
    const std::string label(CategoryLabel(m.categories[i]));
    out += Text(kMargin - 6, kMargin + i * kCell + kCell / 2.0 + 4, label, "end",
                10);
    const double x = kMargin + i * kCell + kCell / 2.0;
    out += "<text x=\"" + Fixed(x, 2) + "\" y=\"" + Fixed(kMargin - 6, 2) +
           "\" font-size=\"10\" transform=\"rotate(-60 " + Fixed(x, 2) + " " +
           Fixed(kMargin - 6, 2) + ")\">" + XmlEscape(label) + "</text>\n";
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::optional<double>& value = m.at(i, j);
      out += "<rect class=\"cell\" data-row=\"" +
             std::string(CategoryName(m.categories[i])) + "\" data-col=\"" +
             std::string(CategoryName(m.categories[j])) + "\" x=\"" +
             std::to_string(kMargin + j * kCell) + "\" y=\"" +
             std::to_string(kMargin + i * kCell) + "\" width=\"" +
             std::to_string(kCell) + "\" height=\"" + std::to_string(kCell) +
             "\" fill=\"" + (value ? HeatmapColor(*value) : "#cccccc") +
             "\" stroke=\"#ffffff\"><title>" +
             (value ? Fixed(*value, 3) : std::string("undefined")) +
             "</title></rect>\n";
    }
  }
  const int legend_y = kMargin + n * kCell + 14;
  for (int k = 0; k <= 20; ++k) {
    const double v = -1.0 + k / 10.0;
    out += "<rect class=\"legend\" x=\"" + std::to_string(kMargin + k * 8) +
           "\" y=\"" + std::to_string(legend_y) +
           "\" width=\"8\" height=\"10\" fill=\"" + HeatmapColor(v) + "\"/>\n";
  }
  out += Text(kMargin, legend_y + 24, "-1", "middle", 9);
  out += Text(kMargin + 84, legend_y + 24, "0", "middle", 9);
  out += Text(kMargin + 168, legend_y + 24, "+1", "middle", 9);
  return out + "</svg>\n";
}

std::string FairnessBarsSvg(const AuditRun& run) {
  constexpr int kWidth = 360;
  constexpr int kHeight = 260;
  constexpr double kPlotTop = 40.0;
  constexpr double kPlotHeight = 170.0;
  const metrics::FairnessReport& f = run.fairness;
  std::string out = SvgOpen(run, kWidth, kHeight, "Fairness scores");
  out += Text(kWidth / 2.0, 22, "EO and DP scores (1 - gap)");
  const double base_y = kPlotTop + kPlotHeight;
  out += "<line x1=\"40\" y1=\"" + Fixed(base_y, 2) + "\" x2=\"" +
         std::to_string(kWidth - 20) + "\" y2=\"" + Fixed(base_y, 2) +
         "\" stroke=\"#333333\"/>\n";
  const std::pair<const char*, const std::optional<metrics::Gap>*> bars[] = {
      {"EO", &f.eo}, {"DP", &f.dp}};
  const char* colors[] = {"#4393c3", "#d6604d"};
  for (int i = 0; i < 2; ++i) {
    const double x = 80.0 + i * 120.0;
    const std::optional<double> score = ScoreOf(*bars[i].second);
    const double h = score ? kPlotHeight * std::clamp(*score, 0.0, 1.0) : 0.0;
    out += "<rect class=\"bar\" data-metric=\"" + std::string(bars[i].first) +
           "\" x=\"" + Fixed(x, 2) + "\" y=\"" + Fixed(base_y - h, 2) +
           "\" width=\"80\" height=\"" + Fixed(h, 2) + "\" fill=\"" +
           colors[i] + "\"/>\n";
    out += Text(x + 40, base_y + 16, bars[i].first);
    out += Text(x + 40, base_y - h - 6, score ? Fixed(*score, 4) : "n/a");
  }
  return out + "</svg>\n";
}

std::vector<std::filesystem::path> EmitReport(
    const AuditRun& run, const std::vector<std::string>& formats,
    const std::filesystem::path& out_dir) {
  for (const std::string& format : formats) {
    if (format != "csv" && format != "json" && format != "svg") {
      throw UsageError("unknown report format '" + format + "'");
    }
  }
  std::vector<std::filesystem::path> written;
  if (formats.empty()) return written;
  std::filesystem::create_directories(out_dir);
  auto emit = [&](const std::string& name, const std::string& text) {
    const std::filesystem::path path = out_dir / name;
    WriteText(path, text);
    written.push_back(path);
  };
  for (const std::string& format : formats) {
    if (format == "csv") {
      emit("metrics_long.csv", MetricsLongCsv(run));
      emit("metrics_wide.csv", MetricsWideCsv(run));
      emit("correlation.csv", CorrelationCsv(run));
    } else if (format == "json") {
      emit("report.json", ReportJson(run).dump(2) + "\n");
    } else {
      emit("radar.svg", RadarSvg(run));
      emit("heatmap.svg", HeatmapSvg(run));
      emit("fairness_bars.svg", FairnessBarsSvg(run));
    }
  }
  return written;
}

const char* DirectionName(Direction direction) {
  switch (direction) {
    case Direction::kImproved: return "improved";
    case Direction::kWorsened: return "worsened";
    case Direction::kUnchanged: return "unchanged";
  }
  return "unchanged";
}

MetricChange Change(std::string metric, bool lower_is_better,
                    std::optional<double> before, std::optional<double> after,
                    double tolerance) {
  MetricChange change;
  change.metric = std::move(metric);
  change.lower_is_better = lower_is_better;
  change.before = before;
  change.after = after;
  if (!before || !after) return change;
  const double delta = *after - *before;
  change.absolute = delta;
  if (*before != 0.0) change.percent = 100.0 * delta / std::abs(*before);
  if (std::abs(delta) <= tolerance) {
    change.direction = Direction::kUnchanged;
  } else {
    change.direction = (delta < 0) == lower_is_better ? Direction::kImproved
                                                      : Direction::kWorsened;
  }
  return change;
}

Comparison CompareRuns(const AuditRun& before, const AuditRun& after,
                       double tolerance) {
  static const std::set<std::string> kDatasetInputs = {
      "qa", "qa_format", "topics", "trials", "qrels", "synthetic"};
  std::vector<std::string> differences;
  auto field = [](const ordered_json& doc, const char* key) {
    return doc.contains(key) ? doc.at(key) : ordered_json();
  };
  if (field(before.config, "task") != field(after.config, "task")) {
    differences.push_back("task " + field(before.config, "task").dump() +
                          " vs " + field(after.config, "task").dump());
  }
  const ordered_json in_before = field(before.config, "inputs");
  const ordered_json in_after = field(after.config, "inputs");
  std::set<std::string> keys;
  for (const ordered_json* doc : {&in_before, &in_after}) {
    if (!doc->is_object()) continue;
    for (const auto& [key, value] : doc->items()) {
      if (kDatasetInputs.contains(key)) keys.insert(key);
    }
  }
  for (const std::string& key : keys) {
    const ordered_json a = in_before.is_object() && in_before.contains(key)
                               ? in_before.at(key)
                               : ordered_json();
    const ordered_json b = in_after.is_object() && in_after.contains(key)
                               ? in_after.at(key)
                               : ordered_json();
    if (a != b) differences.push_back("dataset input '" + key + "' differs");
  }
  if (field(before.config, "categories") != field(after.config, "categories")) {
    differences.push_back("categories " +
                          field(before.config, "categories").dump() + " vs " +
                          field(after.config, "categories").dump());
  }
  if (!differences.empty()) {
    std::string message = "runs are not comparable:";
    for (const std::string& d : differences) message += "\n  " + d;
    throw ComparabilityError(message);
  }

  Comparison out;
  out.before_hash = before.config_hash;
  out.after_hash = after.config_hash;
  const metrics::FairnessReport& fb = before.fairness;
  const metrics::FairnessReport& fa = after.fairness;
  out.changes.push_back(
      Change("eo_gap", true, GapOf(fb.eo), GapOf(fa.eo), tolerance));
  out.changes.push_back(
      Change("dp_gap", true, GapOf(fb.dp), GapOf(fa.dp), tolerance));
  const bool lower_better = fb.metric_name() == "error_rate";
  for (const metrics::CategoryMetric& mb : fb.per_category) {
    std::optional<double> value_after;
    for (const metrics::CategoryMetric& ma : fa.per_category) {
      if (ma.category == mb.category) value_after = ma.value;
    }
    out.changes.push_back(Change(
        fb.metric_name() + ":" + std::string(CategoryName(mb.category)),
        lower_better, mb.value, value_after, tolerance));
  }
  return out;
}

std::string Comparison::ToCsv() const {
  std::string out = "# before_config_hash=" + before_hash + "\n" +
                    "# after_config_hash=" + after_hash + "\n";
  out += "metric,before,after,absolute_change,percent_change,direction\n";
  for (const MetricChange& c : changes) {
    out += c.metric + "," + Optional(c.before) + "," + Optional(c.after) +
           "," + Optional(c.absolute) + "," +
           (c.percent ? Fixed(*c.percent, 4) : std::string()) + "," +
           (c.direction ? DirectionName(*c.direction) : "undefined") + "\n";
  }
  return out;
}

ordered_json Comparison::ToJson() const {
  auto opt = [](const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  ordered_json out;
  out["before_config_hash"] = before_hash;
  out["after_config_hash"] = after_hash;
  ordered_json rows = ordered_json::array();
  for (const MetricChange& c : changes) {
    rows.push_back({{"metric", c.metric},
                    {"lower_is_better", c.lower_is_better},
                    {"before", opt(c.before)},
                    {"after", opt(c.after)},
                    {"absolute_change", opt(c.absolute)},
                    {"percent_change", opt(c.percent)},
                    {"direction", c.direction ? DirectionName(*c.direction)
                                              : "undefined"}});
  }
  out["changes"] = std::move(rows);
  return out;
}

}  // namespace equity::report
