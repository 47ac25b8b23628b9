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

#include <regex>

#include <gtest/gtest.h>

#include "equity/core/data_dir.h"
#include "equity/core/error.h"
#include "equity/corpus/io.h"
#include "equity/gateway/backend.h"
#include "equity/report/audit.h"
#include "equity/report/config.h"
#include "equity/report/report.h"
#include "testing.h"

namespace equity::report {
namespace {

namespace fs = std::filesystem;
using testing::ReadText;
using testing::TempDir;
using testing::WriteText;

fs::path Sample(const std::string& name) { return DataDir() / "sample" / name; }

// ---------------------------------------------------------------------------
// Config

TEST(ConfigTest, LoadResolvesRelativePaths) {
  const RunConfig config = RunConfig::Load(Sample("qa.conf"));
  EXPECT_EQ(config.task, Task::kQa);
  EXPECT_EQ(config.seed, 7u);
  EXPECT_EQ(config.categories.size(), 21u);
  EXPECT_TRUE(fs::exists(config.qa));
  EXPECT_TRUE(fs::exists(config.profile));
  EXPECT_NO_THROW(config.Validate());
}

TEST(ConfigTest, SetErrors) {
  RunConfig config = RunConfig::Defaults();
  EXPECT_THROW(config.Set("colour", "blue"), UsageError);
  EXPECT_THROW(config.Set("pool_size", "many"), ValidationError);
  EXPECT_THROW(config.Set("correlation", "loose"), ValidationError);
  config.Set("categories", "Male");
  EXPECT_EQ(config.categories,
            (std::vector<Category>{Category::kBase, Category::kMale}));
}

TEST(ConfigTest, CommentsAndBlankLines) {
  TempDir dir;
  WriteText(dir / "run.conf", "# heading\n\ntask = ctm   # trailing\npool_size=5\n");
  const RunConfig config = RunConfig::Load(dir / "run.conf");
  EXPECT_EQ(config.task, Task::kCtm);
  EXPECT_EQ(config.pool_size, 5u);
  WriteText(dir / "bad.conf", "task qa\n");
  EXPECT_THROW(RunConfig::Load(dir / "bad.conf"), Error);
}

TEST(ConfigTest, SnapshotHashIgnoresOutputSettings) {
  RunConfig a = RunConfig::Load(Sample("qa.conf"));
  RunConfig b = a;
  b.out = "/elsewhere";
  b.formats = {"json"};
  EXPECT_EQ(a.SnapshotHash(), b.SnapshotHash());
  b.seed = 8;
  EXPECT_NE(a.SnapshotHash(), b.SnapshotHash());
  EXPECT_EQ(a.Snapshot()["inputs"]["qa"], FileDigest(a.qa));
}

TEST(ConfigTest, FormatList) {
  EXPECT_EQ(ParseFormats("svg, csv,svg"), (std::vector<std::string>{"svg", "csv"}));
  EXPECT_TRUE(ParseFormats("").empty());
  EXPECT_THROW(ParseFormats("csv,pdf"), UsageError);
}

// ---------------------------------------------------------------------------
// Audits

TEST(AuditTest, QaCellsAndDeterminism) {
  const RunConfig config = RunConfig::Load(Sample("qa.conf"));
  const AuditRun a = RunAudit(config);
  const AuditRun b = RunAudit(config);
  EXPECT_EQ(a.status, RunStatus::kComplete);
  EXPECT_EQ(a.outcomes.items().size(), 8u);
  EXPECT_EQ(a.outcomes.size(), 8u * 21u);
  EXPECT_EQ(a.config_hash, config.SnapshotHash());
  EXPECT_EQ(a.outcomes.ToJson().dump(), b.outcomes.ToJson().dump());
  EXPECT_EQ(a.fairness.ToJson().dump(), b.fairness.ToJson().dump());
  EXPECT_EQ(a.cost.dump(), b.cost.dump());
}

TEST(AuditTest, CtmSkipsSexRestrictedMismatch) {
  const RunConfig config = RunConfig::Load(Sample("ctm.conf"));
  const AuditRun run = RunAudit(config);
  EXPECT_EQ(run.status, RunStatus::kComplete);
  const metrics::Cell* cell = run.outcomes.Find("t3", Category::kMale);
  ASSERT_NE(cell, nullptr);
  EXPECT_TRUE(cell->skipped);
  EXPECT_FALSE(run.outcomes.Find("t3", Category::kFemale)->skipped);
  EXPECT_FALSE(run.rankings.empty());
}

// Four topics with 20 judged trials each. Every trial carries 20 criteria
// so the mock's label encoding gives each pool position a distinct score.
RunConfig DemotionConfig(const TempDir& dir, int demote) {
  const std::vector<std::string> notes = {
      "The patient is a 58-year-old adult with type 2 diabetes.",
      "The patient is a 34-year-old adult with moderate persistent asthma.",
      "The patient is a 67-year-old adult with atrial fibrillation.",
      "The patient is a 45-year-old adult with chronic migraine."};
  std::string topics, trials, qrels;
  for (std::size_t t = 0; t < notes.size(); ++t) {
    const std::string tid = "t" + std::to_string(t);
    topics += nlohmann::json{{"id", tid}, {"text", notes[t]}}.dump() + "\n";
    for (int k = 0; k < 20; ++k) {
      const std::string nid = "N" + std::to_string(t) + "_" + std::to_string(100 + k);
      nlohmann::json trial = {{"id", nid}, {"title", "Trial " + nid}, {"summary", "S"}};
      std::vector<std::string> inc, exc;
      for (int c = 0; c < 10; ++c) {
        inc.push_back("inclusion " + std::to_string(c));
        exc.push_back("exclusion " + std::to_string(c));
      }
      trial["inclusion"] = inc;
      trial["exclusion"] = exc;
      trials += trial.dump() + "\n";
      const int grade = k % 5 == 0 ? 2 : (k % 7 == 0 ? 1 : 0);
      qrels += tid + " 0 " + nid + " " + std::to_string(grade) + "\n";
    }
  }
  WriteText(dir / "topics.jsonl", topics);
  WriteText(dir / "trials.jsonl", trials);
  WriteText(dir / "qrels.txt", qrels);
  WriteText(dir / "profile.json",
            nlohmann::json{{"seed", 5},
                           {"default", {{"rank_demote", 0}}},
                           {"categories", {{"Unemployed", {{"rank_demote", demote}}}}}}
                .dump());
  RunConfig config = RunConfig::Defaults();
  config.Set("task", "ctm");
  config.Set("topics", "topics.jsonl", dir.path());
  config.Set("trials", "trials.jsonl", dir.path());
  config.Set("qrels", "qrels.txt", dir.path());
  config.Set("profile", "profile.json", dir.path());
  config.Set("categories", "White,Unemployed");
  config.Set("pool_size", "20");
  config.Set("seed", "3");
  return config;
}

TEST(AuditTest, EqualOpportunityMatchesDirectSimulation) {
  TempDir dir;
  const RunConfig config = DemotionConfig(dir, 8);
  const AuditRun run = RunAudit(config);
  ASSERT_EQ(run.status, RunStatus::kComplete) << run.error;

  // Rebuild the mock's intended orders and count relevant trials in the top
  // ten without going through the ranker or the metrics module.
  const auto trials = corpus::LoadTrials(config.trials);
  const auto qrels = corpus::LoadQrels(config.qrels);
  gateway::MockGroundTruth truth;
  truth.qrels = qrels;
  for (const auto& topic : run.outcomes.items()) {
    for (const auto* trial :
         CandidatePool(topic, trials, qrels, config.pool_size, config.seed)) {
      truth.ctm_pools[topic].push_back(trial->id);
    }
  }
  const gateway::MockBackend mock(gateway::BiasProfile::Load(config.profile), truth);
  std::map<Category, std::pair<std::size_t, std::size_t>> counts;
  for (Category category : {Category::kBase, Category::kWhite, Category::kUnemployed}) {
    for (const auto& topic : run.outcomes.items()) {
      const auto order = mock.IntendedOrder(topic, category);
      for (std::size_t i = 0; i < order.size(); ++i) {
        if (qrels.Grade(topic, order[i]).value_or(0) <= 0) continue;
        ++counts[category].second;
        if (i < 10) ++counts[category].first;
      }
    }
  }
  ASSERT_TRUE(run.fairness.eo.has_value());
  for (const metrics::Rate& rate : run.fairness.eo->rates) {
    const auto [found, total] = counts.at(rate.category);
    EXPECT_EQ(rate.numerator, found) << CategoryName(rate.category);
    EXPECT_EQ(rate.denominator, total);
  }
  const double base = static_cast<double>(counts[Category::kBase].first) /
                      counts[Category::kBase].second;
  const double demoted = static_cast<double>(counts[Category::kUnemployed].first) /
                         counts[Category::kUnemployed].second;
  EXPECT_LT(demoted, base);
  EXPECT_NEAR(run.fairness.eo->gap, base - demoted, 1e-12);
}

// Fails every request of one category; the rest go to the mock.
class FlakyBackend : public gateway::Backend {
 public:
  FlakyBackend(gateway::Backend& inner, Category broken)
      : inner_(inner), broken_(broken) {}
  std::string name() const override { return inner_.name(); }
  std::string fingerprint() const override { return inner_.fingerprint(); }
  gateway::RawReply Complete(const gateway::ModelRequest& request) override {
    if (request.context.category == broken_) {
      throw TransportError("connection refused", 0, 4);
    }
    return inner_.Complete(request);
  }

 private:
  gateway::Backend& inner_;
  Category broken_;
};

TEST(AuditTest, TransportFailuresGivePartialRun) {
  RunConfig config = RunConfig::Load(Sample("qa.conf"));
  config.Set("categories", "Male,Female,Homeless");
  const auto items = corpus::LoadQa(config.qa, config.qa_format);
  gateway::MockGroundTruth truth;
  for (const auto& item : items) truth.qa_gold[item.id] = item.gold;
  gateway::MockBackend mock(gateway::BiasProfile::Load(config.profile), truth);
  FlakyBackend flaky(mock, Category::kHomeless);
  const AuditRun run = RunAudit(config, {&flaky, nullptr});
  EXPECT_EQ(run.status, RunStatus::kPartial);
  EXPECT_EQ(run.failures.at("transport"), items.size());
  for (const auto& item : run.outcomes.items()) {
    EXPECT_TRUE(run.outcomes.Find(item, Category::kHomeless)->skipped);
    EXPECT_FALSE(run.outcomes.Find(item, Category::kMale)->skipped);
  }
  EXPECT_EQ(run.CompletedCells().size(), items.size() * 3);
}

TEST(AuditTest, UnknownCostEntryRejectedBeforeRunning) {
  TempDir dir;
  WriteText(dir / "cost.json", R"({"other": {"per_query": 0.01}})");
  RunConfig config = RunConfig::Load(Sample("qa.conf"));
  config.cost_table = dir / "cost.json";
  EXPECT_THROW(RunAudit(config), ValidationError);
}

TEST(CandidatePoolTest, JudgedFirstThenSeededFill) {
  std::vector<corpus::TrialDoc> trials(6);
  for (int i = 0; i < 6; ++i) trials[i].id = "n" + std::to_string(i);
  corpus::Qrels qrels;
  qrels.Set("t", "n4", 2);
  qrels.Set("t", "n1", 0);
  const auto pool = CandidatePool("t", trials, qrels, 4, 1);
  ASSERT_EQ(pool.size(), 4u);
  EXPECT_EQ(pool[0]->id, "n1");
  EXPECT_EQ(pool[1]->id, "n4");
  EXPECT_EQ(CandidatePool("t", trials, qrels, 4, 1), pool);
  EXPECT_EQ(CandidatePool("t", trials, qrels, 50, 1).size(), 6u);
}

// ---------------------------------------------------------------------------
// Persistence and reports

TEST(RunFilesTest, RoundTripAndTamperDetection) {
  TempDir dir;
  AuditRun run = RunAudit(RunConfig::Load(Sample("qa.conf")));
  const fs::path written = WriteAuditRun(run, dir.path());
  EXPECT_EQ(written.filename().string(), run.id);
  EXPECT_EQ(run.id.size(), 16u);
  const AuditRun back = LoadAuditRun(written);
  EXPECT_EQ(back.config_hash, run.config_hash);
  EXPECT_EQ(back.outcomes.ToJson().dump(), run.outcomes.ToJson().dump());
  EXPECT_EQ(ReportJson(back).dump(), ReportJson(run).dump());
  EXPECT_EQ(MetricsWideCsv(back), MetricsWideCsv(run));
  EXPECT_EQ(HeatmapSvg(back), HeatmapSvg(run));

  std::string outcomes = ReadText(written / "outcomes.json");
  outcomes[outcomes.size() / 2] ^= 1;
  WriteText(written / "outcomes.json", outcomes);
  try {
    LoadAuditRun(written);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("outcomes.json"), std::string::npos);
  }
}

TEST(RunFilesTest, RewriteIsByteIdentical) {
  TempDir dir;
  const RunConfig config = RunConfig::Load(Sample("qa.conf"));
  AuditRun a = RunAudit(config);
  AuditRun b = RunAudit(config);
  const fs::path pa = WriteAuditRun(a, dir / "a");
  const fs::path pb = WriteAuditRun(b, dir / "b");
  EXPECT_EQ(pa.filename(), pb.filename());
  for (const char* name : {"config.json", "outcomes.json", "fairness.json",
                           "correlation.json", "cost.json", "manifest.json"}) {
    EXPECT_EQ(ReadText(pa / name), ReadText(pb / name)) << name;
  }
}

TEST(ReportTest, FilesPerFormat) {
  TempDir dir;
  const AuditRun run = RunAudit(RunConfig::Load(Sample("qa.conf")));
  EXPECT_TRUE(EmitReport(run, {}, dir / "none").empty());
  EXPECT_FALSE(fs::exists(dir / "none"));
  EXPECT_THROW(EmitReport(run, {"pdf"}, dir / "bad"), UsageError);
  const auto files = EmitReport(run, {"csv", "json", "svg"}, dir / "all");
  EXPECT_EQ(files.size(), 7u);
  const std::string wide = ReadText(dir / "all" / "metrics_wide.csv");
  EXPECT_EQ(wide.rfind("# config_hash=" + run.config_hash, 0), 0u);
  EXPECT_NE(ReadText(dir / "all" / "radar.svg").find(run.config_hash), std::string::npos);
}

TEST(ReportTest, RadarAxesFollowCategoryOrder) {
  const AuditRun run = RunAudit(RunConfig::Load(Sample("qa.conf")));
  const std::string svg = RadarSvg(run);
  const std::regex axis(R"re(class="axis" data-category="([^"]+)")re");
  std::vector<std::string> names;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), axis);
       it != std::sregex_iterator(); ++it) {
    names.push_back((*it)[1]);
  }
  ASSERT_EQ(names.size(), 21u);
  for (std::size_t i = 0; i < names.size(); ++i) {
    EXPECT_EQ(names[i], CategoryName(kAllCategories[i]));
  }
}

TEST(ReportTest, HeatmapColors) {
  auto channels = [](const std::string& hex) {
    return std::array<int, 3>{std::stoi(hex.substr(1, 2), nullptr, 16),
                              std::stoi(hex.substr(3, 2), nullptr, 16),
                              std::stoi(hex.substr(5, 2), nullptr, 16)};
  };
  EXPECT_EQ(HeatmapColor(0.0), "#ffffff");
  EXPECT_EQ(HeatmapColor(-1.0), "#2166ac");
  EXPECT_EQ(HeatmapColor(1.0), "#b2182b");
  EXPECT_EQ(HeatmapColor(7.0), HeatmapColor(1.0));
  const auto cool = channels(HeatmapColor(-0.26));
  EXPECT_GT(cool[2], cool[0]);
  const auto warm = channels(HeatmapColor(0.4));
  EXPECT_GT(warm[0], warm[2]);
}

// ---------------------------------------------------------------------------
// Compare

// Base is always right on `items` questions; Black misses `misses` of them.
AuditRun EoRun(std::size_t items, std::size_t misses, const std::string& qa_digest) {
  metrics::OutcomeTable table(Task::kQa);
  for (std::size_t i = 0; i < items; ++i) {
    const std::string id = "q" + std::to_string(i);
    table.SetQa(id, Category::kBase, {'A', true, std::nullopt});
    table.SetQa(id, Category::kBlack,
                i < misses ? metrics::QaOutcome{'B', false, std::nullopt}
                           : metrics::QaOutcome{'A', true, std::nullopt});
  }
  nlohmann::ordered_json snapshot = {{"task", "qa"},
                                     {"inputs", {{"qa", qa_digest}}},
                                     {"categories", {"Base", "Black"}},
                                     {"seed", misses}};
  return MakeRun(std::move(snapshot), std::move(table));
}

const MetricChange& Find(const Comparison& c, const std::string& metric) {
  for (const MetricChange& change : c.changes) {
    if (change.metric == metric) return change;
  }
  throw std::runtime_error("no change for " + metric);
}

TEST(CompareTest, PercentChangeOfGap) {
  const Comparison c = CompareRuns(EoRun(1000, 100, "d"), EoRun(1000, 72, "d"));
  const MetricChange& eo = Find(c, "eo_gap");
  EXPECT_NEAR(*eo.before, 0.10, 1e-12);
  EXPECT_NEAR(*eo.after, 0.072, 1e-12);
  EXPECT_NEAR(*eo.percent, -28.0, 1e-9);
  EXPECT_EQ(eo.direction, Direction::kImproved);
  const Comparison d = CompareRuns(EoRun(1000, 100, "d"), EoRun(1000, 68, "d"));
  EXPECT_NEAR(*Find(d, "eo_gap").percent, -32.0, 1e-9);
  EXPECT_EQ(Find(d, "error_rate:Black").direction, Direction::kImproved);
}

TEST(CompareTest, IdenticalRunsUnchanged) {
  const Comparison c = CompareRuns(EoRun(50, 5, "d"), EoRun(50, 5, "d"));
  for (const MetricChange& change : c.changes) {
    if (change.direction) EXPECT_EQ(*change.direction, Direction::kUnchanged) << change.metric;
  }
  EXPECT_EQ(c.before_hash, c.after_hash);
}

TEST(CompareTest, DifferentDatasetsRejected) {
  EXPECT_THROW(CompareRuns(EoRun(50, 5, "d1"), EoRun(50, 5, "d2")), ComparabilityError);
}

TEST(CompareTest, ChangeEdgeCases) {
  const MetricChange zero = Change("x", true, 0.0, 0.1);
  EXPECT_FALSE(zero.percent.has_value());
  EXPECT_EQ(zero.direction, Direction::kWorsened);
  const MetricChange missing = Change("x", true, std::nullopt, 0.1);
  EXPECT_FALSE(missing.direction.has_value());
  EXPECT_EQ(Change("ndcg", false, 0.5, 0.6).direction, Direction::kImproved);
}

}  // namespace
}  // namespace equity::report
