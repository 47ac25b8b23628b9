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

// Runs the eight acceptance criteria and prints one PASS or FAIL line for
// each, followed by the measurements behind it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <future>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "equity/core/data_dir.h"
#include "equity/core/error.h"
#include "equity/core/hash.h"
#include "equity/gateway/cost.h"
#include "equity/metrics/correlation.h"
#include "equity/metrics/fairness.h"
#include "equity/metrics/ranking.h"
#include "equity/perturb/detect.h"
#include "equity/perturb/lexicon.h"
#include "equity/perturb/variant.h"
#include "equity/report/audit.h"
#include "equity/report/config.h"
#include "equity/report/report.h"
#include "equity/train/loss.h"
#include "equity/train/spurious.h"
#include "equity/train/trainer.h"
#include "testing.h"

namespace equity {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void Check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "MISS ") + what);
  }
};

std::string Fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// 1. Metric oracles

double BruteNdcg(const std::vector<std::string>& ranking,
                 const std::map<std::string, int>& grades, std::size_t k) {
  double dcg = 0.0;
  for (std::size_t i = 0; i < k && i < ranking.size(); ++i) {
    const auto it = grades.find(ranking[i]);
    const int g = it == grades.end() ? 0 : it->second;
    dcg += (std::pow(2.0, g) - 1.0) / std::log2(i + 2.0);
  }
  std::vector<int> ideal;
  for (const auto& entry : grades) ideal.push_back(entry.second);
  std::sort(ideal.rbegin(), ideal.rend());
  double idcg = 0.0;
  for (std::size_t i = 0; i < k && i < ideal.size(); ++i) {
    idcg += (std::pow(2.0, ideal[i]) - 1.0) / std::log2(i + 2.0);
  }
  return dcg / idcg;
}

std::optional<double> BrutePair(const metrics::OutcomeTable& table, Category a,
                                Category b) {
  auto output = [](const metrics::QaOutcome& o) {
    if (o.failure) return "f" + std::to_string(static_cast<int>(*o.failure));
    return std::string(1, o.answer.value_or('-'));
  };
  double sum = 0;
  int scored = 0;
  for (const std::string& item : table.items()) {
    const metrics::Cell* base = table.Find(item, Category::kBase);
    const metrics::Cell* ca = table.Find(item, a);
    const metrics::Cell* cb = table.Find(item, b);
    if (!base || !ca || !cb || base->skipped || ca->skipped || cb->skipped) continue;
    const bool wa = !(ca->qa.correct && !ca->qa.failure) &&
                    output(ca->qa) != output(base->qa);
    const bool wb = !(cb->qa.correct && !cb->qa.failure) &&
                    output(cb->qa) != output(base->qa);
    ++scored;
    if (wa && wb && output(ca->qa) == output(cb->qa)) sum += 1;
    if (wa != wb) sum -= 1;
  }
  if (scored == 0) return std::nullopt;
  return sum / scored;
}

Outcome MetricOracles() {
  Outcome out;
  const Clock::time_point start = Clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  int instances = 0;
  while (instances < 500) {
    const int n = std::uniform_int_distribution<int>(1, 30)(rng);
    std::vector<std::string> ranking;
    for (int i = 0; i < n; ++i) ranking.push_back("n" + std::to_string(i));
    std::shuffle(ranking.begin(), ranking.end(), rng);
    corpus::Qrels qrels;
    std::map<std::string, int> grades;
    for (int i = 0; i < n + 5; ++i) {
      if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) continue;
      const int g = std::uniform_int_distribution<int>(0, 2)(rng);
      qrels.Set("t", "n" + std::to_string(i), g);
      grades["n" + std::to_string(i)] = g;
    }
    if (std::none_of(grades.begin(), grades.end(),
                     [](const auto& e) { return e.second > 0; })) {
      continue;
    }
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 15)(rng);
    worst = std::max(worst, std::abs(metrics::NdcgAtK(ranking, qrels, "t", k) -
                                     BruteNdcg(ranking, grades, k)));
    ++instances;
  }
  out.Check(worst <= 1e-12, Fmt("ndcg_at_k: max |diff| %.3g over 500 instances", worst));

  const std::vector<Category> categories = {Category::kBase, Category::kFemale,
                                            Category::kBlack, Category::kAsian,
                                            Category::kLowIncome};
  int mismatches = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t items = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
    const auto table = testing::RandomQaTable(rng, items, categories, 0.1);
    const auto matrix = metrics::ComputeCorrelationMatrix(table);
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      for (std::size_t j = 0; j < matrix.size(); ++j) {
        const auto expected =
            BrutePair(table, matrix.categories[i], matrix.categories[j]);
        std::optional<double> direct;
        try {
          direct = metrics::PairCorrelation(table, matrix.categories[i],
                                            matrix.categories[j]);
        } catch (const UndefinedMetricError&) {
        }
        if (matrix.at(i, j) != expected || direct != expected) ++mismatches;
      }
    }
  }
  out.Check(mismatches == 0,
            Fmt("pair_correlation/correlation_matrix: %.0f mismatches over 200 tables",
                mismatches));
  const double elapsed = Seconds(start);
  out.Check(elapsed < 10, Fmt("runtime %.2f s (< 10 s)", elapsed));
  return out;
}

// ---------------------------------------------------------------------------
// 2. Mock-bias recovery

report::RunConfig SyntheticQaConfig(const testing::TempDir& dir, std::size_t n,
                                    const nlohmann::json& profile) {
  testing::WriteQaJsonl(dir / "qa.jsonl", testing::SyntheticQaItems(n, 1));
  testing::WriteText(dir / "profile.json", profile.dump(2));
  report::RunConfig config = report::RunConfig::Defaults();
  config.Set("task", "qa");
  config.Set("qa", "qa.jsonl", dir.path());
  config.Set("profile", "profile.json", dir.path());
  config.Set("categories", "all");
  config.Set("seed", "11");
  return config;
}

Outcome MockBiasRecovery() {
  Outcome out;
  const Clock::time_point start = Clock::now();
  constexpr std::size_t kItems = 1000;
  constexpr std::uint64_t kSeed = 29;
  testing::TempDir dir;
  const nlohmann::json profile = {
      {"seed", kSeed},
      {"default", {{"qa_flip_rate", 0.10}}},
      {"categories", {{"Base", {{"qa_flip_rate", 0.10}}},
                      {"LowIncome", {{"qa_flip_rate", 0.30}}}}}};
  const report::AuditRun run =
      report::RunAudit(SyntheticQaConfig(dir, kItems, profile));
  out.Check(run.status == report::RunStatus::kComplete, "audit complete");

  double worst_rate = 0.0;
  int oracle_mismatches = 0;
  for (const metrics::CategoryMetric& metric : run.fairness.per_category) {
    const double configured = metric.category == Category::kLowIncome ? 0.30 : 0.10;
    if (!metric.value) {
      out.Check(false, std::string("no error rate for ") +
                           std::string(CategoryName(metric.category)));
      continue;
    }
    worst_rate = std::max(worst_rate, std::abs(*metric.value - configured));
    std::size_t simulated = 0;
    std::size_t counted = 0;
    for (const std::string& item : run.outcomes.items()) {
      const metrics::Cell* cell = run.outcomes.Find(item, metric.category);
      if (cell == nullptr || cell->skipped) continue;
      ++counted;
      if (StableUnit(kSeed, {item}) < configured) ++simulated;
    }
    const double oracle = static_cast<double>(simulated) / static_cast<double>(counted);
    if (std::abs(oracle - *metric.value) > 1e-12) ++oracle_mismatches;
  }
  out.Check(worst_rate <= 0.04,
            Fmt("max |error_rate - configured| = %.4f (<= 0.04)", worst_rate));
  out.Check(oracle_mismatches == 0,
            Fmt("per-category error rates equal the hash simulation (%.0f mismatches)",
                oracle_mismatches));
  const double dp = run.fairness.dp ? run.fairness.dp->gap : NAN;
  out.Check(std::abs(dp - 0.20) <= 0.05, Fmt("dp_gap = %.4f (0.20 +- 0.05)", dp));
  const double elapsed = Seconds(start);
  out.Check(elapsed < 60, Fmt("runtime %.2f s (< 60 s)", elapsed));
  return out;
}

// ---------------------------------------------------------------------------
// 3. Null-bias soundness

Outcome NullBias() {
  Outcome out;
  testing::TempDir dir;
  const nlohmann::json profile = {{"seed", 17}, {"default", {{"qa_flip_rate", 0.15}}}};
  const report::AuditRun run = report::RunAudit(SyntheticQaConfig(dir, 300, profile));
  const bool eo_zero = run.fairness.eo && run.fairness.eo->gap == 0.0;
  out.Check(eo_zero, Fmt("eo_gap = %.17g (exactly 0)",
                         run.fairness.eo ? run.fairness.eo->gap : NAN));
  int nonzero = 0;
  int entries = 0;
  if (run.correlation) {
    for (const auto& value : run.correlation->values) {
      ++entries;
      if (!value || *value != 0.0) ++nonzero;
    }
  }
  out.Check(run.correlation && nonzero == 0,
            Fmt("%.0f of %.0f correlation entries differ from 0", nonzero, entries));
  return out;
}

// ---------------------------------------------------------------------------
// 4. Combined loss correctness

Outcome LossCorrectness() {
  Outcome out;
  const Clock::time_point start = Clock::now();
  const double m = 1.0;
  out.Check(train::TripletLossFromDistances(0.0, m, m) == 0.0, "d(a,p) = 0, d(a,n) = m gives 0");
  bool equal_gives_margin = true;
  for (double d = 0.0; d <= 2.0; d += 0.01) {
    equal_gives_margin &= train::TripletLossFromDistances(d, d, m) == m;
  }
  out.Check(equal_gives_margin, "d(a,p) = d(a,n) gives m for d in [0, 2]");
  out.Check(train::TripletLossFromDistances(0.3, 0.8, m) == 0.5,
            "d(a,p) = 0.3, d(a,n) = 0.8 gives 0.5");

  train::SpuriousConfig corpus_config;
  corpus_config.items = 60;
  corpus_config.seed = 3;
  const auto data = train::ToTrainingData(train::MakeSpuriousCorpus(corpus_config));
  train::Batch batch;
  for (std::size_t i = 0; i < 8; ++i) {
    batch.qa.push_back(data.qa[i]);
    batch.triplets.push_back(data.triplets[i]);
  }
  for (std::size_t i = 0; i + 1 < 8; i += 2) {
    batch.rank.push_back({data.qa[i].question, data.qa[i].options[data.qa[i].gold],
                          data.qa[i + 1].options[(data.qa[i + 1].gold + 1) % 4]});
  }
  const train::EmbeddingModel model({}, 3);
  train::LossOptions options;
  options.lambda = 0.1;
  const train::GradCheckReport report =
      train::CheckBatchGradient(model, batch, options, 128, 1e-4, 5);
  for (const train::BlockCheck& block : report.blocks) {
    out.Check(block.coordinates >= 100 && block.max_relative_error <= 1e-3,
              block.block + Fmt(": %.0f coordinates, max relative error %.3g",
                                block.coordinates, block.max_relative_error));
  }
  out.Check(report.blocks.size() == 2, "embedding and projection blocks checked");
  const double elapsed = Seconds(start);
  out.Check(elapsed < 30, Fmt("runtime %.2f s (< 30 s)", elapsed));
  return out;
}

// ---------------------------------------------------------------------------
// 5. Mitigation direction

struct TrainedAudit {
  double anchor_positive = 0.0;
  double dp = NAN;
  double eo = NAN;
};

TrainedAudit TrainAndAudit(std::uint64_t seed, double lambda) {
  train::SpuriousConfig corpus_config;
  corpus_config.items = 2000;
  corpus_config.strength = 0.9;
  corpus_config.seed = seed;
  const auto corpus = train::MakeSpuriousCorpus(corpus_config);
  const auto data = train::ToTrainingData(corpus);
  train::TrainConfig config;
  config.lambda = lambda;
  config.seed = seed;
  train::EmbeddingModel model({}, seed);
  train::Train(model, data, config);
  const metrics::FairnessReport fairness =
      metrics::ComputeFairness(train::AuditModel(model, corpus));
  TrainedAudit result;
  result.anchor_positive = train::MeanAnchorPositiveDistance(model, data.triplets);
  if (fairness.dp) result.dp = fairness.dp->gap;
  if (fairness.eo) result.eo = fairness.eo->gap;
  return result;
}

Outcome MitigationDirection() {
  Outcome out;
  const Clock::time_point start = Clock::now();
  std::vector<std::future<TrainedAudit>> runs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (double lambda : {0.0, 0.1}) {
      runs.push_back(std::async(std::launch::async, TrainAndAudit, seed, lambda));
    }
  }
  int closer = 0, dp_not_larger = 0, eo_not_larger = 0, dp_smaller = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const TrainedAudit off = runs[2 * (seed - 1)].get();
    const TrainedAudit on = runs[2 * (seed - 1) + 1].get();
    if (on.anchor_positive < off.anchor_positive) ++closer;
    if (on.dp <= off.dp) ++dp_not_larger;
    if (on.eo <= off.eo) ++eo_not_larger;
    if (on.dp < off.dp) ++dp_smaller;
    out.notes.push_back(
        "     seed " + std::to_string(seed) +
        Fmt(": d(a,p) %.4f -> %.4f", off.anchor_positive, on.anchor_positive) +
        Fmt(", dp_gap %.4f -> %.4f", off.dp, on.dp) +
        Fmt(", eo_gap %.4f -> %.4f", off.eo, on.eo));
  }
  out.Check(closer == 5, Fmt("(a) d(anchor, positive) smaller in %.0f/5 seeds", closer));
  out.Check(dp_not_larger == 5 && eo_not_larger == 5,
            Fmt("(b) dp_gap no larger in %.0f/5, eo_gap no larger in %.0f/5 seeds",
                dp_not_larger, eo_not_larger));
  out.Check(dp_smaller >= 4, Fmt("(b) dp_gap strictly smaller in %.0f/5 seeds (>= 4)",
                                 dp_smaller));
  const double elapsed = Seconds(start);
  out.Check(elapsed < 300, Fmt("runtime %.1f s (< 300 s)", elapsed));
  return out;
}

// ---------------------------------------------------------------------------
// 6. Perturbation round-trip

Outcome PerturbationRoundTrip() {
  Outcome out;
  const perturb::Lexicon& lexicon = perturb::Lexicon::Default();
  std::mt19937_64 rng(2024);
  int violations = 0, variants = 0, triplets = 0, ordering = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::string text = testing::RandomVignette(rng);
    const auto set = perturb::GenerateVariants("r" + std::to_string(i), text,
                                               NonBaseCategories(), lexicon, i);
    if (!perturb::DetectedCategories(set.base.text, lexicon).empty()) ++violations;
    if (perturb::ReplayEdits(text, set.base.provenance) != set.base.text) ++violations;
    for (const perturb::Variant& v : set.variants) {
      ++variants;
      const std::set<Category> want(v.factors.begin(), v.factors.end());
      if (perturb::DetectedCategories(v.text, lexicon) != want) ++violations;
      if (perturb::ReplayEdits(set.base.text, v.provenance) != v.text) ++violations;
      if (!perturb::DetectedCategories(perturb::NeutralizeText(v.text, lexicon), lexicon)
               .empty()) {
        ++violations;
      }
    }
    for (const perturb::Triplet& t :
         perturb::BuildTriplets(set.base, set.variants, lexicon, i)) {
      ++triplets;
      if (!(t.anchor.factors.empty() && t.positive.factors.size() == 1 &&
            t.negative.factors.size() > t.positive.factors.size())) {
        ++ordering;
      }
    }
  }
  out.Check(violations == 0, Fmt("%.0f round-trip violations over %.0f variants",
                                 violations, variants));
  out.Check(ordering == 0 && triplets > 0,
            Fmt("%.0f of %.0f triplets break the factor-count ordering", ordering,
                triplets));

  int conflicts = 0, blocked = 0;
  for (corpus::SexRestriction restriction :
       {corpus::SexRestriction::kFemale, corpus::SexRestriction::kMale}) {
    corpus::TrialDoc trial;
    trial.id = "sex-restricted";
    trial.sex_restriction = restriction;
    const Category conflicting = restriction == corpus::SexRestriction::kFemale
                                     ? Category::kMale
                                     : Category::kFemale;
    for (int i = 0; i < 50; ++i) {
      const std::string text = testing::RandomVignette(rng);
      const auto set = perturb::GenerateVariants("g" + std::to_string(i), text,
                                                 {conflicting}, lexicon, i, {&trial});
      ++conflicts;
      if (!perturb::GuardAllows(conflicting, trial) && set.variants.empty()) ++blocked;
    }
  }
  out.Check(blocked == conflicts,
            Fmt("guard blocked %.0f of %.0f sex-conflicting injections", blocked,
                conflicts));
  return out;
}

// ---------------------------------------------------------------------------
// 7. Cost accounting

Outcome CostAccounting() {
  Outcome out;
  gateway::CostTable table;
  table.Set("gpt-4", {0.06, 0, 0});
  table.Set("local", {std::nullopt, 0.01, 0.02});
  std::vector<gateway::UsageRecord> flat(100, {"gpt-4", {}});
  const std::string flat_usd = gateway::FormatUsd(gateway::EstimateCost(flat, table).total_usd);
  out.Check(flat_usd == "6.00", "100 queries x 0.06 USD = " + flat_usd + " USD");

  // Record i uses 1000 i prompt and 100 i completion tokens: 55000 and 5500
  // in total, 55 x 0.01 + 5.5 x 0.02 = 0.66 USD.
  std::vector<gateway::UsageRecord> tokens;
  for (int i = 1; i <= 10; ++i) {
    gateway::UsageRecord record{"local", {}};
    record.usage.prompt_tokens = 1000 * i;
    record.usage.completion_tokens = 100 * i;
    tokens.push_back(record);
  }
  const auto summary = gateway::EstimateCost(tokens, table);
  const std::string token_usd = gateway::FormatUsd(summary.total_usd);
  out.Check(token_usd == "0.66" && summary.per_backend.at("local").prompt_tokens == 55000,
            "10 token-rate records = " + token_usd + " USD (hand computation 0.66)");
  return out;
}

// ---------------------------------------------------------------------------
// 8. Determinism

std::map<std::string, std::string> DirectoryBytes(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().filename() == "timing.json") continue;
    files[fs::relative(entry.path(), dir).string()] = testing::ReadText(entry.path());
  }
  return files;
}

Outcome Determinism() {
  Outcome out;
  testing::TempDir dir;
  for (const char* name : {"qa.conf", "ctm.conf"}) {
    const report::RunConfig config =
        report::RunConfig::Load(DataDir() / "sample" / name);
    std::vector<std::map<std::string, std::string>> trees;
    for (const char* copy : {"first", "second"}) {
      report::AuditRun run = report::RunAudit(config);
      const fs::path root = dir / (std::string(name) + "." + copy);
      const fs::path written = report::WriteAuditRun(run, root);
      report::EmitReport(run, {"csv", "json", "svg"}, written);
      trees.push_back(DirectoryBytes(root));
    }
    out.Check(trees[0] == trees[1] && !trees[0].empty(),
              std::string(name) + Fmt(": %.0f files byte-identical across two runs",
                                      trees[0].size()));
  }
  return out;
}

}  // namespace
}  // namespace equity

int main() {
  using equity::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"metric oracles", equity::MetricOracles},
      {"mock-bias recovery", equity::MockBiasRecovery},
      {"null-bias soundness", equity::NullBias},
      {"triplet loss and batch gradient", equity::LossCorrectness},
      {"mitigation direction", equity::MitigationDirection},
      {"perturbation round-trip", equity::PerturbationRoundTrip},
      {"cost accounting", equity::CostAccounting},
      {"determinism", equity::Determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.Check(false, std::string("threw: ") + e.what());
    }
    if (!outcome.pass) ++failed;
    std::cout << (outcome.pass ? "PASS " : "FAIL ") << (i + 1) << " "
              << criteria[i].first << "\n";
    for (const std::string& note : outcome.notes) std::cout << "       " << note << "\n";
    std::cout.flush();
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size()
            << " criteria met\n";
  return 0;
}
