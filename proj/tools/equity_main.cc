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

// equity: command-line front end for counterfactual fairness audits.
//
//   equity ingest    --config run.conf          canonicalize and profile data
//   equity perturb   --config run.conf          write variants and triplets
//   equity audit     --config run.conf          run an audit, write reports
//   equity train     --lambda 0.1 --out runs    train on the synthetic corpus
//   equity gradcheck                            check the batch gradient
//   equity report    <run-dir> --formats svg    re-emit reports from a run
//   equity compare   <before-dir> <after-dir>   metric deltas between runs
//
// Exit codes: 0 success, 1 other failure (including a failed gradient
// check), 2 validation or usage error, 3 transport or protocol error,
// 4 partial run.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "equity/core/diagnostics.h"
#include "equity/core/error.h"
#include "equity/core/hash.h"
#include "equity/corpus/analysis.h"
#include "equity/corpus/io.h"
#include "equity/perturb/io.h"
#include "equity/perturb/variant.h"
#include "equity/report/audit.h"
#include "equity/report/config.h"
#include "equity/report/report.h"
#include "equity/train/spurious.h"
#include "equity/train/trainer.h"

namespace {

using equity::report::RunConfig;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitTransport = 3;
constexpr int kExitPartial = 4;

struct Overrides {
  std::string config;
  std::optional<std::string> task;
  std::optional<std::string> backend;
  std::optional<std::string> categories;
  std::optional<std::string> seed;
  std::optional<std::string> out;
  std::optional<std::string> formats;  // may be empty: no report files
};

void AddOverrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "key = value run configuration");
  cmd->add_option("--task", o.task, "qa or ctm");
  cmd->add_option("--backend", o.backend, "mock or http");
  cmd->add_option("--categories", o.categories,
                  "comma-separated categories, 'all' or 'nonbase'");
  cmd->add_option("--seed", o.seed, "perturbation and pooling seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--formats", o.formats, "subset of csv,json,svg");
}

RunConfig ResolveConfig(const Overrides& o) {
  RunConfig config =
      o.config.empty() ? RunConfig::Defaults() : RunConfig::Load(o.config);
  const std::pair<const char*, const std::optional<std::string>*> settings[] = {
      {"task", &o.task},     {"backend", &o.backend},
      {"categories", &o.categories}, {"seed", &o.seed},
      {"out", &o.out},       {"formats", &o.formats}};
  for (const auto& [key, value] : settings) {
    if (*value) config.Set(key, **value);
  }
  return config;
}

void DrainWarnings(const equity::Diagnostics& diagnostics) {
  for (const std::string& warning : diagnostics.warnings()) {
    std::cerr << "warning: " << warning << "\n";
  }
}

void WriteJsonFile(const std::filesystem::path& path, const ordered_json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw equity::ValidationError("cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

int Ingest(const Overrides& o) {
  RunConfig config = ResolveConfig(o);
  equity::Diagnostics diagnostics;
  const auto lexicon = equity::perturb::Lexicon::Load(config.lexicon);
  const std::filesystem::path out = config.out / "ingest";
  std::filesystem::create_directories(out);
  equity::corpus::CompositionReport stats;
  if (config.task == equity::Task::kQa) {
    auto items = equity::corpus::LoadQa(config.qa, config.qa_format);
    auto filtered = equity::corpus::FilterDemographicEssential(items, lexicon);
    equity::corpus::SaveQa(out / "qa.jsonl", filtered.kept);
    equity::corpus::SaveQa(out / "qa_removed.jsonl", filtered.removed);
    stats = equity::corpus::CorpusStats(config.qa.stem().string(),
                                        filtered.kept, lexicon);
    std::cout << "kept " << filtered.kept.size() << " of " << items.size()
              << " questions\n";
  } else {
    auto topics = equity::corpus::LoadTopics(config.topics);
    auto trials = equity::corpus::LoadTrials(config.trials);
    auto qrels = equity::corpus::LoadQrels(config.qrels, &diagnostics);
    equity::corpus::SaveTopics(out / "topics.jsonl", topics);
    equity::corpus::SaveTrials(out / "trials.jsonl", trials);
    equity::corpus::SaveQrels(out / "qrels.txt", qrels);
    stats = equity::corpus::CorpusStats(config.topics.stem().string(), topics,
                                        lexicon);
    std::cout << topics.size() << " topics, " << trials.size() << " trials, "
              << qrels.size() << " judgments\n";
  }
  WriteJsonFile(out / "stats.json", equity::corpus::ToJson(stats));
  DrainWarnings(diagnostics);
  std::cout << out.string() << "\n";
  return kExitOk;
}

int Perturb(const Overrides& o, bool exhaustive) {
  RunConfig config = ResolveConfig(o);
  const auto lexicon = equity::perturb::Lexicon::Load(config.lexicon);
  std::vector<std::pair<std::string, std::string>> texts;
  if (config.task == equity::Task::kQa) {
    for (const auto& item : equity::corpus::LoadQa(config.qa, config.qa_format)) {
      texts.emplace_back(item.id, item.question);
    }
  } else {
    for (const auto& topic : equity::corpus::LoadTopics(config.topics)) {
      texts.emplace_back(topic.id, topic.text);
    }
  }
  if (config.limit > 0 && texts.size() > config.limit) texts.resize(config.limit);

  std::vector<equity::Category> injected;
  for (equity::Category c : config.categories) {
    if (c != equity::Category::kBase) injected.push_back(c);
  }
  std::vector<equity::perturb::Variant> variants;
  std::vector<equity::perturb::Triplet> triplets;
  ordered_json skipped = ordered_json::array();
  for (const auto& [id, text] : texts) {
    auto set = equity::perturb::GenerateVariants(id, text, injected, lexicon,
                                                 config.seed);
    for (const auto& skip : set.skipped) {
      skipped.push_back(equity::perturb::ToJson(skip));
    }
    auto built = equity::perturb::BuildTriplets(set.base, set.variants, lexicon,
                                                config.seed, exhaustive);
    variants.push_back(set.base);
    variants.insert(variants.end(), set.variants.begin(), set.variants.end());
    triplets.insert(triplets.end(), built.begin(), built.end());
  }
  const std::filesystem::path out = config.out / "perturb";
  std::filesystem::create_directories(out);
  std::ofstream variants_out(out / "variants.jsonl", std::ios::binary);
  equity::perturb::WriteVariants(variants_out, variants);
  std::ofstream triplets_out(out / "triplets.jsonl", std::ios::binary);
  equity::perturb::WriteTriplets(triplets_out, triplets);
  WriteJsonFile(out / "skipped.json", skipped);
  std::cout << variants.size() << " variants, " << triplets.size()
            << " triplets, " << skipped.size() << " skipped\n"
            << out.string() << "\n";
  return kExitOk;
}

int Audit(const Overrides& o) {
  RunConfig config = ResolveConfig(o);
  equity::Diagnostics diagnostics;
  equity::report::AuditRun run =
      equity::report::RunAudit(config, {nullptr, &diagnostics});
  const auto dir = equity::report::WriteAuditRun(run, config.out);
  equity::report::EmitReport(run, config.formats, dir);
  DrainWarnings(diagnostics);
  std::cout << dir.string() << "\n";
  if (run.status == equity::report::RunStatus::kPartial) {
    std::cerr << "partial run: " << run.error << "\n";
    return kExitPartial;
  }
  return kExitOk;
}

struct TrainOptions {
  double lambda = 0.1;
  int epochs = 10;
  std::size_t items = 2000;
  std::size_t batch = 32;
  std::uint64_t seed = 1;
  std::string schedule = "joint";
  std::string reduction = "sum";
  std::string surrogate = "logistic";
  bool raw_rows = false;
  std::string out = "runs";
  std::string formats = "csv,json,svg";
};

equity::train::TrainConfig ToTrainConfig(const TrainOptions& t) {
  equity::train::TrainConfig config;
  config.lambda = t.lambda;
  config.epochs = t.epochs;
  config.batch_size = t.batch;
  config.seed = t.seed;
  config.normalize_rows = !t.raw_rows;
  config.schedule = t.schedule == "alternating"
                        ? equity::train::Schedule::kAlternating
                        : equity::train::Schedule::kJoint;
  config.triplet_reduction = t.reduction == "mean"
                                 ? equity::train::Reduction::kMean
                                 : equity::train::Reduction::kSum;
  config.rank_surrogate = t.surrogate == "hinge"
                              ? equity::train::RankSurrogate::kHinge
                              : equity::train::RankSurrogate::kLogistic;
  config.Validate();
  return config;
}

int Train(const TrainOptions& t) {
  const auto formats = equity::report::ParseFormats(t.formats);
  const equity::train::TrainConfig config = ToTrainConfig(t);
  equity::train::SpuriousConfig corpus_config;
  corpus_config.items = t.items;
  corpus_config.seed = t.seed;
  const auto corpus = equity::train::MakeSpuriousCorpus(corpus_config);
  const auto data = equity::train::ToTrainingData(corpus);

  equity::train::EmbeddingModel model({}, t.seed);
  const auto result = equity::train::Train(model, data, config);

  ordered_json synthetic = {{"items", corpus_config.items},
                            {"strength", corpus_config.strength},
                            {"signal", corpus_config.signal},
                            {"symptoms", corpus_config.symptoms},
                            {"holdout_fraction", corpus_config.holdout_fraction},
                            {"seed", corpus_config.seed}};
  ordered_json snapshot;
  snapshot["task"] = "qa";
  snapshot["inputs"] = {{"synthetic", equity::Sha256Hex(synthetic.dump())}};
  ordered_json categories = ordered_json::array({"Base"});
  for (auto c : equity::train::SpuriousRaceCategories()) {
    categories.push_back(std::string(equity::CategoryName(c)));
  }
  snapshot["categories"] = categories;
  snapshot["seed"] = t.seed;
  snapshot["correlation"] = "default";
  snapshot["corpus"] = synthetic;
  snapshot["train"] = config.ToJson();

  auto run = equity::report::MakeRun(snapshot,
                                     equity::train::AuditModel(model, corpus));
  const auto dir = equity::report::WriteAuditRun(run, t.out);
  model.Save(dir / "checkpoint.json", config.ToJson());
  {
    std::ofstream csv(dir / "trajectory.csv", std::ios::binary);
    csv << "# config_hash=" << run.config_hash << "\n"
        << equity::train::TrajectoryCsv(result.trajectory);
  }
  equity::report::EmitReport(run, formats, dir);

  ordered_json summary;
  summary["run"] = dir.string();
  summary["steps"] = result.steps;
  summary["mean_anchor_positive_distance"] =
      equity::train::MeanAnchorPositiveDistance(model, data.triplets);
  summary["dp_gap"] = run.fairness.dp ? ordered_json(run.fairness.dp->gap)
                                      : ordered_json(nullptr);
  summary["eo_gap"] = run.fairness.eo ? ordered_json(run.fairness.eo->gap)
                                      : ordered_json(nullptr);
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

int GradCheck(double lambda, std::size_t samples, double epsilon,
              std::uint64_t seed, const std::string& surrogate,
              const std::string& reduction) {
  equity::train::SpuriousConfig corpus_config;
  corpus_config.items = 40;
  corpus_config.seed = seed;
  const auto data = equity::train::ToTrainingData(
      equity::train::MakeSpuriousCorpus(corpus_config));
  equity::train::Batch batch;
  for (std::size_t i = 0; i < 8; ++i) {
    batch.qa.push_back(data.qa[i]);
    batch.triplets.push_back(data.triplets[i]);
  }
  for (std::size_t i = 0; i + 1 < 8; i += 2) {
    batch.rank.push_back({data.qa[i].question, data.qa[i].options[0],
                          data.qa[i + 1].options[1]});
  }
  equity::train::EmbeddingModel model({}, seed);
  TrainOptions t;
  t.lambda = lambda;
  t.seed = seed;
  t.surrogate = surrogate;
  t.reduction = reduction;
  const auto report = equity::train::CheckBatchGradient(
      model, batch, ToTrainConfig(t).loss_options(), samples, epsilon, seed);
  std::cout << report.ToJson().dump(2) << "\n";
  return report.passed() ? kExitOk : kExitOther;
}

int Report(const std::string& run_dir, const std::string& formats,
           const std::string& out) {
  const auto run = equity::report::LoadAuditRun(run_dir);
  const auto written = equity::report::EmitReport(
      run, equity::report::ParseFormats(formats),
      out.empty() ? std::filesystem::path(run_dir) : std::filesystem::path(out));
  for (const auto& path : written) std::cout << path.string() << "\n";
  return kExitOk;
}

int Compare(const std::string& before, const std::string& after, bool json,
            const std::string& out) {
  const auto comparison = equity::report::CompareRuns(
      equity::report::LoadAuditRun(before), equity::report::LoadAuditRun(after));
  const std::string text =
      json ? comparison.ToJson().dump(2) + "\n" : comparison.ToCsv();
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file) throw equity::ValidationError("cannot write " + out);
    file << text;
  }
  return kExitOk;
}

int ExitCodeFor(equity::ErrorKind kind) {
  switch (kind) {
    case equity::ErrorKind::kParse:
    case equity::ErrorKind::kValidation:
    case equity::ErrorKind::kUsage:
    case equity::ErrorKind::kComparability:
      return kExitValidation;
    case equity::ErrorKind::kTransport:
    case equity::ErrorKind::kProtocol:
      return kExitTransport;
    default:
      return kExitOther;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counterfactual fairness audits for medical language models"};
  app.require_subcommand(1);

  Overrides ingest_o, perturb_o, audit_o;
  bool exhaustive = false;
  auto* ingest = app.add_subcommand("ingest", "Canonicalize and profile a dataset");
  AddOverrides(ingest, ingest_o);
  auto* perturb = app.add_subcommand("perturb", "Write counterfactual variants and triplets");
  AddOverrides(perturb, perturb_o);
  perturb->add_flag("--exhaustive", exhaustive,
                    "emit every compatible compound negative");
  auto* audit = app.add_subcommand("audit", "Run an audit and write its reports");
  AddOverrides(audit, audit_o);

  TrainOptions train_o;
  auto* train = app.add_subcommand("train", "Train on the synthetic spurious-correlation corpus");
  train->add_option("--lambda", train_o.lambda, "contrastive weight");
  train->add_option("--epochs", train_o.epochs);
  train->add_option("--items", train_o.items, "synthetic corpus size");
  train->add_option("--batch", train_o.batch);
  train->add_option("--seed", train_o.seed);
  train->add_option("--schedule", train_o.schedule)
      ->check(CLI::IsMember({"joint", "alternating"}));
  train->add_option("--reduction", train_o.reduction, "triplet reduction")
      ->check(CLI::IsMember({"sum", "mean"}));
  train->add_option("--surrogate", train_o.surrogate, "rank loss")
      ->check(CLI::IsMember({"logistic", "hinge"}));
  train->add_flag("--raw-rows", train_o.raw_rows,
                  "skip the unit-norm rescale of embedding rows");
  train->add_option("--out", train_o.out);
  train->add_option("--formats", train_o.formats);

  double gc_lambda = 0.1, gc_epsilon = 1e-4;
  std::size_t gc_samples = 128;
  std::uint64_t gc_seed = 1;
  std::string gc_surrogate = "logistic", gc_reduction = "sum";
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of the training loss");
  gradcheck->add_option("--lambda", gc_lambda);
  gradcheck->add_option("--samples", gc_samples, "coordinates per block");
  gradcheck->add_option("--epsilon", gc_epsilon);
  gradcheck->add_option("--seed", gc_seed);
  gradcheck->add_option("--surrogate", gc_surrogate)
      ->check(CLI::IsMember({"logistic", "hinge"}));
  gradcheck->add_option("--reduction", gc_reduction)
      ->check(CLI::IsMember({"sum", "mean"}));

  std::string report_dir, report_formats = "csv,json,svg", report_out;
  auto* report = app.add_subcommand("report", "Re-emit reports from a stored run");
  report->add_option("run", report_dir)->required();
  report->add_option("--formats", report_formats);
  report->add_option("--out", report_out, "defaults to the run directory");

  std::string before, after, compare_out;
  bool compare_json = false;
  auto* compare = app.add_subcommand("compare", "Metric changes between two runs");
  compare->add_option("before", before)->required();
  compare->add_option("after", after)->required();
  compare->add_flag("--json", compare_json);
  compare->add_option("--out", compare_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*ingest) return Ingest(ingest_o);
    if (*perturb) return Perturb(perturb_o, exhaustive);
    if (*audit) return Audit(audit_o);
    if (*train) return Train(train_o);
    if (*gradcheck) {
      return GradCheck(gc_lambda, gc_samples, gc_epsilon, gc_seed,
                       gc_surrogate, gc_reduction);
    }
    if (*report) return Report(report_dir, report_formats, report_out);
    if (*compare) return Compare(before, after, compare_json, compare_out);
  } catch (const equity::Error& e) {
    std::cerr << "error (" << equity::ErrorKindName(e.kind()) << "): "
              << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}
