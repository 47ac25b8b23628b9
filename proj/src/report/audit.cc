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

#include "equity/report/audit.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "equity/core/error.h"
#include "equity/core/hash.h"
#include "equity/corpus/io.h"
#include "equity/gateway/cost.h"
#include "equity/gateway/dispatcher.h"
#include "equity/gateway/prompt.h"
#include "equity/perturb/io.h"

namespace equity::report {
namespace {

using nlohmann::ordered_json;

constexpr std::size_t kIdLength = 16;

std::string CellKey(const std::string& item, Category category) {
  return item + "/" + std::string(CategoryName(category));
}

std::string Dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << bytes;
  if (!out) throw ValidationError("failed writing " + path.string());
}

ordered_json ParseFile(const std::filesystem::path& path) {
  try {
    return ordered_json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<Category> NonBase(const std::vector<Category>& categories) {
  std::vector<Category> out;
  for (Category category : categories) {
    if (category != Category::kBase) out.push_back(category);
  }
  return out;
}

// Mutable state shared by both task pipelines.
struct Pipeline {
  const RunConfig& config;
  AuditRun& run;
  gateway::Backend& backend;
  const perturb::Lexicon& lexicon;
  const gateway::RefusalLexicon& refusals;
  std::vector<gateway::ModelResponse> priced;

  std::vector<gateway::ModelResponse> Dispatch(
      const std::vector<gateway::ModelRequest>& requests) {
    gateway::Dispatcher dispatcher(
        backend, {config.max_in_flight, config.requests_per_minute}, refusals);
    std::vector<gateway::ModelResponse> responses = dispatcher.Run(requests);
    for (const gateway::ModelResponse& response : responses) {
      if (response.transport_error) {
        ++run.failures["transport"];
        continue;
      }
      if (response.failure) {
        ++run.failures[std::string(gateway::FailureKindName(*response.failure))];
      }
      priced.push_back(response);
    }
    return responses;
  }

  void SkipTransport(const std::string& item, Category category,
                     const std::string& message) {
    const std::string reason = "transport: " + message;
    run.outcomes.MarkSkipped(item, category, reason);
    run.skipped.push_back({item, category, reason});
    if (run.status == RunStatus::kComplete) {
      run.status = RunStatus::kPartial;
      run.error = reason;
    }
  }

  void RecordPerturbSkips(const perturb::VariantSet& set) {
    for (const perturb::SkipRecord& skip : set.skipped) {
      run.outcomes.MarkSkipped(skip.base_id, skip.category, skip.reason);
      run.skipped.push_back(skip);
    }
  }
};

std::vector<corpus::QAItem> LimitItems(std::vector<corpus::QAItem> items,
                                       std::size_t limit) {
  if (limit > 0 && items.size() > limit) items.resize(limit);
  return items;
}

void RunQa(Pipeline& p, const std::vector<corpus::QAItem>& items) {
  const gateway::PromptTemplate prompt =
      gateway::PromptTemplate::Load(p.config.qa_prompt);
  prompt.Require({"question", "options"});
  const std::vector<Category> injected = NonBase(p.config.categories);

  struct Pending {
    const corpus::QAItem* item;
    Category category;
  };
  std::vector<Pending> pending;
  std::vector<gateway::ModelRequest> requests;
  for (const corpus::QAItem& item : items) {
    const perturb::VariantSet set = perturb::GenerateVariants(
        item.id, item.question, injected, p.lexicon, p.config.seed);
    p.RecordPerturbSkips(set);
    std::vector<const perturb::Variant*> variants = {&set.base};
    for (const perturb::Variant& v : set.variants) variants.push_back(&v);
    for (const perturb::Variant* variant : variants) {
      gateway::ModelRequest request;
      request.request_id = "qa/" + CellKey(item.id, variant->category);
      request.messages.push_back(
          {"user", gateway::RenderQaPrompt(prompt, variant->text, item.options)});
      request.decode = p.config.decode;
      request.context.task = Task::kQa;
      request.context.item_id = item.id;
      request.context.category = variant->category;
      request.context.options = item.options;
      requests.push_back(std::move(request));
      pending.push_back({&item, variant->category});
    }
  }

  const std::vector<gateway::ModelResponse> responses = p.Dispatch(requests);
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const gateway::ModelResponse& response = responses[i];
    const corpus::QAItem& item = *pending[i].item;
    if (response.transport_error) {
      p.SkipTransport(item.id, pending[i].category, *response.transport_error);
      continue;
    }
    metrics::QaOutcome outcome;
    if (const char* answer = std::get_if<char>(&response.parsed)) {
      outcome.answer = *answer;
    }
    outcome.failure = response.failure;
    outcome.correct = outcome.answer == item.gold && !outcome.failure;
    p.run.outcomes.SetQa(item.id, pending[i].category, outcome);
  }
}

void RunCtm(Pipeline& p, const std::vector<corpus::PatientTopic>& topics,
            const std::vector<corpus::TrialDoc>& trials,
            const corpus::Qrels& qrels) {
  const gateway::PromptTemplate prompt =
      gateway::PromptTemplate::Load(p.config.ctm_prompt);
  prompt.Require({"patient_note", "criteria_list"});
  const std::vector<Category> injected = NonBase(p.config.categories);

  struct Pending {
    const corpus::PatientTopic* topic;
    Category category;
    std::vector<const corpus::TrialDoc*> pool;
    std::size_t first = 0;
  };
  std::vector<Pending> pending;
  std::vector<gateway::ModelRequest> requests;
  for (const corpus::PatientTopic& topic : topics) {
    std::vector<const corpus::TrialDoc*> pool = CandidatePool(
        topic.id, trials, qrels, p.config.pool_size, p.config.seed);
    const std::vector<std::string> relevant = qrels.Relevant(topic.id);
    std::vector<const corpus::TrialDoc*> guard;
    for (const corpus::TrialDoc* trial : pool) {
      if (std::binary_search(relevant.begin(), relevant.end(), trial->id)) {
        guard.push_back(trial);
      }
    }
    const perturb::VariantSet set = perturb::GenerateVariants(
        topic.id, topic.text, injected, p.lexicon, p.config.seed, guard);
    p.RecordPerturbSkips(set);
    std::vector<const perturb::Variant*> variants = {&set.base};
    for (const perturb::Variant& v : set.variants) variants.push_back(&v);
    for (const perturb::Variant* variant : variants) {
      std::vector<gateway::ModelRequest> batch = ranker::BuildRankRequests(
          topic.id, variant->category, variant->text, pool, prompt,
          p.config.decode);
      pending.push_back({&topic, variant->category, pool, requests.size()});
      for (auto& request : batch) requests.push_back(std::move(request));
    }
  }

  const std::vector<gateway::ModelResponse> responses = p.Dispatch(requests);
  for (const Pending& cell : pending) {
    const auto begin =
        responses.begin() + static_cast<std::ptrdiff_t>(cell.first);
    const std::vector<gateway::ModelResponse> slice(
        begin, begin + static_cast<std::ptrdiff_t>(cell.pool.size()));
    ranker::Ranking ranking = ranker::RankFromResponses(
        cell.topic->id, cell.category, cell.pool, slice);
    if (ranking.incomplete) {
      const auto failed = std::find_if(
          slice.begin(), slice.end(),
          [](const gateway::ModelResponse& r) { return r.transport_error; });
      p.SkipTransport(cell.topic->id, cell.category,
                      failed == slice.end() ? "unscored trial"
                                            : *failed->transport_error);
      continue;
    }
    std::size_t failures = 0;
    for (const ranker::TrialScore& trial : ranking.trials) {
      if (trial.failure) ++failures;
    }
    p.run.outcomes.SetCtm(
        cell.topic->id, cell.category,
        metrics::MakeCtmOutcome(ranking.TrialIds(), qrels, cell.topic->id,
                                failures, false));
    p.run.rankings.push_back(std::move(ranking));
  }
}

std::string FileList(const std::vector<std::string>& names) {
  std::string out;
  for (const std::string& name : names) out += (out.empty() ? "" : ", ") + name;
  return out;
}

}  // namespace

const char* RunStatusName(RunStatus status) {
  return status == RunStatus::kComplete ? "complete" : "partial";
}

metrics::CorrelationMode AuditRun::correlation_mode() const {
  return config.value("correlation", std::string("default")) == "strict"
             ? metrics::CorrelationMode::kStrict
             : metrics::CorrelationMode::kDefault;
}

std::vector<std::string> AuditRun::CompletedCells() const {
  std::vector<std::string> cells;
  const std::vector<Category> categories = outcomes.categories();
  for (const std::string& item : outcomes.items()) {
    for (Category category : categories) {
      const metrics::Cell* cell = outcomes.Find(item, category);
      if (cell != nullptr && !cell->skipped) {
        cells.push_back(CellKey(item, category));
      }
    }
  }
  return cells;
}

void AuditRun::Derive() {
  fairness = metrics::ComputeFairness(outcomes);
  correlation.reset();
  correlation_note.clear();
  try {
    correlation =
        metrics::ComputeCorrelationMatrix(outcomes, correlation_mode());
  } catch (const Error& e) {
    correlation_note = e.what();
  }
}

std::vector<const corpus::TrialDoc*> CandidatePool(
    const std::string& topic, const std::vector<corpus::TrialDoc>& trials,
    const corpus::Qrels& qrels, std::size_t pool_size, std::uint64_t seed) {
  std::vector<const corpus::TrialDoc*> judged;
  std::vector<std::pair<std::uint64_t, const corpus::TrialDoc*>> rest;
  for (const corpus::TrialDoc& trial : trials) {
    if (qrels.Grade(topic, trial.id)) {
      judged.push_back(&trial);
    } else {
      rest.emplace_back(StableHash(seed, {"pool", topic, trial.id}), &trial);
    }
  }
  std::sort(judged.begin(), judged.end(),
            [](const auto* a, const auto* b) { return a->id < b->id; });
  std::sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second->id < b.second->id;
  });
  std::vector<const corpus::TrialDoc*> pool = std::move(judged);
  for (const auto& [hash, trial] : rest) {
    if (pool.size() >= pool_size) break;
    pool.push_back(trial);
  }
  return pool;
}

AuditRun RunAudit(const RunConfig& config, const AuditHooks& hooks) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();

  AuditRun run;
  run.config = config.Snapshot();
  run.config_hash = Sha256Hex(run.config.dump());
  run.outcomes = metrics::OutcomeTable(config.task);

  const perturb::Lexicon lexicon = perturb::Lexicon::Load(config.lexicon);
  const gateway::RefusalLexicon refusals =
      gateway::RefusalLexicon::Load(config.refusal_lexicon);
  const gateway::CostTable costs = gateway::CostTable::Load(config.cost_table);

  std::vector<corpus::QAItem> items;
  std::vector<corpus::PatientTopic> topics;
  std::vector<corpus::TrialDoc> trials;
  corpus::Qrels qrels;
  if (config.task == Task::kQa) {
    items = LimitItems(corpus::LoadQa(config.qa, config.qa_format), config.limit);
  } else {
    topics = corpus::LoadTopics(config.topics);
    if (config.limit > 0 && topics.size() > config.limit) {
      topics.resize(config.limit);
    }
    trials = corpus::LoadTrials(config.trials);
    qrels = corpus::LoadQrels(config.qrels, hooks.diagnostics);
  }

  std::unique_ptr<gateway::Backend> owned;
  std::unique_ptr<gateway::Backend> http;
  std::unique_ptr<gateway::ResponseCache> cache;
  gateway::Backend* backend = hooks.backend;
  if (backend == nullptr && config.backend == BackendKind::kMock) {
    gateway::MockGroundTruth truth;
    for (const corpus::QAItem& item : items) truth.qa_gold[item.id] = item.gold;
    for (const corpus::PatientTopic& topic : topics) {
      std::vector<std::string>& pool = truth.ctm_pools[topic.id];
      for (const corpus::TrialDoc* trial : CandidatePool(
               topic.id, trials, qrels, config.pool_size, config.seed)) {
        pool.push_back(trial->id);
      }
    }
    truth.qrels = qrels;
    owned = std::make_unique<gateway::MockBackend>(
        gateway::BiasProfile::Load(config.profile), std::move(truth),
        hooks.diagnostics);
    backend = owned.get();
  } else if (backend == nullptr) {
    http = std::make_unique<gateway::HttpBackend>(config.endpoint);
    backend = http.get();
    if (!config.cache.empty()) {
      cache = std::make_unique<gateway::ResponseCache>(config.cache);
      owned = std::make_unique<gateway::CachedBackend>(*http, *cache);
      backend = owned.get();
    }
  }
  if (costs.Find(backend->name()) == nullptr) {
    throw ValidationError("cost table has no entry for backend '" +
                          backend->name() + "'");
  }

  Pipeline pipeline{config, run, *backend, lexicon, refusals, {}};
  try {
    if (config.task == Task::kQa) {
      RunQa(pipeline, items);
    } else {
      RunCtm(pipeline, topics, trials, qrels);
    }
  } catch (const Error& e) {
    run.status = RunStatus::kPartial;
    run.error = e.what();
  }

  run.cost = gateway::ToJson(gateway::EstimateCost(pipeline.priced, costs));
  run.Derive();
  run.duration_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  return run;
}

AuditRun MakeRun(nlohmann::ordered_json snapshot,
                 metrics::OutcomeTable table) {
  AuditRun run;
  run.config = std::move(snapshot);
  run.config_hash = Sha256Hex(run.config.dump());
  run.outcomes = std::move(table);
  run.cost = ordered_json::object();
  run.Derive();
  return run;
}

std::filesystem::path WriteAuditRun(AuditRun& run,
                                    const std::filesystem::path& root) {
  std::vector<std::pair<std::string, std::string>> files;
  auto add = [&](const std::string& name, const std::string& key,
                 ordered_json body) {
    ordered_json doc;
    doc["config_hash"] = run.config_hash;
    doc[key] = std::move(body);
    files.emplace_back(name, Dump(doc));
  };

  {
    ordered_json doc;
    doc["config_hash"] = run.config_hash;
    doc["seed"] = run.config.value("seed", std::uint64_t{0});
    doc["snapshot"] = run.config;
    files.emplace_back("config.json", Dump(doc));
  }
  add("outcomes.json", "table", run.outcomes.ToJson());
  add("fairness.json", "fairness", run.fairness.ToJson());
  {
    ordered_json body;
    body["mode"] = run.correlation_mode() == metrics::CorrelationMode::kStrict
                       ? "strict"
                       : "default";
    body["matrix"] = run.correlation ? run.correlation->ToJson() : ordered_json();
    body["note"] = run.correlation_note;
    add("correlation.json", "correlation", std::move(body));
  }
  {
    ordered_json failures = ordered_json::object();
    for (const auto& [kind, count] : run.failures) failures[kind] = count;
    add("failures.json", "failures", std::move(failures));
  }
  add("cost.json", "cost", run.cost);
  {
    ordered_json skipped = ordered_json::array();
    for (const perturb::SkipRecord& skip : run.skipped) {
      skipped.push_back(perturb::ToJson(skip));
    }
    add("skipped.json", "skipped", std::move(skipped));
  }
  if (!run.rankings.empty()) {
    std::ostringstream trec;
    ranker::WriteRunFile(trec, run.rankings,
                         "equity-" + run.config_hash.substr(0, 12));
    files.emplace_back("run.trec", trec.str());
  }

  ordered_json digests = ordered_json::object();
  for (const auto& [name, bytes] : files) digests[name] = Sha256Hex(bytes);
  ordered_json manifest;
  manifest["config_hash"] = run.config_hash;
  manifest["status"] = RunStatusName(run.status);
  manifest["error"] = run.error;
  manifest["files"] = digests;
  manifest["completed_cells"] = run.CompletedCells();
  const std::string manifest_bytes = Dump(manifest);
  run.id = Sha256Hex(manifest_bytes).substr(0, kIdLength);

  run.dir = root / run.id;
  std::filesystem::create_directories(run.dir);
  for (const auto& [name, bytes] : files) WriteFile(run.dir / name, bytes);
  WriteFile(run.dir / "manifest.json", manifest_bytes);
  ordered_json timing;
  timing["config_hash"] = run.config_hash;
  timing["duration_ms"] = run.duration_ms;
  WriteFile(run.dir / "timing.json", Dump(timing));
  return run.dir;
}

AuditRun LoadAuditRun(const std::filesystem::path& dir) {
  const std::string manifest_bytes = ReadFile(dir / "manifest.json");
  ordered_json manifest;
  try {
    manifest = ordered_json::parse(manifest_bytes);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest.json: " + std::string(e.what()));
  }
  std::vector<std::string> bad;
  for (const auto& [name, digest] : manifest.at("files").items()) {
    const std::filesystem::path path = dir / name;
    if (!std::filesystem::exists(path) ||
        Sha256Hex(ReadFile(path)) != digest.get<std::string>()) {
      bad.push_back(name);
    }
  }
  if (!bad.empty()) {
    throw ValidationError("run " + dir.string() +
                          " has missing or modified files: " + FileList(bad));
  }

  AuditRun run;
  run.dir = dir;
  run.id = Sha256Hex(manifest_bytes).substr(0, kIdLength);
  run.config_hash = manifest.at("config_hash").get<std::string>();
  run.status = manifest.at("status").get<std::string>() == "complete"
                   ? RunStatus::kComplete
                   : RunStatus::kPartial;
  run.error = manifest.value("error", std::string());

  run.config = ParseFile(dir / "config.json").at("snapshot");
  run.outcomes =
      metrics::OutcomeTable::FromJson(ParseFile(dir / "outcomes.json").at("table"));
  for (const auto& [kind, count] :
       ParseFile(dir / "failures.json").at("failures").items()) {
    run.failures[kind] = count.get<std::size_t>();
  }
  run.cost = ParseFile(dir / "cost.json").at("cost");
  for (const ordered_json& record :
       ParseFile(dir / "skipped.json").at("skipped")) {
    const std::string name = record.at("category").get<std::string>();
    const std::optional<Category> category = ParseCategory(name);
    if (!category) throw ParseError("skipped.json: unknown category " + name);
    run.skipped.push_back({record.at("base_id").get<std::string>(), *category,
                           record.at("reason").get<std::string>()});
  }
  if (std::filesystem::exists(dir / "timing.json")) {
    run.duration_ms = ParseFile(dir / "timing.json").value("duration_ms", 0.0);
  }
  run.Derive();
  return run;
}

}  // namespace equity::report
