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

#ifndef EQUITY_REPORT_AUDIT_H_
#define EQUITY_REPORT_AUDIT_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "equity/core/diagnostics.h"
#include "equity/gateway/backend.h"
#include "equity/metrics/correlation.h"
#include "equity/metrics/fairness.h"
#include "equity/metrics/outcome.h"
#include "equity/perturb/variant.h"
#include "equity/ranker/ranker.h"
#include "equity/report/config.h"
#include "json.hpp"

namespace equity::report {

enum class RunStatus { kComplete, kPartial };

const char* RunStatusName(RunStatus status);

// Everything one audit produced. Fairness and correlation are derived from
// `outcomes`, so a loaded run recomputes them instead of trusting the files.
struct AuditRun {
  nlohmann::ordered_json config;  // RunConfig::Snapshot()
  std::string config_hash;
  metrics::OutcomeTable outcomes{Task::kQa};
  metrics::FairnessReport fairness;
  std::optional<metrics::CorrelationMatrix> correlation;
  std::string correlation_note;
  // FailureKind name (and "transport") -> number of replies.
  std::map<std::string, std::size_t> failures;
  nlohmann::ordered_json cost;  // gateway::ToJson(CostSummary)
  std::vector<perturb::SkipRecord> skipped;
  std::vector<ranker::Ranking> rankings;  // CTM only; not reloaded
  RunStatus status = RunStatus::kComplete;
  std::string error;  // first error of a partial run
  double duration_ms = 0.0;

  std::filesystem::path dir;  // set by Write/Load
  std::string id;             // content hash prefix

  metrics::CorrelationMode correlation_mode() const;
  // "item/Category" for every non-skipped cell, in table order.
  std::vector<std::string> CompletedCells() const;
  // Fills fairness and correlation from outcomes.
  void Derive();
};

// Inputs a caller can supply instead of having RunAudit build them; tests
// use this to point the audit at an in-process HTTP server or a custom mock.
struct AuditHooks {
  gateway::Backend* backend = nullptr;
  Diagnostics* diagnostics = nullptr;
};

// Runs perturbation, inference and metrics for `config`. Cells whose model
// call failed in transport are marked skipped and the run is partial; an
// exception from a later stage also yields a partial run that keeps every
// finished cell. Throws ValidationError when the config does not validate.
AuditRun RunAudit(const RunConfig& config, const AuditHooks& hooks = {});

// A complete run around an existing outcome table, for callers that produce
// outcomes without the gateway (the trainer's held-out audit).
AuditRun MakeRun(nlohmann::ordered_json snapshot, metrics::OutcomeTable table);

// Writes the run under `root`/<first 16 hex of the content hash>/ and
// returns that directory. The name covers every file but timing.json, so
// rerunning an identical mock audit lands in the same directory with the
// same bytes.
std::filesystem::path WriteAuditRun(AuditRun& run,
                                    const std::filesystem::path& root);

// Reads a run directory written by WriteAuditRun. Throws ValidationError
// when a file is missing or its digest does not match the manifest.
AuditRun LoadAuditRun(const std::filesystem::path& dir);

// Per-topic candidate pool: judged trials first (by trial id), then unjudged
// trials ordered by a seeded hash until `pool_size` is reached.
std::vector<const corpus::TrialDoc*> CandidatePool(
    const std::string& topic, const std::vector<corpus::TrialDoc>& trials,
    const corpus::Qrels& qrels, std::size_t pool_size, std::uint64_t seed);

}  // namespace equity::report

#endif  // EQUITY_REPORT_AUDIT_H_
