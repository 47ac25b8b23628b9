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

#ifndef EQUITY_REPORT_CONFIG_H_
#define EQUITY_REPORT_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "equity/core/category.h"
#include "equity/core/task.h"
#include "equity/corpus/io.h"
#include "equity/gateway/backend.h"
#include "equity/metrics/correlation.h"
#include "json.hpp"

namespace equity::report {

enum class BackendKind { kMock, kHttp };

// Everything an audit depends on. Relative paths in a config file resolve
// against the file's directory.
struct RunConfig {
  Task task = Task::kQa;

  std::filesystem::path qa;
  corpus::QaFormat qa_format = corpus::QaFormat::kMedQa;
  std::filesystem::path topics;
  std::filesystem::path trials;
  std::filesystem::path qrels;

  std::filesystem::path lexicon;
  std::filesystem::path refusal_lexicon;
  std::filesystem::path qa_prompt;
  std::filesystem::path ctm_prompt;
  std::filesystem::path cost_table;

  std::vector<Category> categories;  // always includes Base

  BackendKind backend = BackendKind::kMock;
  std::filesystem::path profile;  // mock
  gateway::EndpointConfig endpoint;  // http
  std::filesystem::path cache;       // http; empty disables the cache

  std::size_t pool_size = 20;
  std::size_t limit = 0;  // 0 keeps every item
  std::uint64_t seed = 0;
  gateway::DecodeParams decode;
  std::size_t max_in_flight = 4;
  double requests_per_minute = 0.0;
  metrics::CorrelationMode correlation_mode = metrics::CorrelationMode::kDefault;

  std::filesystem::path out = "runs";
  std::vector<std::string> formats = {"csv", "json", "svg"};

  // Defaults with data files taken from DataDir().
  static RunConfig Defaults();

  // Applies one `key = value` setting. Throws UsageError for unknown keys and
  // ValidationError for bad values. `base` resolves relative paths.
  void Set(const std::string& key, const std::string& value,
           const std::filesystem::path& base = {});

  // Reads `key = value` lines; '#' starts a comment.
  static RunConfig Load(const std::filesystem::path& path);

  // Throws ValidationError when a required file is missing or a value is
  // out of range.
  void Validate() const;

  // Canonical JSON of every setting that can change results, with SHA-256
  // digests in place of input paths. Excludes `out` and `formats`.
  nlohmann::ordered_json Snapshot() const;
  std::string SnapshotHash() const;
};

std::vector<std::string> ParseFormats(const std::string& text);

// SHA-256 of a file's bytes. Throws ValidationError if unreadable.
std::string FileDigest(const std::filesystem::path& path);

}  // namespace equity::report

#endif  // EQUITY_REPORT_CONFIG_H_
