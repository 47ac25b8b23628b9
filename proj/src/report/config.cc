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

#include "equity/report/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "equity/core/data_dir.h"
#include "equity/core/error.h"
#include "equity/core/hash.h"
#include "equity/core/text.h"

namespace equity::report {
namespace {

std::filesystem::path Resolve(const std::string& value,
                              const std::filesystem::path& base) {
  std::filesystem::path path(value);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("setting '" + key + "' expects a number, got '" +
                          value + "'");
  }
  return out;
}

double ParseDouble(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double out = std::stod(value, &used);
    if (used == value.size()) return out;
  } catch (const std::exception&) {
  }
  throw ValidationError("setting '" + key + "' expects a number, got '" +
                        value + "'");
}

void RequireFile(const std::filesystem::path& path, const std::string& what) {
  if (path.empty()) throw ValidationError(what + " is not set");
  if (!std::filesystem::is_regular_file(path)) {
    throw ValidationError(what + " " + path.string() + " does not exist");
  }
}

}  // namespace

std::string FileDigest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Sha256Hex(buffer.str());
}

std::vector<std::string> ParseFormats(const std::string& text) {
  std::vector<std::string> formats;
  for (std::string_view part : SplitChar(text, ',')) {
    const std::string name = ToLowerAscii(TrimAscii(part));
    if (name.empty()) continue;
    if (name != "csv" && name != "json" && name != "svg") {
      throw UsageError("unknown report format '" + name +
                       "' (expected csv, json or svg)");
    }
    if (std::find(formats.begin(), formats.end(), name) == formats.end()) {
      formats.push_back(name);
    }
  }
  return formats;
}

RunConfig RunConfig::Defaults() {
  const std::filesystem::path data = DataDir();
  RunConfig config;
  config.lexicon = data / "lexicon.json";
  config.refusal_lexicon = data / "refusal_lexicon.json";
  config.qa_prompt = data / "prompts" / "qa.txt";
  config.ctm_prompt = data / "prompts" / "ctm.txt";
  config.cost_table = data / "cost_table.json";
  config.categories.assign(kAllCategories.begin(), kAllCategories.end());
  return config;
}

void RunConfig::Set(const std::string& key, const std::string& value,
                    const std::filesystem::path& base) {
  if (key == "task") {
    task = ParseTask(value);
  } else if (key == "qa") {
    qa = Resolve(value, base);
  } else if (key == "qa_format") {
    qa_format = corpus::ParseQaFormat(value);
  } else if (key == "topics") {
    topics = Resolve(value, base);
  } else if (key == "trials") {
    trials = Resolve(value, base);
  } else if (key == "qrels") {
    qrels = Resolve(value, base);
  } else if (key == "lexicon") {
    lexicon = Resolve(value, base);
  } else if (key == "refusal_lexicon") {
    refusal_lexicon = Resolve(value, base);
  } else if (key == "qa_prompt") {
    qa_prompt = Resolve(value, base);
  } else if (key == "ctm_prompt") {
    ctm_prompt = Resolve(value, base);
  } else if (key == "cost_table") {
    cost_table = Resolve(value, base);
  } else if (key == "categories") {
    categories = ParseCategoryList(value);
    if (std::find(categories.begin(), categories.end(), Category::kBase) ==
        categories.end()) {
      categories.insert(categories.begin(), Category::kBase);
    }
  } else if (key == "backend") {
    if (value == "mock") {
      backend = BackendKind::kMock;
    } else if (value == "http") {
      backend = BackendKind::kHttp;
    } else {
      throw ValidationError("backend must be 'mock' or 'http', got '" + value +
                            "'");
    }
  } else if (key == "profile") {
    profile = Resolve(value, base);
  } else if (key == "endpoint_name") {
    endpoint.name = value;
  } else if (key == "base_url") {
    endpoint.base_url = value;
  } else if (key == "endpoint_path") {
    endpoint.path = value;
  } else if (key == "model") {
    endpoint.model = value;
  } else if (key == "credential_env") {
    endpoint.credential_env = value;
  } else if (key == "max_attempts") {
    endpoint.max_attempts = ParseNumber<int>(key, value);
  } else if (key == "timeout_s") {
    endpoint.timeout_s = ParseDouble(key, value);
  } else if (key == "cache") {
    cache = value.empty() ? std::filesystem::path() : Resolve(value, base);
  } else if (key == "pool_size") {
    pool_size = ParseNumber<std::size_t>(key, value);
  } else if (key == "limit") {
    limit = ParseNumber<std::size_t>(key, value);
  } else if (key == "seed") {
    seed = ParseNumber<std::uint64_t>(key, value);
  } else if (key == "temperature") {
    decode.temperature = ParseDouble(key, value);
  } else if (key == "max_tokens") {
    decode.max_tokens = ParseNumber<int>(key, value);
  } else if (key == "max_in_flight") {
    max_in_flight = ParseNumber<std::size_t>(key, value);
  } else if (key == "requests_per_minute") {
    requests_per_minute = ParseDouble(key, value);
  } else if (key == "correlation") {
    if (value == "default") {
      correlation_mode = metrics::CorrelationMode::kDefault;
    } else if (value == "strict") {
      correlation_mode = metrics::CorrelationMode::kStrict;
    } else {
      throw ValidationError("correlation must be 'default' or 'strict'");
    }
  } else if (key == "out") {
    out = Resolve(value, base);
  } else if (key == "formats") {
    formats = ParseFormats(value);
  } else {
    throw UsageError("unknown setting '" + key + "'");
  }
}

RunConfig RunConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  RunConfig config = Defaults();
  const std::filesystem::path base = path.parent_path();
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string_view trimmed = TrimAscii(line);
    if (trimmed.empty()) continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected 'key = value' in " + path.string(), line_no);
    }
    config.Set(std::string(TrimAscii(trimmed.substr(0, eq))),
               std::string(TrimAscii(trimmed.substr(eq + 1))), base);
  }
  return config;
}

void RunConfig::Validate() const {
  if (task == Task::kQa) {
    RequireFile(qa, "qa dataset");
    RequireFile(qa_prompt, "qa prompt");
  } else {
    RequireFile(topics, "topics file");
    RequireFile(trials, "trials file");
    RequireFile(qrels, "qrels file");
    RequireFile(ctm_prompt, "ctm prompt");
    if (pool_size == 0) throw ValidationError("pool_size must be positive");
  }
  RequireFile(lexicon, "lexicon");
  RequireFile(refusal_lexicon, "refusal lexicon");
  RequireFile(cost_table, "cost table");
  if (backend == BackendKind::kMock) {
    RequireFile(profile, "mock bias profile");
  } else {
    if (endpoint.base_url.empty()) throw ValidationError("base_url is not set");
    if (endpoint.model.empty()) throw ValidationError("model is not set");
  }
  if (categories.empty() || categories.front() != Category::kBase) {
    throw ValidationError("categories must include Base");
  }
  if (decode.temperature < 0.0) {
    throw ValidationError("temperature must be non-negative");
  }
  if (decode.max_tokens <= 0) throw ValidationError("max_tokens must be positive");
  if (max_in_flight == 0) throw ValidationError("max_in_flight must be positive");
  if (requests_per_minute < 0.0) {
    throw ValidationError("requests_per_minute must be non-negative");
  }
}

nlohmann::ordered_json RunConfig::Snapshot() const {
  nlohmann::ordered_json snap;
  snap["task"] = std::string(TaskName(task));
  nlohmann::ordered_json inputs;
  if (task == Task::kQa) {
    inputs["qa"] = FileDigest(qa);
    inputs["qa_format"] = corpus::QaFormatName(qa_format);
    inputs["qa_prompt"] = FileDigest(qa_prompt);
  } else {
    inputs["topics"] = FileDigest(topics);
    inputs["trials"] = FileDigest(trials);
    inputs["qrels"] = FileDigest(qrels);
    inputs["ctm_prompt"] = FileDigest(ctm_prompt);
  }
  inputs["lexicon"] = FileDigest(lexicon);
  inputs["refusal_lexicon"] = FileDigest(refusal_lexicon);
  inputs["cost_table"] = FileDigest(cost_table);
  snap["inputs"] = std::move(inputs);
  nlohmann::ordered_json cats = nlohmann::ordered_json::array();
  for (Category category : categories) {
    cats.push_back(std::string(CategoryName(category)));
  }
  snap["categories"] = std::move(cats);
  nlohmann::ordered_json backend_json;
  if (backend == BackendKind::kMock) {
    backend_json["kind"] = "mock";
    backend_json["profile"] = FileDigest(profile);
  } else {
    backend_json["kind"] = "http";
    backend_json["name"] = endpoint.name;
    backend_json["base_url"] = endpoint.base_url;
    backend_json["path"] = endpoint.path;
    backend_json["model"] = endpoint.model;
  }
  snap["backend"] = std::move(backend_json);
  snap["pool_size"] = pool_size;
  snap["limit"] = limit;
  snap["seed"] = seed;
  snap["temperature"] = decode.temperature;
  snap["max_tokens"] = decode.max_tokens;
  snap["correlation"] =
      correlation_mode == metrics::CorrelationMode::kStrict ? "strict"
                                                            : "default";
  return snap;
}

std::string RunConfig::SnapshotHash() const {
  return Sha256Hex(Snapshot().dump());
}

}  // namespace equity::report
