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

#ifndef EQUITY_GATEWAY_BACKEND_H_
#define EQUITY_GATEWAY_BACKEND_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "equity/core/category.h"
#include "equity/core/diagnostics.h"
#include "equity/corpus/types.h"
#include "equity/gateway/types.h"
#include "json.hpp"

namespace equity::gateway {

class Backend {
 public:
  virtual ~Backend() = default;

  // Name used for cost lookup and reporting.
  virtual std::string name() const = 0;
  // Everything about the backend that changes its replies; part of the
  // response-cache key.
  virtual std::string fingerprint() const = 0;

  // Must be safe to call from several threads at once.
  virtual RawReply Complete(const ModelRequest& request) = 0;
};

// ---------------------------------------------------------------------------
// Mock backend

struct CategoryBias {
  double qa_flip_rate = 0.0;
  int rank_demote = 0;
  double rejection_rate = 0.0;
};

// Profile file layout:
//   {"seed": 17,
//    "default": {"qa_flip_rate": 0.1},
//    "categories": {"Base": {"qa_flip_rate": 0.1, "rank_demote": 0},
//                   "LowIncome": {"qa_flip_rate": 0.3}}}
// A category missing from "categories" uses "default" when present and the
// Base entry otherwise (with a warning).
struct BiasProfile {
  std::uint64_t seed = 0;
  std::map<Category, CategoryBias> categories;
  std::optional<CategoryBias> fallback;

  static BiasProfile FromJson(const nlohmann::json& doc);
  static BiasProfile Load(const std::filesystem::path& path);
  // Every category gets the same bias.
  static BiasProfile Uniform(double qa_flip_rate, int rank_demote,
                             std::uint64_t seed);

  nlohmann::ordered_json ToJson() const;
};

struct MockGroundTruth {
  std::map<std::string, char> qa_gold;  // item id -> gold label
  std::map<std::string, std::vector<std::string>> ctm_pools;  // topic -> pool
  corpus::Qrels qrels;
};

// Deterministic stand-in for a model with a configurable per-category bias.
//
// QA: the draw u = StableUnit(seed, {item id}) is shared by every category
// of an item, and the reply is wrong exactly when u < qa_flip_rate. A wrong
// reply picks the same seeded wrong option for every category.
//
// CTM: the pool's intended order puts trials by descending grade (ties by
// seeded hash). A category with rank_demote k moves the i-th relevant trial
// from position p_i to min(p_i + k, n - (m - i)) and the labels it emits for
// a trial at position q score (n - q) / n up to rounding to 1 / (2c) for c
// criteria.
class MockBackend : public Backend {
 public:
  MockBackend(BiasProfile profile, MockGroundTruth truth,
              Diagnostics* diagnostics = nullptr);

  std::string name() const override { return "mock"; }
  std::string fingerprint() const override;
  RawReply Complete(const ModelRequest& request) override;

  const CategoryBias& BiasFor(Category category) const;
  // Trial order the mock intends for `topic` under `category`.
  std::vector<std::string> IntendedOrder(const std::string& topic,
                                         Category category) const;
  const BiasProfile& profile() const { return profile_; }

 private:
  std::string QaReply(const ModelRequest& request) const;
  std::string CtmReply(const ModelRequest& request) const;

  BiasProfile profile_;
  MockGroundTruth truth_;
  Diagnostics* diagnostics_;
  mutable std::mutex warned_mu_;
  mutable std::vector<Category> warned_;
};

// Labels that score exactly `units` / (2 * count) under the trial ranker:
// units / 2 "included", one "not excluded" when units is odd, the rest
// "not included".
std::vector<EligibilityLabel> LabelsForUnits(std::size_t units,
                                             std::size_t count);

// ceil(chars / 4), the usage estimate the mock reports.
std::int64_t ApproximateTokens(std::size_t chars);

// ---------------------------------------------------------------------------
// HTTP chat-completion backend

struct EndpointConfig {
  std::string name = "http";
  std::string base_url;  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model;
  // Name of the environment variable holding the bearer credential; empty
  // for endpoints without authentication.
  std::string credential_env;
  int max_attempts = 4;
  double initial_backoff_ms = 500.0;
  double max_backoff_ms = 8000.0;
  double timeout_s = 60.0;
  std::uint64_t jitter_seed = 0;
  // JSON pointers into the reply.
  std::string text_pointer = "/choices/0/message/content";
  std::string prompt_tokens_pointer = "/usage/prompt_tokens";
  std::string completion_tokens_pointer = "/usage/completion_tokens";
};

class HttpBackend : public Backend {
 public:
  using Sleeper = std::function<void(double milliseconds)>;

  explicit HttpBackend(EndpointConfig config, Sleeper sleeper = {});

  std::string name() const override { return config_.name; }
  std::string fingerprint() const override;
  RawReply Complete(const ModelRequest& request) override;

  // Delay before retry number `attempt` (1-based) of `request_id`.
  double BackoffMs(const std::string& request_id, int attempt) const;

  static nlohmann::json RequestBody(const EndpointConfig& config,
                                    const ModelRequest& request);

 private:
  EndpointConfig config_;
  Sleeper sleeper_;
};

// ---------------------------------------------------------------------------
// Response cache

// Append-only JSON-lines file of {"key", "text", "usage"} records. A torn
// final line (interrupted write) is ignored on load.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path path);

  static std::string Key(const std::string& backend_fingerprint,
                         const ModelRequest& request);

  std::optional<RawReply> Lookup(const std::string& key) const;
  void Store(const std::string& key, const RawReply& reply);
  std::size_t size() const;

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<std::string, RawReply> entries_;
};

class CachedBackend : public Backend {
 public:
  CachedBackend(Backend& inner, ResponseCache& cache)
      : inner_(inner), cache_(cache) {}

  std::string name() const override { return inner_.name(); }
  std::string fingerprint() const override { return inner_.fingerprint(); }
  RawReply Complete(const ModelRequest& request) override;

 private:
  Backend& inner_;
  ResponseCache& cache_;
};

}  // namespace equity::gateway

#endif  // EQUITY_GATEWAY_BACKEND_H_
