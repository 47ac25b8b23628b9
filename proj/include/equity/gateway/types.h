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

#ifndef EQUITY_GATEWAY_TYPES_H_
#define EQUITY_GATEWAY_TYPES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "equity/core/category.h"
#include "equity/core/task.h"
#include "json.hpp"

namespace equity::gateway {

enum class EligibilityLabel { kIncluded, kNotIncluded, kExcluded, kNotExcluded };

enum class FailureKind { kMissingDocument, kRejection, kRepetition };

std::string_view EligibilityLabelName(EligibilityLabel label);
std::string_view FailureKindName(FailureKind kind);
std::optional<FailureKind> ParseFailureKind(std::string_view name);

struct Message {
  std::string role;  // "system" or "user"
  std::string content;
};

struct DecodeParams {
  double temperature = 0.0;
  int max_tokens = 512;
};

// What the request is about. Remote backends ignore it; the mock backend
// reads it to look up ground truth.
struct RequestContext {
  Task task = Task::kQa;
  std::string item_id;  // QA item id or CTM topic id
  std::string trial_id;  // CTM only
  Category category = Category::kBase;
  std::map<char, std::string> options;  // QA only
  std::size_t criteria_count = 0;       // CTM only
};

struct ModelRequest {
  std::string request_id;
  std::vector<Message> messages;
  DecodeParams decode;
  RequestContext context;
};

// Throws ContractError unless the request has a user message, a
// non-negative temperature and a positive token budget.
void ValidateRequest(const ModelRequest& request);

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

// What a backend returns before parsing.
struct RawReply {
  std::string text;
  Usage usage;
  double latency_ms = 0.0;
  int attempts = 1;
};

struct Unparseable {
  bool operator==(const Unparseable&) const = default;
};

using Parsed =
    std::variant<Unparseable, char, std::vector<EligibilityLabel>>;

struct ModelResponse {
  std::string request_id;
  std::string backend;
  std::string raw_text;
  Parsed parsed;
  std::optional<FailureKind> failure;
  Usage usage;
  double latency_ms = 0.0;
  int attempts = 0;
  // Set when the backend could not be reached after retries.
  std::optional<std::string> transport_error;

  bool parsed_ok() const {
    return !std::holds_alternative<Unparseable>(parsed);
  }
};

nlohmann::ordered_json ToJson(const Usage& usage);
nlohmann::ordered_json ToJson(const ModelResponse& response);

}  // namespace equity::gateway

#endif  // EQUITY_GATEWAY_TYPES_H_
