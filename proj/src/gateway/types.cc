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

#include "equity/gateway/types.h"

#include "equity/core/error.h"

namespace equity::gateway {

std::string_view EligibilityLabelName(EligibilityLabel label) {
  switch (label) {
    case EligibilityLabel::kIncluded:
      return "included";
    case EligibilityLabel::kNotIncluded:
      return "not included";
    case EligibilityLabel::kExcluded:
      return "excluded";
    case EligibilityLabel::kNotExcluded:
      return "not excluded";
  }
  return "included";
}

std::string_view FailureKindName(FailureKind kind) {
  switch (kind) {
    case FailureKind::kMissingDocument:
      return "missing_document";
    case FailureKind::kRejection:
      return "rejection";
    case FailureKind::kRepetition:
      return "repetition";
  }
  return "missing_document";
}

std::optional<FailureKind> ParseFailureKind(std::string_view name) {
  for (FailureKind kind : {FailureKind::kMissingDocument,
                           FailureKind::kRejection, FailureKind::kRepetition}) {
    if (FailureKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

void ValidateRequest(const ModelRequest& request) {
  bool has_user = false;
  for (const Message& message : request.messages) {
    if (message.role != "system" && message.role != "user") {
      throw ContractError("request " + request.request_id +
                          " has a message with role '" + message.role + "'");
    }
    has_user = has_user || message.role == "user";
  }
  if (!has_user) {
    throw ContractError("request " + request.request_id +
                        " has no user message");
  }
  if (!(request.decode.temperature >= 0.0)) {
    throw ContractError("temperature must be >= 0");
  }
  if (request.decode.max_tokens <= 0) {
    throw ContractError("max_tokens must be positive");
  }
}

nlohmann::ordered_json ToJson(const Usage& usage) {
  return {{"prompt_tokens", usage.prompt_tokens},
          {"completion_tokens", usage.completion_tokens}};
}

nlohmann::ordered_json ToJson(const ModelResponse& response) {
  nlohmann::ordered_json out;
  out["request_id"] = response.request_id;
  out["backend"] = response.backend;
  out["raw_text"] = response.raw_text;
  if (const char* answer = std::get_if<char>(&response.parsed)) {
    out["parsed"] = std::string(1, *answer);
  } else if (const auto* labels =
                 std::get_if<std::vector<EligibilityLabel>>(&response.parsed)) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (EligibilityLabel label : *labels) {
      list.push_back(std::string(EligibilityLabelName(label)));
    }
    out["parsed"] = std::move(list);
  } else {
    out["parsed"] = nullptr;
  }
  out["failure"] = response.failure
                       ? nlohmann::ordered_json(
                             std::string(FailureKindName(*response.failure)))
                       : nlohmann::ordered_json(nullptr);
  out["usage"] = ToJson(response.usage);
  out["attempts"] = response.attempts;
  if (response.transport_error) {
    out["transport_error"] = *response.transport_error;
  }
  return out;
}

}  // namespace equity::gateway
