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

#include "equity/gateway/cost.h"

#include <cstdio>
#include <fstream>
#include <set>

#include "equity/core/error.h"

namespace equity::gateway {

CostTable CostTable::FromJson(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("cost table must be an object");
  CostTable table;
  for (const auto& [backend, node] : doc.items()) {
    if (!backend.empty() && backend[0] == '_') continue;
    if (!node.is_object()) {
      throw ValidationError("cost entry for " + backend + " must be an object");
    }
    CostRate rate;
    if (node.contains("per_query")) {
      rate.per_query = node.at("per_query").get<double>();
    }
    rate.prompt_per_1k = node.value("prompt_per_1k", 0.0);
    rate.completion_per_1k = node.value("completion_per_1k", 0.0);
    table.Set(backend, rate);
  }
  return table;
}

CostTable CostTable::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open cost table " + path.string());
  try {
    return FromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("cost table " + path.string() + ": " + e.what());
  }
}

void CostTable::Set(const std::string& backend, CostRate rate) {
  const bool negative = (rate.per_query && *rate.per_query < 0) ||
                        rate.prompt_per_1k < 0 || rate.completion_per_1k < 0;
  if (negative) {
    throw ValidationError("cost rates for " + backend + " must be >= 0");
  }
  rates_[backend] = rate;
}

const CostRate* CostTable::Find(const std::string& backend) const {
  auto it = rates_.find(backend);
  return it == rates_.end() ? nullptr : &it->second;
}

CostSummary EstimateCost(const std::vector<UsageRecord>& records,
                         const CostTable& table) {
  std::set<std::string> missing;
  for (const UsageRecord& record : records) {
    if (table.Find(record.backend) == nullptr) missing.insert(record.backend);
  }
  if (!missing.empty()) {
    std::string names;
    for (const std::string& name : missing) {
      names += (names.empty() ? "" : ", ") + name;
    }
    throw ValidationError("cost table has no rate for: " + names);
  }

  CostSummary summary;
  for (const UsageRecord& record : records) {
    BackendCost& cost = summary.per_backend[record.backend];
    ++cost.queries;
    cost.prompt_tokens += record.usage.prompt_tokens;
    cost.completion_tokens += record.usage.completion_tokens;
  }
  for (auto& [backend, cost] : summary.per_backend) {
    const CostRate& rate = *table.Find(backend);
    if (rate.per_query) {
      cost.usd = static_cast<double>(cost.queries) * *rate.per_query;
    } else {
      cost.usd = static_cast<double>(cost.prompt_tokens) / 1000.0 *
                     rate.prompt_per_1k +
                 static_cast<double>(cost.completion_tokens) / 1000.0 *
                     rate.completion_per_1k;
    }
    summary.total_usd += cost.usd;
  }
  return summary;
}

CostSummary EstimateCost(const std::vector<ModelResponse>& responses,
                         const CostTable& table) {
  std::vector<UsageRecord> records;
  records.reserve(responses.size());
  for (const ModelResponse& response : responses) {
    records.push_back({response.backend, response.usage});
  }
  return EstimateCost(records, table);
}

std::string FormatUsd(double usd) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.2f", usd);
  return buffer;
}

nlohmann::ordered_json ToJson(const CostSummary& summary) {
  nlohmann::ordered_json out;
  nlohmann::ordered_json backends = nlohmann::ordered_json::object();
  for (const auto& [backend, cost] : summary.per_backend) {
    backends[backend] = {{"queries", cost.queries},
                         {"prompt_tokens", cost.prompt_tokens},
                         {"completion_tokens", cost.completion_tokens},
                         {"usd", cost.usd},
                         {"usd_display", FormatUsd(cost.usd)}};
  }
  out["backends"] = std::move(backends);
  out["total_usd"] = summary.total_usd;
  out["total_usd_display"] = FormatUsd(summary.total_usd);
  return out;
}

}  // namespace equity::gateway
