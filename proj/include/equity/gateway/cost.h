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

#ifndef EQUITY_GATEWAY_COST_H_
#define EQUITY_GATEWAY_COST_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "equity/gateway/types.h"
#include "json.hpp"

namespace equity::gateway {

// Either a flat price per query or prices per 1000 prompt and completion
// tokens.
struct CostRate {
  std::optional<double> per_query;
  double prompt_per_1k = 0.0;
  double completion_per_1k = 0.0;
};

// {"gpt-4": {"per_query": 0.06},
//  "local": {"prompt_per_1k": 0.01, "completion_per_1k": 0.03}}
class CostTable {
 public:
  static CostTable FromJson(const nlohmann::json& doc);
  static CostTable Load(const std::filesystem::path& path);

  void Set(const std::string& backend, CostRate rate);
  const CostRate* Find(const std::string& backend) const;

 private:
  std::map<std::string, CostRate> rates_;
};

struct UsageRecord {
  std::string backend;
  Usage usage;
};

struct BackendCost {
  std::size_t queries = 0;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  double usd = 0.0;
};

struct CostSummary {
  std::map<std::string, BackendCost> per_backend;
  double total_usd = 0.0;
};

// Unrounded totals. Throws ValidationError naming every backend the table
// does not price.
CostSummary EstimateCost(const std::vector<UsageRecord>& records,
                         const CostTable& table);
CostSummary EstimateCost(const std::vector<ModelResponse>& responses,
                         const CostTable& table);

// Two-decimal display form ("6.00").
std::string FormatUsd(double usd);

nlohmann::ordered_json ToJson(const CostSummary& summary);

}  // namespace equity::gateway

#endif  // EQUITY_GATEWAY_COST_H_
