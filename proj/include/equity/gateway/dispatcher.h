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

#ifndef EQUITY_GATEWAY_DISPATCHER_H_
#define EQUITY_GATEWAY_DISPATCHER_H_

#include <chrono>
#include <mutex>
#include <vector>

#include "equity/gateway/backend.h"
#include "equity/gateway/parse.h"

namespace equity::gateway {

struct DispatchOptions {
  std::size_t max_in_flight = 4;
  double requests_per_minute = 0.0;  // 0 disables the limiter
};

// Spaces request starts at least 60 / rpm seconds apart.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_minute);
  void Acquire();

 private:
  std::chrono::steady_clock::duration interval_;
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_;
};

// Sends requests through a backend with bounded concurrency, then parses
// and classifies every reply. Responses come back aligned with the input;
// requests sharing a request_id are sent once and share one response.
// Transport and protocol errors are recorded on the response; anything else
// a backend throws is rethrown after all workers stop.
class Dispatcher {
 public:
  Dispatcher(Backend& backend, DispatchOptions options,
             const RefusalLexicon& refusals, RepetitionRule rule = {});

  std::vector<ModelResponse> Run(const std::vector<ModelRequest>& requests);

 private:
  ModelResponse RunOne(const ModelRequest& request);

  Backend& backend_;
  DispatchOptions options_;
  const RefusalLexicon& refusals_;
  RepetitionRule rule_;
  RateLimiter limiter_;
};

}  // namespace equity::gateway

#endif  // EQUITY_GATEWAY_DISPATCHER_H_
