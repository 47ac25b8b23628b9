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

#include "equity/gateway/dispatcher.h"

#include <atomic>
#include <exception>
#include <map>
#include <thread>

#include "equity/core/error.h"

namespace equity::gateway {

RateLimiter::RateLimiter(double requests_per_minute)
    : interval_(requests_per_minute > 0
                    ? std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(60.0 / requests_per_minute))
                    : std::chrono::steady_clock::duration::zero()),
      next_(std::chrono::steady_clock::now()) {}

void RateLimiter::Acquire() {
  if (interval_ == std::chrono::steady_clock::duration::zero()) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard<std::mutex> lock(mu_);
    slot = std::max(next_, std::chrono::steady_clock::now());
    next_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

Dispatcher::Dispatcher(Backend& backend, DispatchOptions options,
                       const RefusalLexicon& refusals, RepetitionRule rule)
    : backend_(backend),
      options_(options),
      refusals_(refusals),
      rule_(rule),
      limiter_(options.requests_per_minute) {
  if (options_.max_in_flight == 0) {
    throw ValidationError("max_in_flight must be at least 1");
  }
}

ModelResponse Dispatcher::RunOne(const ModelRequest& request) {
  ValidateRequest(request);
  ModelResponse response;
  response.request_id = request.request_id;
  response.backend = backend_.name();
  limiter_.Acquire();
  try {
    RawReply reply = backend_.Complete(request);
    response.raw_text = std::move(reply.text);
    response.usage = reply.usage;
    response.latency_ms = reply.latency_ms;
    response.attempts = reply.attempts;
  } catch (const TransportError& e) {
    response.transport_error = e.what();
    response.attempts = e.attempts();
  } catch (const ProtocolError& e) {
    response.transport_error = e.what();
    response.attempts = 1;
  }
  ParseAndClassify(request.context, response, refusals_, rule_);
  return response;
}

std::vector<ModelResponse> Dispatcher::Run(
    const std::vector<ModelRequest>& requests) {
  std::map<std::string, std::size_t> first_index;
  std::vector<std::size_t> unique;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    if (first_index.emplace(requests[i].request_id, i).second) {
      unique.push_back(i);
    }
  }

  std::vector<ModelResponse> computed(requests.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t k = next.fetch_add(1);
      if (k >= unique.size()) return;
      const std::size_t i = unique[k];
      try {
        computed[i] = RunOne(requests[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        stop.store(true);
      }
    }
  };

  const std::size_t workers = std::min(options_.max_in_flight, unique.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(worker);
    for (std::thread& thread : threads) thread.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ModelResponse> out;
  out.reserve(requests.size());
  for (const ModelRequest& request : requests) {
    out.push_back(computed[first_index.at(request.request_id)]);
  }
  return out;
}

}  // namespace equity::gateway
