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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "equity/core/error.h"
#include "equity/core/hash.h"
#include "equity/core/text.h"
#include "equity/gateway/backend.h"

namespace equity::gateway {
namespace {

using Clock = std::chrono::steady_clock;

double MillisecondsSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::int64_t TokenCount(const nlohmann::json& reply, const std::string& pointer) {
  if (pointer.empty()) return 0;
  const nlohmann::json::json_pointer ptr(pointer);
  if (!reply.contains(ptr)) return 0;
  const nlohmann::json& value = reply.at(ptr);
  return value.is_number_integer() ? value.get<std::int64_t>() : 0;
}

bool Retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

HttpBackend::HttpBackend(EndpointConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleeper_(std::move(sleeper)) {
  if (config_.base_url.empty()) {
    throw ValidationError("endpoint " + config_.name + " has no base_url");
  }
  if (config_.max_attempts < 1) {
    throw ValidationError("endpoint " + config_.name +
                          " needs max_attempts >= 1");
  }
  if (!sleeper_) {
    sleeper_ = [](double ms) {
      std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(ms));
    };
  }
}

std::string HttpBackend::fingerprint() const {
  return config_.name + "|" + config_.base_url + config_.path + "|" +
         config_.model;
}

double HttpBackend::BackoffMs(const std::string& request_id,
                              int attempt) const {
  const double base =
      std::min(config_.max_backoff_ms,
               config_.initial_backoff_ms * std::ldexp(1.0, attempt - 1));
  const double u =
      StableUnit(config_.jitter_seed, {request_id, std::to_string(attempt)});
  return base * (0.5 + 0.5 * u);
}

nlohmann::json HttpBackend::RequestBody(const EndpointConfig& config,
                                        const ModelRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  for (const Message& message : request.messages) {
    messages.push_back({{"role", message.role}, {"content", message.content}});
  }
  return {{"model", config.model},
          {"messages", std::move(messages)},
          {"temperature", request.decode.temperature},
          {"max_tokens", request.decode.max_tokens}};
}

RawReply HttpBackend::Complete(const ModelRequest& request) {
  ValidateRequest(request);
  httplib::Headers headers;
  if (!config_.credential_env.empty()) {
    const char* credential = std::getenv(config_.credential_env.c_str());
    if (credential == nullptr || *credential == '\0') {
      throw ValidationError("environment variable " + config_.credential_env +
                            " for endpoint " + config_.name + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + credential);
  }
  const std::string body = RequestBody(config_, request).dump();
  const auto timeout = std::chrono::duration<double>(config_.timeout_s);
  const auto timeout_us =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout);

  const Clock::time_point start = Clock::now();
  int last_status = 0;
  std::string last_problem;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(timeout_us);
    client.set_read_timeout(timeout_us);
    client.set_write_timeout(timeout_us);
    double retry_after_ms = 0.0;
    httplib::Result result =
        client.Post(config_.path, headers, body, "application/json");
    if (!result) {
      last_status = 0;
      last_problem = httplib::to_string(result.error());
    } else if (result->status >= 200 && result->status < 300) {
      nlohmann::json reply;
      try {
        reply = nlohmann::json::parse(result->body);
      } catch (const nlohmann::json::parse_error&) {
        throw ProtocolError("endpoint " + config_.name +
                            " returned a non-JSON body");
      }
      const nlohmann::json::json_pointer text_ptr(config_.text_pointer);
      if (!reply.contains(text_ptr) || !reply.at(text_ptr).is_string()) {
        throw ProtocolError("endpoint " + config_.name + " reply has no text at " +
                            config_.text_pointer);
      }
      RawReply out;
      out.text = reply.at(text_ptr).get<std::string>();
      out.usage.prompt_tokens = TokenCount(reply, config_.prompt_tokens_pointer);
      out.usage.completion_tokens =
          TokenCount(reply, config_.completion_tokens_pointer);
      out.attempts = attempt;
      out.latency_ms = MillisecondsSince(start);
      return out;
    } else if (Retryable(result->status)) {
      last_status = result->status;
      last_problem = "HTTP " + std::to_string(result->status);
      if (result->has_header("Retry-After")) {
        const std::string value = result->get_header_value("Retry-After");
        char* end = nullptr;
        const double seconds = std::strtod(value.c_str(), &end);
        if (end != value.c_str() && seconds > 0) retry_after_ms = seconds * 1000;
      }
    } else {
      throw TransportError("endpoint " + config_.name + " answered HTTP " +
                               std::to_string(result->status),
                           result->status, attempt);
    }
    if (attempt < config_.max_attempts) {
      sleeper_(std::min(config_.max_backoff_ms,
                        std::max(retry_after_ms,
                                 BackoffMs(request.request_id, attempt))));
    }
  }
  throw TransportError("endpoint " + config_.name + " failed after " +
                           std::to_string(config_.max_attempts) +
                           " attempts (last: " + last_problem + ")",
                       last_status, config_.max_attempts);
}

ResponseCache::ResponseCache(std::filesystem::path path)
    : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!TrimAscii(line).empty()) lines.push_back(std::move(line));
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(lines[i]);
      RawReply reply;
      reply.text = record.at("text").get<std::string>();
      reply.usage.prompt_tokens =
          record.at("usage").at("prompt_tokens").get<std::int64_t>();
      reply.usage.completion_tokens =
          record.at("usage").at("completion_tokens").get<std::int64_t>();
      reply.attempts = 0;
      entries_[record.at("key").get<std::string>()] = std::move(reply);
    } catch (const nlohmann::json::exception& e) {
      if (i + 1 == lines.size()) break;
      throw ParseError("response cache " + path_.string() + ": " + e.what(),
                       i + 1);
    }
  }
}

std::string ResponseCache::Key(const std::string& backend_fingerprint,
                               const ModelRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  for (const Message& message : request.messages) {
    messages.push_back({{"role", message.role}, {"content", message.content}});
  }
  const nlohmann::json material = {
      {"backend", backend_fingerprint},
      {"messages", std::move(messages)},
      {"temperature", request.decode.temperature},
      {"max_tokens", request.decode.max_tokens}};
  return Sha256Hex(material.dump());
}

std::optional<RawReply> ResponseCache::Lookup(const std::string& key) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::Store(const std::string& key, const RawReply& reply) {
  std::lock_guard<std::mutex> lock(mu_);
  if (entries_.contains(key)) return;
  if (path_.has_parent_path()) {
    std::filesystem::create_directories(path_.parent_path());
  }
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw ValidationError("cannot append to " + path_.string());
  const nlohmann::json record = {
      {"key", key},
      {"text", reply.text},
      {"usage",
       {{"prompt_tokens", reply.usage.prompt_tokens},
        {"completion_tokens", reply.usage.completion_tokens}}}};
  out << record.dump() << '\n';
  out.flush();
  entries_[key] = reply;
}

std::size_t ResponseCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

RawReply CachedBackend::Complete(const ModelRequest& request) {
  const std::string key = ResponseCache::Key(inner_.fingerprint(), request);
  if (std::optional<RawReply> hit = cache_.Lookup(key)) return *hit;
  RawReply reply = inner_.Complete(request);
  cache_.Store(key, reply);
  return reply;
}

}  // namespace equity::gateway
