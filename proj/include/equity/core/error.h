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

#ifndef EQUITY_CORE_ERROR_H_
#define EQUITY_CORE_ERROR_H_

#include <stdexcept>
#include <string>

namespace equity {

enum class ErrorKind {
  kParse,
  kValidation,
  kContract,
  kInjection,
  kTransport,
  kProtocol,
  kUndefinedMetric,
  kNumeric,
  kUsage,
  kComparability,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Malformed input. `line` is 1-based, 0 when not line oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0)
      : Error(ErrorKind::kParse, line == 0 ? message
                                           : "line " + std::to_string(line) +
                                                 ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorKind::kValidation, message) {}
};

// Caller violated a documented precondition.
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& message)
      : Error(ErrorKind::kContract, message) {}
};

class InjectionError : public Error {
 public:
  explicit InjectionError(const std::string& message)
      : Error(ErrorKind::kInjection, message) {}
};

// Network failure after retries. `status` is the last HTTP status, or 0 when
// no response was received.
class TransportError : public Error {
 public:
  TransportError(const std::string& message, int status, int attempts)
      : Error(ErrorKind::kTransport, message),
        status_(status),
        attempts_(attempts) {}

  int status() const { return status_; }
  int attempts() const { return attempts_; }

 private:
  int status_;
  int attempts_;
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& message)
      : Error(ErrorKind::kProtocol, message) {}
};

class UndefinedMetricError : public Error {
 public:
  explicit UndefinedMetricError(const std::string& message)
      : Error(ErrorKind::kUndefinedMetric, message) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& message)
      : Error(ErrorKind::kNumeric, message) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message)
      : Error(ErrorKind::kUsage, message) {}
};

class ComparabilityError : public Error {
 public:
  explicit ComparabilityError(const std::string& message)
      : Error(ErrorKind::kComparability, message) {}
};

}  // namespace equity

#endif  // EQUITY_CORE_ERROR_H_
