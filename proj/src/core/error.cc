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

#include "equity/core/error.h"

namespace equity {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
      return "parse error";
    case ErrorKind::kValidation:
      return "validation error";
    case ErrorKind::kContract:
      return "contract error";
    case ErrorKind::kInjection:
      return "injection error";
    case ErrorKind::kTransport:
      return "transport error";
    case ErrorKind::kProtocol:
      return "protocol error";
    case ErrorKind::kUndefinedMetric:
      return "undefined metric";
    case ErrorKind::kNumeric:
      return "numeric error";
    case ErrorKind::kUsage:
      return "usage error";
    case ErrorKind::kComparability:
      return "comparability error";
  }
  return "error";
}

}  // namespace equity
