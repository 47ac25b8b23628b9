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

#ifndef EQUITY_CORE_DIAGNOSTICS_H_
#define EQUITY_CORE_DIAGNOSTICS_H_

#include <mutex>
#include <string>
#include <vector>

namespace equity {

// Collects non-fatal warnings (duplicate qrels, profile fallbacks, ...).
// Thread-safe; the CLI drains it to stderr.
class Diagnostics {
 public:
  void Warn(std::string message);
  std::vector<std::string> warnings() const;
  bool empty() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> warnings_;
};

}  // namespace equity

#endif  // EQUITY_CORE_DIAGNOSTICS_H_
