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

#include "equity/core/diagnostics.h"

namespace equity {

void Diagnostics::Warn(std::string message) {
  std::lock_guard<std::mutex> lock(mu_);
  warnings_.push_back(std::move(message));
}

std::vector<std::string> Diagnostics::warnings() const {
  std::lock_guard<std::mutex> lock(mu_);
  return warnings_;
}

bool Diagnostics::empty() const {
  std::lock_guard<std::mutex> lock(mu_);
  return warnings_.empty();
}

}  // namespace equity
