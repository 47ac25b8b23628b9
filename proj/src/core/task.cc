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

#include "equity/core/task.h"

#include <string>

#include "equity/core/error.h"
#include "equity/core/text.h"

namespace equity {

std::string_view TaskName(Task task) {
  return task == Task::kQa ? "qa" : "ctm";
}

Task ParseTask(std::string_view name) {
  const std::string lower = ToLowerAscii(name);
  if (lower == "qa" || lower == "mqa") return Task::kQa;
  if (lower == "ctm") return Task::kCtm;
  throw UsageError("unknown task '" + std::string(name) +
                   "' (expected qa or ctm)");
}

}  // namespace equity
