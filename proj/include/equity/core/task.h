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

#ifndef EQUITY_CORE_TASK_H_
#define EQUITY_CORE_TASK_H_

#include <string_view>

namespace equity {

enum class Task { kQa, kCtm };

std::string_view TaskName(Task task);

// Accepts "qa"/"mqa" and "ctm". Throws UsageError otherwise.
Task ParseTask(std::string_view name);

}  // namespace equity

#endif  // EQUITY_CORE_TASK_H_
