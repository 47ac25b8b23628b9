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

#ifndef EQUITY_CORE_DATA_DIR_H_
#define EQUITY_CORE_DATA_DIR_H_

#include <filesystem>

namespace equity {

// Directory holding the shipped lexicon, prompts, profiles and cost table.
// EQUITY_DATA_DIR in the environment overrides the compiled-in location.
std::filesystem::path DataDir();

}  // namespace equity

#endif  // EQUITY_CORE_DATA_DIR_H_
