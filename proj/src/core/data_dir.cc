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

#include "equity/core/data_dir.h"

#include <cstdlib>

namespace equity {

std::filesystem::path DataDir() {
  if (const char* env = std::getenv("EQUITY_DATA_DIR");
      env != nullptr && *env != '\0') {
    return env;
  }
#ifdef EQUITY_DEFAULT_DATA_DIR
  return EQUITY_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

}  // namespace equity
