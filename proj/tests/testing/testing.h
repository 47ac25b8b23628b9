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

#ifndef EQUITY_TESTS_TESTING_TESTING_H_
#define EQUITY_TESTS_TESTING_TESTING_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "equity/corpus/types.h"
#include "equity/metrics/outcome.h"

namespace equity::testing {

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

void WriteText(const std::filesystem::path& path, const std::string& text);
std::string ReadText(const std::filesystem::path& path);

// `count` four-option questions about a neutral "patient" subject, written
// as MedQA JSON lines. Gold labels cycle through A-D.
std::vector<corpus::QAItem> SyntheticQaItems(std::size_t count,
                                             std::uint64_t seed);
void WriteQaJsonl(const std::filesystem::path& path,
                  const std::vector<corpus::QAItem>& items);

// A short clinical vignette built from random pieces. About half carry one
// or two demographic mentions that neutralization must remove.
std::string RandomVignette(std::mt19937_64& rng);

// A random QA outcome table over `items` x `categories` with answers drawn
// from a small alphabet so that equal wrong answers are common. Roughly
// `skip_rate` of non-Base cells are skipped.
metrics::OutcomeTable RandomQaTable(std::mt19937_64& rng, std::size_t items,
                                    const std::vector<Category>& categories,
                                    double skip_rate = 0.1);

}  // namespace equity::testing

#endif  // EQUITY_TESTS_TESTING_TESTING_H_
