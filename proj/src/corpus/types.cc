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

#include "equity/corpus/types.h"

#include "equity/core/error.h"

namespace equity::corpus {

const char* SexRestrictionName(SexRestriction restriction) {
  switch (restriction) {
    case SexRestriction::kMale:
      return "male";
    case SexRestriction::kFemale:
      return "female";
    case SexRestriction::kNone:
      break;
  }
  return "none";
}

void Qrels::Set(const std::string& topic, const std::string& trial,
                int grade) {
  if (grade < 0 || grade > 2) {
    throw ValidationError("qrels grade " + std::to_string(grade) +
                          " outside {0,1,2}");
  }
  grades_[{topic, trial}] = grade;
}

std::optional<int> Qrels::Grade(const std::string& topic,
                                const std::string& trial) const {
  auto it = grades_.find({topic, trial});
  if (it == grades_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<std::string, int>> Qrels::Judged(
    const std::string& topic) const {
  std::vector<std::pair<std::string, int>> out;
  for (auto it = grades_.lower_bound({topic, std::string()});
       it != grades_.end() && it->first.first == topic; ++it) {
    out.emplace_back(it->first.second, it->second);
  }
  return out;
}

std::vector<std::string> Qrels::Relevant(const std::string& topic) const {
  std::vector<std::string> out;
  for (const auto& [trial, grade] : Judged(topic)) {
    if (grade > 0) out.push_back(trial);
  }
  return out;
}

std::vector<std::string> Qrels::Topics() const {
  std::vector<std::string> out;
  for (const auto& [key, grade] : grades_) {
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  }
  return out;
}

}  // namespace equity::corpus
