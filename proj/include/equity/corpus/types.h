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

#ifndef EQUITY_CORPUS_TYPES_H_
#define EQUITY_CORPUS_TYPES_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace equity::corpus {

// One multiple-choice question. Option labels are single uppercase letters.
struct QAItem {
  std::string id;
  std::string question;
  std::map<char, std::string> options;
  char gold = 'A';
  nlohmann::ordered_json meta;  // null or object

  const std::string& GoldText() const { return options.at(gold); }
};

struct PatientTopic {
  std::string id;
  std::string text;
};

enum class SexRestriction { kNone, kMale, kFemale };

const char* SexRestrictionName(SexRestriction restriction);

struct TrialDoc {
  std::string id;
  std::string title;
  std::string summary;
  std::vector<std::string> inclusion;
  std::vector<std::string> exclusion;
  SexRestriction sex_restriction = SexRestriction::kNone;

  std::size_t CriteriaCount() const {
    return inclusion.size() + exclusion.size();
  }
};

// TREC-style relevance judgments: 0 not relevant, 1 excluded-but-related,
// 2 eligible.
class Qrels {
 public:
  void Set(const std::string& topic, const std::string& trial, int grade);

  std::optional<int> Grade(const std::string& topic,
                           const std::string& trial) const;

  // Judged (trial, grade) pairs for a topic, ordered by trial id.
  std::vector<std::pair<std::string, int>> Judged(
      const std::string& topic) const;

  // Trials with grade > 0 for a topic, ordered by trial id.
  std::vector<std::string> Relevant(const std::string& topic) const;

  std::vector<std::string> Topics() const;

  std::size_t size() const { return grades_.size(); }
  bool empty() const { return grades_.empty(); }

  const std::map<std::pair<std::string, std::string>, int>& entries() const {
    return grades_;
  }

 private:
  std::map<std::pair<std::string, std::string>, int> grades_;
};

}  // namespace equity::corpus

#endif  // EQUITY_CORPUS_TYPES_H_
