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

#include "testing.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "equity/core/hash.h"
#include "json.hpp"

namespace equity::testing {

TempDir::TempDir() {
  static std::uint64_t counter = 0;
  std::random_device rd;
  for (int attempt = 0; attempt < 100; ++attempt) {
    const std::uint64_t tag = (static_cast<std::uint64_t>(rd()) << 20) ^ ++counter;
    path_ = std::filesystem::temp_directory_path() /
            ("equity-test-" + std::to_string(tag));
    if (std::filesystem::create_directory(path_)) return;
  }
  throw std::runtime_error("could not create a temp directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<corpus::QAItem> SyntheticQaItems(std::size_t count,
                                             std::uint64_t seed) {
  static const char* kFindings[] = {"fever", "cough", "chest pain",
                                    "fatigue", "rash", "headache"};
  std::vector<corpus::QAItem> items;
  for (std::size_t i = 0; i < count; ++i) {
    corpus::QAItem item;
    item.id = "q" + std::to_string(i);
    const std::uint64_t h = StableHash(seed, {item.id});
    item.question = "A " + std::to_string(20 + h % 60) +
                    "-year-old patient presents with " +
                    kFindings[(h >> 8) % 6] +
                    ". What is the most likely diagnosis?";
    for (char label = 'A'; label <= 'D'; ++label) {
      item.options[label] = "option " + std::string(1, label) + " for " + item.id;
    }
    item.gold = static_cast<char>('A' + i % 4);
    items.push_back(std::move(item));
  }
  return items;
}

void WriteQaJsonl(const std::filesystem::path& path,
                  const std::vector<corpus::QAItem>& items) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  for (const corpus::QAItem& item : items) {
    nlohmann::ordered_json record;
    record["id"] = item.id;
    record["question"] = item.question;
    nlohmann::ordered_json options = nlohmann::ordered_json::object();
    for (const auto& [label, text] : item.options) {
      options[std::string(1, label)] = text;
    }
    record["options"] = options;
    record["answer"] = std::string(1, item.gold);
    out << record.dump() << "\n";
  }
}

std::string RandomVignette(std::mt19937_64& rng) {
  static const std::vector<std::string> kSubjects = {
      "patient", "man", "woman", "person", "adult", "individual"};
  static const std::vector<std::string> kDescriptors = {
      "", "", "", "", "Black ", "Hispanic ", "Asian ", "White ",
      "homeless ", "low-income ", "unemployed ", "disabled "};
  static const std::vector<std::string> kFindings = {
      "acute chest pain", "Type 2 Diabetes", "a productive cough",
      "Stage 3 hypertension", "worsening dyspnea", "a painful rash",
      "new-onset seizures", "chronic kidney disease"};
  static const std::vector<std::string> kTails = {
      " presents to the emergency department.",
      ". What is the next best step in management?",
      " is evaluated in clinic. Which test is most appropriate?",
      " reports symptoms for three days."};
  auto pick = [&rng](const std::vector<std::string>& pool) -> const std::string& {
    return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
  };
  const int age = std::uniform_int_distribution<int>(18, 90)(rng);
  return "A " + std::to_string(age) + "-year-old " + pick(kDescriptors) +
         pick(kSubjects) + " with " + pick(kFindings) + pick(kTails);
}

metrics::OutcomeTable RandomQaTable(std::mt19937_64& rng, std::size_t items,
                                    const std::vector<Category>& categories,
                                    double skip_rate) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> letter(0, 3);
  metrics::OutcomeTable table(Task::kQa);
  for (std::size_t i = 0; i < items; ++i) {
    const std::string id = "i" + std::to_string(i);
    const char gold = 'A';
    for (Category category : categories) {
      if (category != Category::kBase && unit(rng) < skip_rate) {
        table.MarkSkipped(id, category, "random skip");
        continue;
      }
      metrics::QaOutcome outcome;
      const double u = unit(rng);
      if (u < 0.08) {
        outcome.failure = metrics::FailureKind::kRejection;
      } else if (u < 0.5) {
        outcome.answer = static_cast<char>('A' + letter(rng));
      } else {
        outcome.answer = gold;
      }
      outcome.correct = !outcome.failure && outcome.answer == gold;
      table.SetQa(id, category, outcome);
    }
  }
  return table;
}

}  // namespace equity::testing
