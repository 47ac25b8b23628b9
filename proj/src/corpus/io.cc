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

#include "equity/corpus/io.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "equity/core/error.h"
#include "equity/core/text.h"

namespace equity::corpus {
namespace {

using ordered_json = nlohmann::ordered_json;

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  return out;
}

// Calls `fn(record, line_number)` for each non-blank line.
template <typename Fn>
void ForEachJsonLine(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (TrimAscii(line).empty()) continue;
    ordered_json record;
    try {
      record = ordered_json::parse(line);
    } catch (const ordered_json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_number);
    }
    if (!record.is_object()) {
      throw ParseError("record is not a JSON object", line_number);
    }
    fn(record, line_number);
  }
}

std::string RequireString(const ordered_json& record, const char* key,
                          std::size_t line) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) {
    throw ParseError(std::string("missing field '") + key + "'", line);
  }
  if (!it->is_string()) {
    throw ParseError(std::string("field '") + key + "' is not a string", line);
  }
  return it->get<std::string>();
}

std::vector<std::string> RequireStringArray(const ordered_json& record,
                                            const char* key,
                                            std::size_t line) {
  std::vector<std::string> out;
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw ParseError(std::string("field '") + key + "' is not an array", line);
  }
  for (const auto& entry : *it) {
    if (!entry.is_string()) {
      throw ParseError(std::string("field '") + key +
                           "' contains a non-string entry",
                       line);
    }
    out.push_back(entry.get<std::string>());
  }
  return out;
}

void CheckUniqueId(std::set<std::string>& seen, const std::string& id,
                   std::size_t line) {
  if (id.empty()) {
    throw ValidationError("line " + std::to_string(line) + ": empty id");
  }
  if (!seen.insert(id).second) {
    throw ValidationError("line " + std::to_string(line) + ": duplicate id '" +
                          id + "'");
  }
}

std::string Dump(const ordered_json& j) {
  return j.dump(-1, ' ', false, ordered_json::error_handler_t::strict);
}

}  // namespace

QaFormat ParseQaFormat(std::string_view name) {
  if (name == "medqa-jsonl" || name == "medqa") return QaFormat::kMedQa;
  if (name == "medmcqa-jsonl" || name == "medmcqa") return QaFormat::kMedMcQa;
  throw UsageError("unknown QA format '" + std::string(name) +
                   "' (expected medqa-jsonl or medmcqa-jsonl)");
}

const char* QaFormatName(QaFormat format) {
  return format == QaFormat::kMedQa ? "medqa-jsonl" : "medmcqa-jsonl";
}

std::vector<QAItem> ReadQa(std::istream& in, QaFormat format) {
  std::vector<QAItem> items;
  std::set<std::string> seen;
  ForEachJsonLine(in, [&](const ordered_json& record, std::size_t line) {
    QAItem item;
    item.id = RequireString(record, "id", line);
    item.question = RequireString(record, "question", line);
    auto options = record.find("options");
    if (options == record.end() || !options->is_object()) {
      throw ParseError("missing or non-object field 'options'", line);
    }
    for (const auto& [label, text] : options->items()) {
      if (label.size() != 1 || label[0] < 'A' || label[0] > 'Z') {
        throw ValidationError("line " + std::to_string(line) +
                              ": option label '" + label +
                              "' is not a single uppercase letter");
      }
      if (!text.is_string()) {
        throw ParseError("option '" + label + "' is not a string", line);
      }
      item.options[label[0]] = text.get<std::string>();
    }
    const std::string answer = RequireString(record, "answer", line);
    if (answer.size() != 1) {
      throw ValidationError("line " + std::to_string(line) + ": answer '" +
                            answer + "' is not a single option label");
    }
    item.gold = answer[0];
    if (auto meta = record.find("meta");
        meta != record.end() && !meta->is_null()) {
      if (!meta->is_object()) {
        throw ParseError("field 'meta' is not an object", line);
      }
      item.meta = *meta;
    }

    if (item.options.size() < 2) {
      throw ValidationError("line " + std::to_string(line) +
                            ": fewer than 2 options");
    }
    if (format == QaFormat::kMedMcQa) {
      const bool abcd = item.options.size() == 4 &&
                        item.options.begin()->first == 'A' &&
                        item.options.rbegin()->first == 'D';
      if (!abcd) {
        throw ValidationError("line " + std::to_string(line) +
                              ": medmcqa records need options A-D");
      }
    }
    if (!item.options.contains(item.gold)) {
      throw ValidationError("line " + std::to_string(line) + ": answer '" +
                            answer + "' is not one of the options");
    }
    CheckUniqueId(seen, item.id, line);
    items.push_back(std::move(item));
  });
  return items;
}

std::vector<QAItem> LoadQa(const std::filesystem::path& path,
                           QaFormat format) {
  std::ifstream in = OpenForRead(path);
  return ReadQa(in, format);
}

void WriteQa(std::ostream& out, const std::vector<QAItem>& items) {
  for (const QAItem& item : items) {
    ordered_json record;
    record["id"] = item.id;
    record["question"] = item.question;
    ordered_json options = ordered_json::object();
    for (const auto& [label, text] : item.options) {
      options[std::string(1, label)] = text;
    }
    record["options"] = std::move(options);
    record["answer"] = std::string(1, item.gold);
    if (item.meta.is_object() && !item.meta.empty()) {
      record["meta"] = item.meta;
    }
    out << Dump(record) << '\n';
  }
}

void SaveQa(const std::filesystem::path& path,
            const std::vector<QAItem>& items) {
  std::ofstream out = OpenForWrite(path);
  WriteQa(out, items);
}

std::vector<PatientTopic> ReadTopics(std::istream& in) {
  std::vector<PatientTopic> topics;
  std::set<std::string> seen;
  ForEachJsonLine(in, [&](const ordered_json& record, std::size_t line) {
    PatientTopic topic;
    topic.id = RequireString(record, "id", line);
    topic.text = RequireString(record, "text", line);
    if (TrimAscii(topic.text).empty()) {
      throw ValidationError("line " + std::to_string(line) + ": topic '" +
                            topic.id + "' has blank text");
    }
    CheckUniqueId(seen, topic.id, line);
    topics.push_back(std::move(topic));
  });
  return topics;
}

std::vector<PatientTopic> LoadTopics(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  return ReadTopics(in);
}

void WriteTopics(std::ostream& out, const std::vector<PatientTopic>& topics) {
  for (const PatientTopic& topic : topics) {
    ordered_json record;
    record["id"] = topic.id;
    record["text"] = topic.text;
    out << Dump(record) << '\n';
  }
}

void SaveTopics(const std::filesystem::path& path,
                const std::vector<PatientTopic>& topics) {
  std::ofstream out = OpenForWrite(path);
  WriteTopics(out, topics);
}

std::vector<TrialDoc> ReadTrials(std::istream& in) {
  std::vector<TrialDoc> trials;
  std::set<std::string> seen;
  ForEachJsonLine(in, [&](const ordered_json& record, std::size_t line) {
    TrialDoc trial;
    trial.id = RequireString(record, "id", line);
    trial.title = RequireString(record, "title", line);
    trial.summary = RequireString(record, "summary", line);
    trial.inclusion = RequireStringArray(record, "inclusion", line);
    trial.exclusion = RequireStringArray(record, "exclusion", line);
    if (auto sex = record.find("sex_restriction");
        sex != record.end() && !sex->is_null()) {
      if (!sex->is_string()) {
        throw ParseError("field 'sex_restriction' is not a string", line);
      }
      const std::string value = ToLowerAscii(sex->get<std::string>());
      if (value == "male") {
        trial.sex_restriction = SexRestriction::kMale;
      } else if (value == "female") {
        trial.sex_restriction = SexRestriction::kFemale;
      } else if (value == "none" || value.empty()) {
        trial.sex_restriction = SexRestriction::kNone;
      } else {
        throw ValidationError("line " + std::to_string(line) +
                              ": sex_restriction '" + value +
                              "' is not male, female or null");
      }
    }
    if (trial.inclusion.empty() && trial.exclusion.empty()) {
      throw ValidationError("line " + std::to_string(line) + ": trial '" +
                            trial.id + "' has no inclusion or exclusion "
                            "criteria");
    }
    CheckUniqueId(seen, trial.id, line);
    trials.push_back(std::move(trial));
  });
  return trials;
}

std::vector<TrialDoc> LoadTrials(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  return ReadTrials(in);
}

void WriteTrials(std::ostream& out, const std::vector<TrialDoc>& trials) {
  for (const TrialDoc& trial : trials) {
    ordered_json record;
    record["id"] = trial.id;
    record["title"] = trial.title;
    record["summary"] = trial.summary;
    record["inclusion"] = trial.inclusion;
    record["exclusion"] = trial.exclusion;
    if (trial.sex_restriction == SexRestriction::kNone) {
      record["sex_restriction"] = nullptr;
    } else {
      record["sex_restriction"] = SexRestrictionName(trial.sex_restriction);
    }
    out << Dump(record) << '\n';
  }
}

void SaveTrials(const std::filesystem::path& path,
                const std::vector<TrialDoc>& trials) {
  std::ofstream out = OpenForWrite(path);
  WriteTrials(out, trials);
}

Qrels ReadQrels(std::istream& in, Diagnostics* diagnostics) {
  Qrels qrels;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::vector<std::string_view> fields = SplitUnicodeWhitespace(line);
    if (fields.empty()) continue;
    if (fields.size() != 4) {
      throw ParseError("expected 4 columns 'topic 0 trial grade', got " +
                           std::to_string(fields.size()),
                       line_number);
    }
    const std::string topic(fields[0]);
    const std::string trial(fields[2]);
    int grade = 0;
    try {
      std::size_t consumed = 0;
      grade = std::stoi(std::string(fields[3]), &consumed);
      if (consumed != fields[3].size()) throw std::invalid_argument("trail");
    } catch (const std::exception&) {
      throw ParseError("grade '" + std::string(fields[3]) +
                           "' is not an integer",
                       line_number);
    }
    if (grade < 0 || grade > 2) {
      throw ValidationError("line " + std::to_string(line_number) +
                            ": grade " + std::to_string(grade) +
                            " outside {0,1,2}");
    }
    if (std::optional<int> previous = qrels.Grade(topic, trial)) {
      if (diagnostics != nullptr) {
        diagnostics->Warn("qrels line " + std::to_string(line_number) +
                          ": duplicate (" + topic + ", " + trial +
                          ") overrides grade " + std::to_string(*previous) +
                          " with " + std::to_string(grade));
      }
    }
    qrels.Set(topic, trial, grade);
  }
  return qrels;
}

Qrels LoadQrels(const std::filesystem::path& path, Diagnostics* diagnostics) {
  std::ifstream in = OpenForRead(path);
  return ReadQrels(in, diagnostics);
}

void WriteQrels(std::ostream& out, const Qrels& qrels) {
  for (const auto& [key, grade] : qrels.entries()) {
    out << key.first << " 0 " << key.second << ' ' << grade << '\n';
  }
}

void SaveQrels(const std::filesystem::path& path, const Qrels& qrels) {
  std::ofstream out = OpenForWrite(path);
  WriteQrels(out, qrels);
}

}  // namespace equity::corpus
