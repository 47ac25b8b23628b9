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

#ifndef EQUITY_CORPUS_IO_H_
#define EQUITY_CORPUS_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "equity/core/diagnostics.h"
#include "equity/corpus/types.h"

// Canonical JSON-lines / qrels readers and writers. Readers throw ParseError
// (with the 1-based line number) for malformed records and ValidationError
// for records that parse but break an invariant. Writers emit the canonical
// form, so Write(Read(canonical)) reproduces the input byte for byte.

namespace equity::corpus {

// Both formats share one schema. MedMCQA records must carry exactly the
// options A-D; MedQA records may carry 2 to 26 options.
enum class QaFormat { kMedQa, kMedMcQa };

QaFormat ParseQaFormat(std::string_view name);
const char* QaFormatName(QaFormat format);

std::vector<QAItem> ReadQa(std::istream& in, QaFormat format);
std::vector<QAItem> LoadQa(const std::filesystem::path& path,
                           QaFormat format);
void WriteQa(std::ostream& out, const std::vector<QAItem>& items);
void SaveQa(const std::filesystem::path& path,
            const std::vector<QAItem>& items);

std::vector<PatientTopic> ReadTopics(std::istream& in);
std::vector<PatientTopic> LoadTopics(const std::filesystem::path& path);
void WriteTopics(std::ostream& out, const std::vector<PatientTopic>& topics);
void SaveTopics(const std::filesystem::path& path,
                const std::vector<PatientTopic>& topics);

std::vector<TrialDoc> ReadTrials(std::istream& in);
std::vector<TrialDoc> LoadTrials(const std::filesystem::path& path);
void WriteTrials(std::ostream& out, const std::vector<TrialDoc>& trials);
void SaveTrials(const std::filesystem::path& path,
                const std::vector<TrialDoc>& trials);

// "topic-id 0 trial-id grade" per line. A repeated (topic, trial) pair
// overrides the earlier grade and records a warning in `diagnostics`.
Qrels ReadQrels(std::istream& in, Diagnostics* diagnostics = nullptr);
Qrels LoadQrels(const std::filesystem::path& path,
                Diagnostics* diagnostics = nullptr);
// Sorted by (topic, trial).
void WriteQrels(std::ostream& out, const Qrels& qrels);
void SaveQrels(const std::filesystem::path& path, const Qrels& qrels);

}  // namespace equity::corpus

#endif  // EQUITY_CORPUS_IO_H_
