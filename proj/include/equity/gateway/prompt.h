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

#ifndef EQUITY_GATEWAY_PROMPT_H_
#define EQUITY_GATEWAY_PROMPT_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "equity/corpus/types.h"

namespace equity::gateway {

// A prompt template with `{name}` placeholders. QA templates use
// {question} and {options}; CTM templates use {patient_note} and
// {criteria_list} (and optionally {trial_title}, {trial_summary}).
class PromptTemplate {
 public:
  explicit PromptTemplate(std::string text);
  static PromptTemplate Load(const std::filesystem::path& path);

  // Throws ValidationError when a placeholder in `required` is absent.
  void Require(std::initializer_list<std::string_view> required) const;

  std::string Render(const std::map<std::string, std::string>& values) const;
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

// "A. text" per line in label order.
std::string FormatOptions(const std::map<char, std::string>& options);

// Inclusion criteria then exclusion criteria, numbered from 1:
// "1. [inclusion] text".
std::string FormatCriteria(const corpus::TrialDoc& trial);

std::string RenderQaPrompt(const PromptTemplate& prompt,
                           std::string_view question,
                           const std::map<char, std::string>& options);

std::string RenderCtmPrompt(const PromptTemplate& prompt,
                            std::string_view patient_note,
                            const corpus::TrialDoc& trial);

}  // namespace equity::gateway

#endif  // EQUITY_GATEWAY_PROMPT_H_
