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

#include "equity/gateway/prompt.h"

#include <fstream>
#include <sstream>

#include "equity/core/error.h"
#include "equity/core/text.h"

namespace equity::gateway {

PromptTemplate::PromptTemplate(std::string text) : text_(std::move(text)) {}

PromptTemplate PromptTemplate::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open prompt template " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return PromptTemplate(buffer.str());
}

void PromptTemplate::Require(
    std::initializer_list<std::string_view> required) const {
  for (std::string_view name : required) {
    const std::string placeholder = "{" + std::string(name) + "}";
    if (text_.find(placeholder) == std::string::npos) {
      throw ValidationError("prompt template lacks " + placeholder);
    }
  }
}

std::string PromptTemplate::Render(
    const std::map<std::string, std::string>& values) const {
  std::string out;
  out.reserve(text_.size() + 256);
  std::size_t pos = 0;
  while (pos < text_.size()) {
    const std::size_t open = text_.find('{', pos);
    if (open == std::string::npos) break;
    const std::size_t close = text_.find('}', open);
    if (close == std::string::npos) break;
    out.append(text_, pos, open - pos);
    auto it = values.find(text_.substr(open + 1, close - open - 1));
    if (it == values.end()) {
      out.append(text_, open, close - open + 1);
    } else {
      out.append(it->second);
    }
    pos = close + 1;
  }
  out.append(text_, pos);
  return out;
}

std::string FormatOptions(const std::map<char, std::string>& options) {
  std::string out;
  for (const auto& [label, text] : options) {
    out += std::string(1, label) + ". " + text + "\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

std::string FormatCriteria(const corpus::TrialDoc& trial) {
  std::string out;
  std::size_t index = 0;
  for (const std::string& criterion : trial.inclusion) {
    out += std::to_string(++index) + ". [inclusion] " + criterion + "\n";
  }
  for (const std::string& criterion : trial.exclusion) {
    out += std::to_string(++index) + ". [exclusion] " + criterion + "\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

std::string RenderQaPrompt(const PromptTemplate& prompt,
                           std::string_view question,
                           const std::map<char, std::string>& options) {
  return prompt.Render(
      {{"question", std::string(question)}, {"options", FormatOptions(options)}});
}

std::string RenderCtmPrompt(const PromptTemplate& prompt,
                            std::string_view patient_note,
                            const corpus::TrialDoc& trial) {
  return prompt.Render({{"patient_note", std::string(patient_note)},
                        {"criteria_list", FormatCriteria(trial)},
                        {"trial_title", trial.title},
                        {"trial_summary", trial.summary}});
}

}  // namespace equity::gateway
