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

#include "equity/gateway/parse.h"

#include <algorithm>
#include <fstream>
#include <regex>
#include <unordered_map>

#include "equity/core/data_dir.h"
#include "equity/core/error.h"
#include "equity/core/text.h"
#include "json.hpp"

namespace equity::gateway {
namespace {

const std::regex& AnswerPhrase() {
  static const std::regex re(
      R"([Aa][Nn][Ss][Ww][Ee][Rr]\s*(?:[Ii][Ss]|:)\s*:?\s*\(?([A-Z])(?![A-Za-z]))");
  return re;
}

const std::regex& ParenthesizedLetter() {
  static const std::regex re(R"(\(([A-Z])\))");
  return re;
}

const std::regex& LeadingLetter() {
  static const std::regex re(R"((?:^|\n)[ \t]*([A-Z])(?:[.):]|[ \t]*(?:\n|$)))");
  return re;
}

const std::regex& CriterionLine() {
  static const std::regex re(
      R"(^\s*\**\s*criterion\s*#?\s*(\d+)\s*\**\s*[:.)\-]\s*(.*)$)",
      std::regex::ECMAScript | std::regex::icase);
  return re;
}

std::optional<std::pair<std::size_t, char>> EarliestLetter(
    std::string_view text, const std::regex& re,
    const std::map<char, std::string>& options) {
  std::optional<std::pair<std::size_t, char>> best;
  const std::string owned(text);
  for (auto it = std::sregex_iterator(owned.begin(), owned.end(), re);
       it != std::sregex_iterator(); ++it) {
    const char letter = (*it)[1].str()[0];
    if (!options.contains(letter)) continue;
    const auto pos = static_cast<std::size_t>(it->position(1));
    if (!best || pos < best->first) best = std::make_pair(pos, letter);
  }
  return best;
}

std::string NormalizeAnswerText(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(ToLowerAscii(c));
  }
  while (!out.empty() && (out.back() == '.' || out.back() == '!')) {
    out.pop_back();
  }
  return out;
}

bool ContainsBounded(std::string_view haystack, std::string_view needle) {
  for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + 1)) {
    const bool left = pos == 0 || !IsAsciiWordChar(haystack[pos - 1]);
    const std::size_t end = pos + needle.size();
    const bool right = end == haystack.size() || !IsAsciiWordChar(haystack[end]);
    if (left && right) return true;
  }
  return false;
}

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> lines = SplitChar(text, '\n');
  for (std::string_view& line : lines) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  }
  return lines;
}

}  // namespace

std::optional<char> ParseQaAnswer(std::string_view raw_text,
                                  const std::map<char, std::string>& options) {
  if (options.empty()) throw ContractError("ParseQaAnswer needs options");
  if (auto explicit_answer = EarliestLetter(raw_text, AnswerPhrase(), options)) {
    return explicit_answer->second;
  }
  auto paren = EarliestLetter(raw_text, ParenthesizedLetter(), options);
  auto leading = EarliestLetter(raw_text, LeadingLetter(), options);
  if (paren && (!leading || paren->first <= leading->first)) {
    return paren->second;
  }
  if (leading) return leading->second;

  const std::string reply = NormalizeAnswerText(raw_text);
  if (reply.empty()) return std::nullopt;
  for (const auto& [label, text] : options) {
    if (NormalizeAnswerText(text) == reply) return label;
  }
  std::optional<char> contained;
  for (const auto& [label, text] : options) {
    const std::string option = NormalizeAnswerText(text);
    if (option.empty() || !ContainsBounded(reply, option)) continue;
    if (contained) return std::nullopt;
    contained = label;
  }
  return contained;
}

std::optional<EligibilityLabel> ParseEligibilityLabel(std::string_view text) {
  std::string normalized;
  for (char c : text) {
    char lower = ToLowerAscii(c);
    if (lower == '_' || lower == '-') lower = ' ';
    if (lower >= 'a' && lower <= 'z') {
      normalized.push_back(lower);
    } else if (lower == ' ' && !normalized.empty() &&
               normalized.back() != ' ') {
      normalized.push_back(' ');
    } else if (lower != ' ' && lower != '*' && lower != '"' &&
               lower != '\'' && lower != '`') {
      normalized.push_back('|');
    }
  }
  const std::pair<std::string_view, EligibilityLabel> kLabels[] = {
      {"not included", EligibilityLabel::kNotIncluded},
      {"not excluded", EligibilityLabel::kNotExcluded},
      {"included", EligibilityLabel::kIncluded},
      {"excluded", EligibilityLabel::kExcluded},
  };
  for (const auto& [name, label] : kLabels) {
    if (!StartsWith(normalized, name)) continue;
    if (normalized.size() == name.size()) return label;
    const char next = normalized[name.size()];
    if (next < 'a' || next > 'z') return label;
  }
  return std::nullopt;
}

std::optional<std::vector<EligibilityLabel>> ParseEligibility(
    std::string_view raw_text, std::size_t criteria_count) {
  if (criteria_count == 0) {
    throw ContractError("ParseEligibility needs at least one criterion");
  }
  std::vector<std::optional<EligibilityLabel>> labels(criteria_count);
  std::size_t found = 0;
  for (std::string_view line : Lines(raw_text)) {
    std::cmatch match;
    if (!std::regex_match(line.data(), line.data() + line.size(), match,
                          CriterionLine())) {
      continue;
    }
    const std::string digits = match[1].str();
    if (digits.size() > 6) return std::nullopt;
    const std::size_t index = std::stoul(digits);
    if (index < 1 || index > criteria_count) return std::nullopt;
    if (labels[index - 1]) return std::nullopt;
    const std::optional<EligibilityLabel> label =
        ParseEligibilityLabel(match[2].str());
    if (!label) return std::nullopt;
    labels[index - 1] = label;
    ++found;
  }
  if (found != criteria_count) return std::nullopt;
  std::vector<EligibilityLabel> out;
  out.reserve(criteria_count);
  for (const auto& label : labels) out.push_back(*label);
  return out;
}

RefusalLexicon::RefusalLexicon(std::string version,
                               std::vector<std::string> phrases)
    : version_(std::move(version)) {
  for (std::string& phrase : phrases) {
    std::string lowered = ToLowerAscii(ReplaceAll(phrase, "’", "'"));
    if (!TrimAscii(lowered).empty()) phrases_.push_back(std::move(lowered));
  }
  if (phrases_.empty()) {
    throw ValidationError("refusal lexicon has no phrases");
  }
}

RefusalLexicon RefusalLexicon::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open refusal lexicon " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("refusal lexicon " + path.string() + ": " + e.what());
  }
  return RefusalLexicon(doc.value("version", std::string("unversioned")),
                        doc.value("phrases", std::vector<std::string>{}));
}

const RefusalLexicon& RefusalLexicon::Default() {
  static const RefusalLexicon lexicon =
      Load(DataDir() / "refusal_lexicon.json");
  return lexicon;
}

bool RefusalLexicon::Matches(std::string_view text) const {
  const std::string lowered =
      ToLowerAscii(ReplaceAll(std::string(text), "’", "'"));
  return std::any_of(phrases_.begin(), phrases_.end(),
                     [&](const std::string& phrase) {
                       return lowered.find(phrase) != std::string::npos;
                     });
}

std::string NormalizeForRepetition(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
        c == '\v') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(ToLowerAscii(c));
  }
  return out;
}

bool HasRepetition(std::string_view text, const RepetitionRule& rule) {
  if (rule.min_length == 0 || rule.min_count <= 1) {
    return !text.empty();
  }
  const std::string normalized = NormalizeForRepetition(text);
  if (normalized.size() < rule.min_length) return false;
  std::unordered_map<std::string_view, std::size_t> counts;
  const std::string_view view(normalized);
  for (std::size_t i = 0; i + rule.min_length <= view.size(); ++i) {
    if (++counts[view.substr(i, rule.min_length)] >= rule.min_count) {
      return true;
    }
  }
  return false;
}

std::string StripCriterionLines(std::string_view text) {
  std::string out;
  for (std::string_view line : Lines(text)) {
    if (std::regex_match(line.begin(), line.end(), CriterionLine())) continue;
    out.append(line);
    out.push_back('\n');
  }
  return out;
}

std::optional<FailureKind> ClassifyFailure(std::string_view raw_text,
                                           bool parsed_ok, Task task,
                                           const RefusalLexicon& refusals,
                                           const RepetitionRule& rule) {
  if (refusals.Matches(raw_text)) return FailureKind::kRejection;
  if (TrimAscii(raw_text).empty() || !parsed_ok) {
    return FailureKind::kMissingDocument;
  }
  const bool repeats = task == Task::kCtm
                           ? HasRepetition(StripCriterionLines(raw_text), rule)
                           : HasRepetition(raw_text, rule);
  if (repeats) return FailureKind::kRepetition;
  return std::nullopt;
}

void ParseAndClassify(const RequestContext& context, ModelResponse& response,
                      const RefusalLexicon& refusals,
                      const RepetitionRule& rule) {
  response.parsed = Unparseable{};
  if (response.transport_error) {
    response.failure = FailureKind::kMissingDocument;
    return;
  }
  if (context.task == Task::kQa) {
    if (auto answer = ParseQaAnswer(response.raw_text, context.options)) {
      response.parsed = *answer;
    }
  } else {
    if (auto labels =
            ParseEligibility(response.raw_text, context.criteria_count)) {
      response.parsed = std::move(*labels);
    }
  }
  response.failure = ClassifyFailure(response.raw_text, response.parsed_ok(),
                                     context.task, refusals, rule);
}

}  // namespace equity::gateway
