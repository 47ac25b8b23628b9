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

#include "equity/perturb/detect.h"

#include <algorithm>
#include <cctype>

#include "equity/core/error.h"
#include "equity/core/text.h"

namespace equity::perturb {
namespace {

bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool IsLower(char c) { return c >= 'a' && c <= 'z'; }
bool IsAlpha(char c) { return IsUpper(c) || IsLower(c); }
char ToUpper(char c) { return IsLower(c) ? static_cast<char>(c - 32) : c; }

bool IsSentenceStart(std::string_view text, std::size_t pos) {
  while (pos > 0 && text[pos - 1] == ' ') --pos;
  if (pos == 0) return true;
  const char prev = text[pos - 1];
  return prev == '.' || prev == '!' || prev == '?' || prev == '\n';
}

std::string_view FirstWord(std::string_view text) {
  std::size_t begin = 0;
  while (begin < text.size() && text[begin] == ' ') ++begin;
  std::size_t end = begin;
  while (end < text.size() && text[end] != ' ') ++end;
  return text.substr(begin, end - begin);
}

}  // namespace

std::vector<AttributeSpan> DetectAttributes(std::string_view text,
                                            const Lexicon& lexicon) {
  const std::string lowered = ToLowerAscii(text);
  std::vector<AttributeSpan> candidates;
  for (Category category : NonBaseCategories()) {
    for (const SurfaceForm& form : lexicon.entry(category).surface_forms) {
      for (const auto& [start, end] : FindAll(form.pattern, text, lowered)) {
        candidates.push_back({category, start, end,
                              std::string(text.substr(start, end - start)),
                              form.neutral, form.order});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const AttributeSpan& a, const AttributeSpan& b) {
              const std::size_t la = a.end - a.start;
              const std::size_t lb = b.end - b.start;
              if (la != lb) return la > lb;
              if (a.start != b.start) return a.start < b.start;
              return a.form < b.form;
            });
  std::vector<AttributeSpan> accepted;
  for (AttributeSpan& candidate : candidates) {
    const bool overlaps = std::any_of(
        accepted.begin(), accepted.end(), [&](const AttributeSpan& kept) {
          return candidate.start < kept.end && kept.start < candidate.end;
        });
    if (!overlaps) accepted.push_back(std::move(candidate));
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const AttributeSpan& a, const AttributeSpan& b) {
              return a.start < b.start;
            });
  return accepted;
}

std::set<Category> DetectedCategories(std::string_view text,
                                      const Lexicon& lexicon) {
  std::set<Category> out;
  for (const AttributeSpan& span : DetectAttributes(text, lexicon)) {
    out.insert(span.category);
  }
  return out;
}

bool TakesAn(std::string_view word) {
  if (word.empty()) return false;
  const char first = word[0];
  if (std::isdigit(static_cast<unsigned char>(first))) {
    std::size_t digits = 0;
    while (digits < word.size() &&
           std::isdigit(static_cast<unsigned char>(word[digits]))) {
      ++digits;
    }
    if (first == '8') return true;
    const bool eleven_or_eighteen =
        word.size() >= 2 && word[0] == '1' && (word[1] == '1' || word[1] == '8');
    return eleven_or_eighteen && (digits == 2 || digits == 5);
  }
  if (!IsAlpha(first)) return false;
  std::size_t letters = 0;
  bool all_upper = true;
  while (letters < word.size() && IsAlpha(word[letters])) {
    all_upper = all_upper && IsUpper(word[letters]);
    ++letters;
  }
  if (letters >= 2 && all_upper) {
    return std::string_view("AEFHILMNORSX").find(first) !=
           std::string_view::npos;
  }
  const std::string lower = ToLowerAscii(word);
  for (std::string_view prefix :
       {"uni", "use", "usu", "uro", "ure", "uri", "ute", "uti", "eu", "one",
        "once"}) {
    if (StartsWith(lower, prefix)) return false;
  }
  for (std::string_view prefix : {"hour", "honest", "heir", "honor"}) {
    if (StartsWith(lower, prefix)) return true;
  }
  return std::string_view("aeiou").find(lower[0]) != std::string_view::npos;
}

void AgreeArticle(std::string_view text, Edit& edit, std::size_t floor) {
  std::string tail = edit.replacement;
  tail.append(text.substr(edit.end, 64));
  const std::string_view next = FirstWord(tail);
  if (next.empty() || !std::isalnum(static_cast<unsigned char>(next[0]))) {
    return;
  }
  std::size_t article_end = 0;
  if (edit.start > 0 && text[edit.start - 1] == ' ') {
    article_end = edit.start - 1;
  } else if (edit.start < edit.end && text[edit.start] == ' ') {
    article_end = edit.start;
  } else {
    return;
  }
  std::size_t article_start = article_end;
  while (article_start > 0 && IsAlpha(text[article_start - 1])) {
    --article_start;
  }
  if (article_start < floor || article_start == article_end) return;
  if (article_start > 0 && (IsAsciiWordChar(text[article_start - 1]) ||
                            static_cast<unsigned char>(text[article_start - 1]) >= 0x80)) {
    return;
  }
  const std::string_view article =
      text.substr(article_start, article_end - article_start);
  const std::string lower = ToLowerAscii(article);
  if (lower != "a" && lower != "an") return;
  std::string wanted = TakesAn(next) ? "an" : "a";
  if (lower == wanted) return;
  if (IsUpper(article[0])) wanted[0] = ToUpper(wanted[0]);
  edit.replacement =
      wanted + std::string(text.substr(article_end, edit.start - article_end)) +
      edit.replacement;
  edit.start = article_start;
}

std::vector<Edit> NeutralizationEdits(std::string_view text,
                                      std::vector<AttributeSpan> spans) {
  std::sort(spans.begin(), spans.end(),
            [](const AttributeSpan& a, const AttributeSpan& b) {
              return a.start < b.start;
            });
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const AttributeSpan& span = spans[i];
    if (span.start >= span.end || span.end > text.size()) {
      throw ContractError("span [" + std::to_string(span.start) + ", " +
                          std::to_string(span.end) + ") is out of range");
    }
    if (text.substr(span.start, span.end - span.start) != span.text) {
      throw ContractError("span text '" + span.text +
                          "' does not match the source text");
    }
    if (i > 0 && span.start < spans[i - 1].end) {
      throw ContractError("spans overlap at offset " +
                          std::to_string(span.start));
    }
  }

  std::vector<Edit> edits;
  edits.reserve(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const AttributeSpan& span = spans[i];
    Edit edit{span.start, span.end, span.neutral};
    const std::size_t floor = edits.empty() ? 0 : edits.back().end;
    if (edit.replacement.empty()) {
      if (edit.end < text.size() && text[edit.end] == ' ') {
        ++edit.end;
      } else if (edit.start > floor && text[edit.start - 1] == ' ') {
        --edit.start;
      }
    } else if (IsUpper(span.text[0])) {
      edit.replacement[0] = ToUpper(edit.replacement[0]);
    }
    edits.push_back(std::move(edit));
  }

  // A sentence-initial capitalized mention that is deleted hands its capital
  // letter to whatever follows it.
  for (std::size_t i = 0; i < edits.size(); ++i) {
    Edit& edit = edits[i];
    const AttributeSpan& span = spans[i];
    if (!edit.replacement.empty() || !IsUpper(span.text[0]) ||
        !IsSentenceStart(text, span.start)) {
      continue;
    }
    if (i + 1 < edits.size() && edits[i + 1].start == edit.end) {
      std::string& next = edits[i + 1].replacement;
      if (!next.empty()) next[0] = ToUpper(next[0]);
    } else if (edit.end < text.size() && IsLower(text[edit.end])) {
      edit.replacement.push_back(ToUpper(text[edit.end]));
      ++edit.end;
    }
  }

  for (std::size_t i = 0; i < edits.size(); ++i) {
    const std::size_t floor = i == 0 ? 0 : edits[i - 1].end;
    AgreeArticle(text, edits[i], floor);
  }
  return edits;
}

std::string Neutralize(std::string_view text,
                       const std::vector<AttributeSpan>& spans) {
  if (spans.empty()) return std::string(text);
  return ApplyEdits(text, NeutralizationEdits(text, spans));
}

std::string NeutralizeText(std::string_view text, const Lexicon& lexicon,
                           std::vector<Edit>* edits) {
  std::string current(text);
  for (int pass = 0; pass < 8; ++pass) {
    std::vector<AttributeSpan> spans = DetectAttributes(current, lexicon);
    if (spans.empty()) return current;
    std::vector<Edit> batch = NeutralizationEdits(current, std::move(spans));
    std::string next = ApplyEdits(current, batch);
    if (edits != nullptr) {
      for (Edit& edit : ToSequential(std::move(batch))) {
        edits->push_back(std::move(edit));
      }
    }
    current = std::move(next);
  }
  if (!DetectAttributes(current, lexicon).empty()) {
    throw ContractError("neutralization did not converge for: " + current);
  }
  return current;
}

std::string ApplyEdits(std::string_view text, const std::vector<Edit>& edits) {
  std::string out;
  out.reserve(text.size());
  std::size_t cursor = 0;
  for (const Edit& edit : edits) {
    if (edit.start < cursor || edit.start > edit.end || edit.end > text.size()) {
      throw ContractError("edits are out of order or out of range");
    }
    out.append(text.substr(cursor, edit.start - cursor));
    out.append(edit.replacement);
    cursor = edit.end;
  }
  out.append(text.substr(cursor));
  return out;
}

std::string ReplayEdits(std::string_view text, const std::vector<Edit>& edits) {
  std::string out(text);
  for (const Edit& edit : edits) {
    if (edit.start > edit.end || edit.end > out.size()) {
      throw ContractError("edit [" + std::to_string(edit.start) + ", " +
                          std::to_string(edit.end) + ") is out of range");
    }
    out.replace(edit.start, edit.end - edit.start, edit.replacement);
  }
  return out;
}

std::vector<Edit> ToSequential(std::vector<Edit> edits) {
  std::sort(edits.begin(), edits.end(),
            [](const Edit& a, const Edit& b) { return a.start > b.start; });
  return edits;
}

}  // namespace equity::perturb
