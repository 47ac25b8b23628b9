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

#ifndef EQUITY_PERTURB_LEXICON_H_
#define EQUITY_PERTURB_LEXICON_H_

#include <array>
#include <filesystem>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "equity/core/category.h"
#include "json.hpp"

namespace equity::perturb {

// A compiled case-insensitive pattern. `literal` is a lowercase substring
// every match must contain; when non-empty it is checked with a plain
// substring search before the regex runs.
struct Pattern {
  std::string source;
  std::string literal;
  std::regex regex;
};

struct SurfaceForm {
  Pattern pattern;
  std::string neutral;
  std::size_t order = 0;  // position across the whole lexicon
};

struct LexiconEntry {
  std::vector<SurfaceForm> surface_forms;
  std::vector<std::string> templates;
  std::string neutral;
  std::vector<Pattern> essential;
};

// Lexicon file layout:
//
//   {
//     "_version": "2026.1",
//     "_subject": {"nouns": ["patient", ...], "age_phrase": "<regex>",
//                  "clause_boundary": "<regex>"},
//     "Female": {
//       "surface_forms": ["women", {"pattern": "she", "neutral": "the patient"}],
//       "templates": ["woman", "female {subject}"],
//       "neutral": "patient",
//       "essential": ["pregnan\\w*"]
//     },
//     ...
//   }
//
// A plain-string surface form uses the category's `neutral`. Templates may
// contain `{subject}` and `{clause}`; a template without `{subject}` replaces
// a noun subject outright.
class Lexicon {
 public:
  static Lexicon FromJson(const nlohmann::json& doc);
  static Lexicon Load(const std::filesystem::path& path);
  // The lexicon shipped in the data directory.
  static const Lexicon& Default();

  const LexiconEntry& entry(Category category) const {
    return entries_[Index(category)];
  }
  const std::string& version() const { return version_; }
  const std::vector<std::string>& subject_nouns() const { return nouns_; }
  const std::regex& age_phrase() const { return age_phrase_; }
  const std::regex& clause_boundary() const { return clause_boundary_; }

  // True when `text` contains a demographic-essential pattern of any
  // category.
  bool MatchesEssential(std::string_view text) const;

 private:
  std::string version_;
  std::array<LexiconEntry, kCategoryCount> entries_;
  std::vector<std::string> nouns_;
  std::regex age_phrase_;
  std::regex clause_boundary_;
};

Pattern CompilePattern(const std::string& source);

// Longest lowercase literal run every match of `pattern` must contain, or ""
// when none can be derived (top-level alternation, leading groups, ...).
std::string RequiredLiteral(std::string_view pattern);

// Runs `pattern` over `text` and returns every word-bounded match as
// [start, end) byte offsets, including overlapping ones. `lowered` is
// ToLowerAscii(text), passed in so callers can reuse it.
std::vector<std::pair<std::size_t, std::size_t>> FindAll(
    const Pattern& pattern, std::string_view text, std::string_view lowered);

// Word-boundary test applied at the edges of a match whose edge characters
// are word characters. Bytes >= 0x80 count as word characters.
bool IsBoundedMatch(std::string_view text, std::size_t start, std::size_t end);

}  // namespace equity::perturb

#endif  // EQUITY_PERTURB_LEXICON_H_
