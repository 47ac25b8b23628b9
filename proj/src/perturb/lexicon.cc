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

#include "equity/perturb/lexicon.h"

#include <fstream>

#include "equity/core/data_dir.h"
#include "equity/core/error.h"
#include "equity/core/text.h"

namespace equity::perturb {
namespace {

using nlohmann::json;

constexpr auto kRegexFlags = std::regex::ECMAScript | std::regex::icase |
                             std::regex::optimize;

const char* const kDefaultNouns[] = {
    "patient", "person", "individual", "adult",  "child",    "infant",
    "adolescent", "woman", "man",     "boy",    "girl",     "lady",
    "gentleman",
};

constexpr const char* kDefaultAgePhrase =
    R"(\d+[- ]?(?:year|month|week|day)s?[- ]old)";

constexpr const char* kDefaultClauseBoundary =
    R"(\s+(?:is|are|was|were|has|had|have|presents|presented|complains|)"
    R"(complained|reports|reported|comes|came|who|and|experiencing|develops|)"
    R"(developed|arrives|arrived|describes|notes|undergoes|underwent|)"
    R"(visits|seeks|requires|receives|received|being|currently)\b|[,.;:?!])";

bool IsWordByte(char c) {
  return static_cast<unsigned char>(c) >= 0x80 || IsAsciiWordChar(c);
}

std::regex CompileRegex(const std::string& source) {
  try {
    return std::regex(source, kRegexFlags);
  } catch (const std::regex_error& e) {
    throw ValidationError("invalid pattern '" + source + "': " + e.what());
  }
}

std::string RequireString(const json& value, const std::string& where) {
  if (!value.is_string()) {
    throw ValidationError(where + " must be a string");
  }
  return value.get<std::string>();
}

LexiconEntry ParseEntry(const json& node, std::string_view name,
                        std::size_t& order) {
  const std::string where(name);
  if (!node.is_object()) throw ValidationError(where + " must be an object");
  LexiconEntry entry;
  if (auto it = node.find("neutral"); it != node.end()) {
    entry.neutral = RequireString(*it, where + ".neutral");
  }
  auto forms = node.find("surface_forms");
  if (forms == node.end() || !forms->is_array() || forms->empty()) {
    throw ValidationError(where + " needs at least one surface form");
  }
  for (const json& form : *forms) {
    SurfaceForm parsed;
    if (form.is_string()) {
      parsed.pattern = CompilePattern(form.get<std::string>());
      parsed.neutral = entry.neutral;
    } else if (form.is_object() && form.contains("pattern")) {
      parsed.pattern = CompilePattern(
          RequireString(form["pattern"], where + ".surface_forms.pattern"));
      parsed.neutral = form.contains("neutral")
                           ? RequireString(form["neutral"],
                                           where + ".surface_forms.neutral")
                           : entry.neutral;
    } else {
      throw ValidationError(where +
                            ".surface_forms entries must be strings or "
                            "{pattern, neutral} objects");
    }
    parsed.order = order++;
    entry.surface_forms.push_back(std::move(parsed));
  }
  auto templates = node.find("templates");
  if (templates == node.end() || !templates->is_array() ||
      templates->empty()) {
    throw ValidationError(where + " needs at least one template");
  }
  for (const json& t : *templates) {
    entry.templates.push_back(RequireString(t, where + ".templates"));
  }
  if (auto essential = node.find("essential"); essential != node.end()) {
    if (!essential->is_array()) {
      throw ValidationError(where + ".essential must be an array");
    }
    for (const json& p : *essential) {
      entry.essential.push_back(
          CompilePattern(RequireString(p, where + ".essential")));
    }
  }
  return entry;
}

}  // namespace

Pattern CompilePattern(const std::string& source) {
  if (source.empty()) throw ValidationError("empty pattern");
  Pattern pattern;
  pattern.source = source;
  pattern.literal = RequiredLiteral(source);
  pattern.regex = CompileRegex(source);
  return pattern;
}

std::string RequiredLiteral(std::string_view pattern) {
  std::string best;
  std::string run;
  auto flush = [&] {
    if (run.size() > best.size()) best = run;
    run.clear();
  };
  int depth = 0;
  bool in_class = false;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const char c = pattern[i];
    if (in_class) {
      if (c == '\\') {
        ++i;
      } else if (c == ']') {
        in_class = false;
      }
      continue;
    }
    if (c == '[') {
      flush();
      in_class = true;
      continue;
    }
    if (c == '(') {
      flush();
      ++depth;
      continue;
    }
    if (c == ')') {
      --depth;
      continue;
    }
    if (depth > 0) {
      if (c == '\\') ++i;
      continue;
    }
    if (c == '|') return "";
    if (c == '?' || c == '*' || c == '+') continue;
    if (c == '{') {
      while (i < pattern.size() && pattern[i] != '}') ++i;
      continue;
    }
    if (c == '.' || c == '^' || c == '$') {
      flush();
      continue;
    }
    char literal = c;
    if (c == '\\') {
      if (i + 1 >= pattern.size()) break;
      const char escaped = pattern[++i];
      if (IsAsciiWordChar(escaped)) {
        flush();
        continue;
      }
      literal = escaped;
    }
    const char next = i + 1 < pattern.size() ? pattern[i + 1] : '\0';
    if (next == '?' || next == '*' || next == '{') {
      flush();
      continue;
    }
    run.push_back(ToLowerAscii(literal));
    if (next == '+') flush();
  }
  flush();
  return best;
}

bool IsBoundedMatch(std::string_view text, std::size_t start,
                    std::size_t end) {
  if (start >= end || end > text.size()) return false;
  if (IsWordByte(text[start]) && start > 0 && IsWordByte(text[start - 1])) {
    return false;
  }
  if (IsWordByte(text[end - 1]) && end < text.size() &&
      IsWordByte(text[end])) {
    return false;
  }
  return true;
}

std::vector<std::pair<std::size_t, std::size_t>> FindAll(
    const Pattern& pattern, std::string_view text, std::string_view lowered) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (!pattern.literal.empty() &&
      lowered.find(pattern.literal) == std::string_view::npos) {
    return out;
  }
  const char* begin = text.data();
  const char* end = begin + text.size();
  std::cmatch match;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto flags = std::regex_constants::match_default;
    if (pos > 0) flags |= std::regex_constants::match_prev_avail;
    if (!std::regex_search(begin + pos, end, match, pattern.regex, flags)) {
      break;
    }
    const std::size_t start = pos + static_cast<std::size_t>(match.position(0));
    const std::size_t stop = start + static_cast<std::size_t>(match.length(0));
    if (stop > start && IsBoundedMatch(text, start, stop)) {
      out.emplace_back(start, stop);
    }
    pos = start + 1;
  }
  return out;
}

Lexicon Lexicon::FromJson(const json& doc) {
  if (!doc.is_object()) throw ValidationError("lexicon must be an object");
  Lexicon lexicon;
  lexicon.version_ = doc.value("_version", std::string("unversioned"));

  for (const auto& [key, value] : doc.items()) {
    if (!key.empty() && key[0] == '_') continue;
    const std::optional<Category> category = ParseCategory(key);
    if (!category || *category == Category::kBase) {
      throw ValidationError("lexicon names unknown category '" + key + "'");
    }
  }

  std::size_t order = 0;
  for (Category category : NonBaseCategories()) {
    const std::string name(CategoryName(category));
    auto it = doc.find(name);
    if (it == doc.end()) {
      throw ValidationError("lexicon has no entry for " + name);
    }
    lexicon.entries_[Index(category)] = ParseEntry(*it, name, order);
  }

  const json subject = doc.value("_subject", json::object());
  if (auto nouns = subject.find("nouns"); nouns != subject.end()) {
    for (const json& noun : *nouns) {
      lexicon.nouns_.push_back(
          ToLowerAscii(RequireString(noun, "_subject.nouns")));
    }
  } else {
    lexicon.nouns_.assign(std::begin(kDefaultNouns), std::end(kDefaultNouns));
  }
  if (lexicon.nouns_.empty()) {
    throw ValidationError("_subject.nouns must not be empty");
  }
  lexicon.age_phrase_ = CompileRegex(
      subject.value("age_phrase", std::string(kDefaultAgePhrase)));
  lexicon.clause_boundary_ = CompileRegex(
      subject.value("clause_boundary", std::string(kDefaultClauseBoundary)));
  return lexicon;
}

Lexicon Lexicon::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open lexicon " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("lexicon " + path.string() + ": " + e.what());
  }
  return FromJson(doc);
}

const Lexicon& Lexicon::Default() {
  static const Lexicon lexicon = Load(DataDir() / "lexicon.json");
  return lexicon;
}

bool Lexicon::MatchesEssential(std::string_view text) const {
  const std::string lowered = ToLowerAscii(text);
  for (const LexiconEntry& entry : entries_) {
    for (const Pattern& pattern : entry.essential) {
      if (!FindAll(pattern, text, lowered).empty()) return true;
    }
  }
  return false;
}

}  // namespace equity::perturb
