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

#include "equity/perturb/variant.h"

#include <algorithm>
#include <optional>

#include "equity/core/error.h"
#include "equity/core/hash.h"
#include "equity/core/text.h"

namespace equity::perturb {
namespace {

struct Subject {
  std::size_t start = 0;
  std::size_t end = 0;
  bool is_noun = false;
};

std::optional<Subject> FindSubject(std::string_view text,
                                   const Lexicon& lexicon) {
  const std::string lowered = ToLowerAscii(text);
  std::optional<Subject> best;
  for (const std::string& noun : lexicon.subject_nouns()) {
    for (std::size_t pos = lowered.find(noun); pos != std::string::npos;
         pos = lowered.find(noun, pos + 1)) {
      if (!IsBoundedMatch(text, pos, pos + noun.size())) continue;
      const bool better =
          !best || pos < best->start ||
          (pos == best->start && pos + noun.size() > best->end);
      if (better) best = Subject{pos, pos + noun.size(), true};
      break;
    }
  }
  if (best) return best;

  std::cmatch match;
  const char* begin = text.data();
  const char* end = begin + text.size();
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto flags = std::regex_constants::match_default;
    if (pos > 0) flags |= std::regex_constants::match_prev_avail;
    if (!std::regex_search(begin + pos, end, match, lexicon.age_phrase(),
                           flags)) {
      break;
    }
    const std::size_t start = pos + static_cast<std::size_t>(match.position(0));
    const std::size_t stop = start + static_cast<std::size_t>(match.length(0));
    if (IsBoundedMatch(text, start, stop)) return Subject{start, stop, false};
    pos = start + 1;
  }
  return std::nullopt;
}

// The " with ..." phrase right after a noun subject, up to the next clause
// boundary; empty when the subject is not followed by " with ".
std::string_view FindClause(std::string_view text, const Subject& subject,
                            const Lexicon& lexicon) {
  constexpr std::string_view kWith = " with ";
  if (!subject.is_noun) return {};
  if (!EqualsIgnoreCase(text.substr(subject.end, kWith.size()), kWith)) {
    return {};
  }
  const std::size_t search_from = subject.end + kWith.size();
  std::cmatch match;
  std::size_t clause_end = text.size();
  if (std::regex_search(text.data() + search_from, text.data() + text.size(),
                        match, lexicon.clause_boundary(),
                        std::regex_constants::match_prev_avail)) {
    clause_end = search_from + static_cast<std::size_t>(match.position(0));
  }
  return text.substr(subject.end, clause_end - subject.end);
}

char UpperAscii(char c) {
  return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 32) : c;
}

bool IsUpperAscii(char c) { return c >= 'A' && c <= 'Z'; }

Edit InjectionEdit(std::string_view text, Category category,
                   const Lexicon& lexicon, std::uint64_t seed) {
  if (category == Category::kBase) {
    throw ContractError("cannot inject the Base category");
  }
  const std::optional<Subject> subject = FindSubject(text, lexicon);
  if (!subject) {
    throw InjectionError("no subject mention to attach " +
                         std::string(CategoryName(category)) + " to in: " +
                         std::string(text));
  }
  const std::string_view clause = FindClause(text, *subject, lexicon);

  std::vector<const std::string*> clause_templates;
  std::vector<const std::string*> plain_templates;
  for (const std::string& t : lexicon.entry(category).templates) {
    (t.find("{clause}") != std::string::npos ? clause_templates
                                             : plain_templates)
        .push_back(&t);
  }
  const std::vector<const std::string*>& pool =
      (!clause.empty() && !clause_templates.empty()) || plain_templates.empty()
          ? clause_templates
          : plain_templates;
  const std::uint64_t pick =
      StableHash(seed, {text, CategoryName(category)}) % pool.size();
  const std::string& chosen = *pool[pick];

  const std::string subject_text(
      text.substr(subject->start, subject->end - subject->start));
  Edit edit;
  if (chosen.find("{subject}") != std::string::npos) {
    const bool move_capital = IsUpperAscii(subject_text[0]) &&
                              !StartsWith(chosen, "{subject}");
    std::string noun = subject_text;
    if (move_capital) noun[0] = ToLowerAscii(noun[0]);
    std::string rendered = ReplaceAll(chosen, "{subject}", noun);
    const bool uses_clause = rendered.find("{clause}") != std::string::npos;
    rendered = ReplaceAll(std::move(rendered), "{clause}", clause);
    if (move_capital) rendered[0] = UpperAscii(rendered[0]);
    edit = {subject->start, subject->end + (uses_clause ? clause.size() : 0),
            std::move(rendered)};
  } else if (subject->is_noun) {
    std::string rendered = chosen;
    if (IsUpperAscii(subject_text[0])) rendered[0] = UpperAscii(rendered[0]);
    edit = {subject->start, subject->end, std::move(rendered)};
  } else {
    edit = {subject->end, subject->end, " " + chosen};
  }
  AgreeArticle(text, edit);
  return edit;
}

}  // namespace

Variant Inject(std::string_view text, Category category,
               const Lexicon& lexicon, std::uint64_t seed,
               std::string_view base_id) {
  if (category == Category::kBase) {
    throw ContractError("cannot inject the Base category");
  }
  if (!DetectAttributes(text, lexicon).empty()) {
    throw ContractError("inject requires neutral text: " + std::string(text));
  }
  Edit edit = InjectionEdit(text, category, lexicon, seed);
  Variant variant;
  variant.base_id = std::string(base_id);
  variant.category = category;
  variant.factors = {category};
  variant.text = ApplyEdits(text, {edit});
  variant.provenance = {std::move(edit)};
  return variant;
}

Variant InjectInto(const Variant& source, Category category,
                   const Lexicon& lexicon, std::uint64_t seed) {
  Edit edit = InjectionEdit(source.text, category, lexicon, seed);
  Variant variant;
  variant.base_id = source.base_id;
  variant.category = category;
  variant.factors = source.factors;
  variant.factors.push_back(category);
  variant.text = ApplyEdits(source.text, {edit});
  if (source.category != Category::kBase) {
    variant.provenance = source.provenance;
  }
  variant.provenance.push_back(std::move(edit));
  return variant;
}

bool GuardAllows(Category category, const corpus::TrialDoc& trial) {
  using corpus::SexRestriction;
  switch (trial.sex_restriction) {
    case SexRestriction::kMale:
      return category != Category::kFemale;
    case SexRestriction::kFemale:
      return category != Category::kMale;
    case SexRestriction::kNone:
      break;
  }
  return true;
}

VariantSet GenerateVariants(std::string_view base_id, std::string_view text,
                            const std::vector<Category>& categories,
                            const Lexicon& lexicon, std::uint64_t seed,
                            const std::vector<const corpus::TrialDoc*>& guard) {
  VariantSet out;
  out.base.base_id = std::string(base_id);
  out.base.category = Category::kBase;
  out.base.text = NeutralizeText(text, lexicon, &out.base.provenance);

  std::vector<Category> seen;
  for (Category category : categories) {
    if (category == Category::kBase ||
        std::find(seen.begin(), seen.end(), category) != seen.end()) {
      continue;
    }
    seen.push_back(category);
    const auto blocker =
        std::find_if(guard.begin(), guard.end(), [&](const corpus::TrialDoc* t) {
          return !GuardAllows(category, *t);
        });
    if (blocker != guard.end()) {
      out.skipped.push_back(
          {std::string(base_id), category,
           "trial " + (*blocker)->id + " is restricted to " +
               corpus::SexRestrictionName((*blocker)->sex_restriction) +
               " participants"});
      continue;
    }
    try {
      out.variants.push_back(InjectInto(out.base, category, lexicon, seed));
    } catch (const InjectionError& e) {
      out.skipped.push_back({std::string(base_id), category, e.what()});
    }
  }
  return out;
}

std::vector<Category> CompoundCandidates(Category category) {
  switch (AxisOf(category)) {
    case Axis::kSex:
    case Axis::kRace:
      return CategoriesOnAxis(Axis::kSdoh);
    case Axis::kSdoh:
      return CategoriesOnAxis(Axis::kRace);
    case Axis::kBase:
      break;
  }
  return {};
}

std::vector<Triplet> BuildTriplets(const Variant& base,
                                   const std::vector<Variant>& variants,
                                   const Lexicon& lexicon, std::uint64_t seed,
                                   bool exhaustive) {
  if (base.category != Category::kBase || !base.factors.empty()) {
    throw ContractError("triplet anchor must be the Base variant");
  }
  std::vector<Triplet> triplets;
  for (const Variant& positive : variants) {
    if (positive.base_id != base.base_id || positive.factors.size() != 1 ||
        positive.category == Category::kBase) {
      continue;
    }
    std::vector<Category> candidates = CompoundCandidates(positive.category);
    if (candidates.empty()) continue;
    if (!exhaustive) {
      const std::uint64_t pick =
          StableHash(seed, {positive.base_id, CategoryName(positive.category)}) %
          candidates.size();
      candidates = {candidates[pick]};
    }
    for (Category second : candidates) {
      triplets.push_back(
          {base, positive, InjectInto(positive, second, lexicon, seed)});
    }
  }
  return triplets;
}

}  // namespace equity::perturb
