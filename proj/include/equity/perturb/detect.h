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

#ifndef EQUITY_PERTURB_DETECT_H_
#define EQUITY_PERTURB_DETECT_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "equity/core/category.h"
#include "equity/perturb/lexicon.h"

namespace equity::perturb {

// A detected attribute mention. Offsets are UTF-8 byte offsets.
struct AttributeSpan {
  Category category = Category::kBase;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;
  std::string neutral;     // replacement used by Neutralize
  std::size_t form = 0;    // SurfaceForm::order of the matching form

  bool operator==(const AttributeSpan&) const = default;
};

// A replacement of text[start, end). A list of edits is either
// "simultaneous" (all offsets refer to the same source text, sorted by start,
// non-overlapping) or "sequential" (each edit's offsets refer to the text
// produced by the edits before it).
struct Edit {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string replacement;

  bool operator==(const Edit&) const = default;
};

// Every non-overlapping word-bounded surface-form match, sorted by start.
// Overlaps go to the longest candidate, then the earliest, then the form
// listed first in the lexicon.
std::vector<AttributeSpan> DetectAttributes(std::string_view text,
                                            const Lexicon& lexicon);

// The distinct categories among DetectAttributes(text).
std::set<Category> DetectedCategories(std::string_view text,
                                      const Lexicon& lexicon);

// Simultaneous edits that replace each span by its neutral form. Removing a
// span also removes one adjacent space, a sentence-initial removal
// capitalizes what follows, and a preceding "a"/"an" is made to agree with
// the new following word. Throws ContractError on spans that overlap, fall
// outside `text`, or do not match `text`.
std::vector<Edit> NeutralizationEdits(std::string_view text,
                                      std::vector<AttributeSpan> spans);

std::string Neutralize(std::string_view text,
                       const std::vector<AttributeSpan>& spans);

// Detect + neutralize until nothing is detected. Returns the sequential
// edit list that was applied through `edits` when non-null.
std::string NeutralizeText(std::string_view text, const Lexicon& lexicon,
                           std::vector<Edit>* edits = nullptr);

// Applies simultaneous edits.
std::string ApplyEdits(std::string_view text, const std::vector<Edit>& edits);

// Applies sequential edits in order.
std::string ReplayEdits(std::string_view text, const std::vector<Edit>& edits);

// Converts simultaneous edits into the equivalent sequential list (applied
// right to left, so earlier offsets stay valid).
std::vector<Edit> ToSequential(std::vector<Edit> edits);

// Extends `edit` so that an "a"/"an" directly before it agrees with the
// first word following the edit. `text` is the text the edit applies to and
// `floor` is the lowest offset the edit may be extended to.
void AgreeArticle(std::string_view text, Edit& edit, std::size_t floor = 0);

// Whether `word` takes "an" rather than "a".
bool TakesAn(std::string_view word);

}  // namespace equity::perturb

#endif  // EQUITY_PERTURB_DETECT_H_
