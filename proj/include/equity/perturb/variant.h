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

#ifndef EQUITY_PERTURB_VARIANT_H_
#define EQUITY_PERTURB_VARIANT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "equity/core/category.h"
#include "equity/corpus/types.h"
#include "equity/perturb/detect.h"
#include "equity/perturb/lexicon.h"

namespace equity::perturb {

// A counterfactual rendering of one source item.
//
// `provenance` is a sequential edit list. For the Base variant it rewrites
// the original item text into `text`; for every other variant it rewrites
// the Base variant's text into `text`.
struct Variant {
  std::string base_id;
  Category category = Category::kBase;
  std::vector<Category> factors;  // injected categories, in injection order
  std::string text;
  std::vector<Edit> provenance;

  bool operator==(const Variant&) const = default;
};

struct Triplet {
  Variant anchor;
  Variant positive;
  Variant negative;
};

struct SkipRecord {
  std::string base_id;
  Category category = Category::kBase;
  std::string reason;

  bool operator==(const SkipRecord&) const = default;
};

struct VariantSet {
  Variant base;
  std::vector<Variant> variants;  // requested categories, in request order
  std::vector<SkipRecord> skipped;
};

// Injects `category` into neutral `text` at its first subject mention.
// Throws ContractError when `category` is Base or `text` has detected
// attributes, InjectionError when no subject mention exists.
Variant Inject(std::string_view text, Category category,
               const Lexicon& lexicon, std::uint64_t seed,
               std::string_view base_id = {});

// Inject without the neutrality precondition; used to compound a factor onto
// an existing single-factor variant. The result's factors are
// `source.factors` plus `category` and its provenance extends
// `source.provenance`.
Variant InjectInto(const Variant& source, Category category,
                   const Lexicon& lexicon, std::uint64_t seed);

// False iff `category` is on the sex axis and `trial` admits only the other
// sex.
bool GuardAllows(Category category, const corpus::TrialDoc& trial);

// The Base variant plus one variant per requested category. Categories
// rejected by any trial in `guard`, or with no subject to attach to, are
// reported in `skipped` instead.
VariantSet GenerateVariants(std::string_view base_id, std::string_view text,
                            const std::vector<Category>& categories,
                            const Lexicon& lexicon, std::uint64_t seed,
                            const std::vector<const corpus::TrialDoc*>& guard =
                                {});

// One triplet per single-factor variant: anchor = `base`, positive = the
// variant, negative = the variant with a second factor compounded on. Race
// and sex positives take an sdoh second factor; sdoh positives take a race
// one. `exhaustive` emits every compatible second factor instead of one
// seeded choice.
std::vector<Triplet> BuildTriplets(const Variant& base,
                                   const std::vector<Variant>& variants,
                                   const Lexicon& lexicon, std::uint64_t seed,
                                   bool exhaustive = false);

// Categories BuildTriplets may compound onto a positive of `category`.
std::vector<Category> CompoundCandidates(Category category);

}  // namespace equity::perturb

#endif  // EQUITY_PERTURB_VARIANT_H_
