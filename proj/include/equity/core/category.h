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

#ifndef EQUITY_CORE_CATEGORY_H_
#define EQUITY_CORE_CATEGORY_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace equity {

// Perturbation categories. The enumeration order is the fixed column order
// used by every table and chart: Base, sex, race, then SDOH.
enum class Category : std::uint8_t {
  kBase,
  kMale,
  kFemale,
  kWhite,
  kBlack,
  kHispanic,
  kAsian,
  kNativeAmerican,
  kPacificIslander,
  kMixedRace,
  kMiddleEastern,
  kIndigenous,
  kAfricanAmerican,
  kSouthAsian,
  kEastAsian,
  kLgbt,
  kLowIncome,
  kUnemployed,
  kDisabled,
  kIlliterate,
  kHomeless,
};

enum class Axis : std::uint8_t { kBase, kSex, kRace, kSdoh };

inline constexpr std::size_t kCategoryCount = 21;

inline constexpr std::array<Category, kCategoryCount> kAllCategories = {
    Category::kBase,          Category::kMale,
    Category::kFemale,        Category::kWhite,
    Category::kBlack,         Category::kHispanic,
    Category::kAsian,         Category::kNativeAmerican,
    Category::kPacificIslander, Category::kMixedRace,
    Category::kMiddleEastern, Category::kIndigenous,
    Category::kAfricanAmerican, Category::kSouthAsian,
    Category::kEastAsian,     Category::kLgbt,
    Category::kLowIncome,     Category::kUnemployed,
    Category::kDisabled,      Category::kIlliterate,
    Category::kHomeless,
};

Axis AxisOf(Category category);

// Stable identifier, e.g. "AfricanAmerican", "LGBT+". Used in files.
std::string_view CategoryName(Category category);

// Human-readable label, e.g. "African American". Used in charts.
std::string_view CategoryLabel(Category category);

std::string_view AxisName(Axis axis);

// Accepts the identifier or label, case-insensitively, ignoring spaces,
// hyphens and underscores ("low_income", "Low Income", "LowIncome").
std::optional<Category> ParseCategory(std::string_view text);

// Comma-separated list; "all" expands to every category, "nonbase" to every
// category except Base. Throws UsageError on unknown names. The result is
// deduplicated and sorted into enumeration order.
std::vector<Category> ParseCategoryList(std::string_view text);

// All non-Base categories in enumeration order.
std::vector<Category> NonBaseCategories();

std::vector<Category> CategoriesOnAxis(Axis axis);

constexpr std::size_t Index(Category category) {
  return static_cast<std::size_t>(category);
}

}  // namespace equity

#endif  // EQUITY_CORE_CATEGORY_H_
