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

#include "equity/core/category.h"

#include <algorithm>

#include "equity/core/error.h"
#include "equity/core/text.h"

namespace equity {
namespace {

struct CategoryInfo {
  Category category;
  Axis axis;
  std::string_view name;
  std::string_view label;
};

constexpr std::array<CategoryInfo, kCategoryCount> kInfo = {{
    {Category::kBase, Axis::kBase, "Base", "Base"},
    {Category::kMale, Axis::kSex, "Male", "Male"},
    {Category::kFemale, Axis::kSex, "Female", "Female"},
    {Category::kWhite, Axis::kRace, "White", "White"},
    {Category::kBlack, Axis::kRace, "Black", "Black"},
    {Category::kHispanic, Axis::kRace, "Hispanic", "Hispanic"},
    {Category::kAsian, Axis::kRace, "Asian", "Asian"},
    {Category::kNativeAmerican, Axis::kRace, "NativeAmerican",
     "Native American"},
    {Category::kPacificIslander, Axis::kRace, "PacificIslander",
     "Pacific Islander"},
    {Category::kMixedRace, Axis::kRace, "MixedRace", "Mixed Race"},
    {Category::kMiddleEastern, Axis::kRace, "MiddleEastern", "Middle Eastern"},
    {Category::kIndigenous, Axis::kRace, "Indigenous", "Indigenous"},
    {Category::kAfricanAmerican, Axis::kRace, "AfricanAmerican",
     "African American"},
    {Category::kSouthAsian, Axis::kRace, "SouthAsian", "South Asian"},
    {Category::kEastAsian, Axis::kRace, "EastAsian", "East Asian"},
    {Category::kLgbt, Axis::kSdoh, "LGBT+", "LGBT+"},
    {Category::kLowIncome, Axis::kSdoh, "LowIncome", "Low Income"},
    {Category::kUnemployed, Axis::kSdoh, "Unemployed", "Unemployed"},
    {Category::kDisabled, Axis::kSdoh, "Disabled", "Disabled"},
    {Category::kIlliterate, Axis::kSdoh, "Illiterate", "Illiterate"},
    {Category::kHomeless, Axis::kSdoh, "Homeless", "Homeless"},
}};

std::string Squash(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == ' ' || c == '-' || c == '_') continue;
    out.push_back(ToLowerAscii(c));
  }
  return out;
}

}  // namespace

Axis AxisOf(Category category) { return kInfo[Index(category)].axis; }

std::string_view CategoryName(Category category) {
  return kInfo[Index(category)].name;
}

std::string_view CategoryLabel(Category category) {
  return kInfo[Index(category)].label;
}

std::string_view AxisName(Axis axis) {
  switch (axis) {
    case Axis::kBase:
      return "base";
    case Axis::kSex:
      return "sex";
    case Axis::kRace:
      return "race";
    case Axis::kSdoh:
      return "sdoh";
  }
  return "unknown";
}

std::optional<Category> ParseCategory(std::string_view text) {
  const std::string key = Squash(TrimAscii(text));
  if (key.empty()) return std::nullopt;
  for (const CategoryInfo& info : kInfo) {
    if (key == Squash(info.name) || key == Squash(info.label)) {
      return info.category;
    }
  }
  if (key == "lgbt" || key == "lgbtq" || key == "lgbtq+") {
    return Category::kLgbt;
  }
  return std::nullopt;
}

std::vector<Category> ParseCategoryList(std::string_view text) {
  std::vector<bool> seen(kCategoryCount, false);
  for (std::string_view part : SplitChar(text, ',')) {
    part = TrimAscii(part);
    if (part.empty()) continue;
    const std::string lowered = ToLowerAscii(part);
    if (lowered == "all") {
      std::fill(seen.begin(), seen.end(), true);
      continue;
    }
    if (lowered == "nonbase") {
      std::fill(seen.begin() + 1, seen.end(), true);
      continue;
    }
    std::optional<Category> category = ParseCategory(part);
    if (!category) {
      throw UsageError("unknown category '" + std::string(part) + "'");
    }
    seen[Index(*category)] = true;
  }
  std::vector<Category> out;
  for (Category c : kAllCategories) {
    if (seen[Index(c)]) out.push_back(c);
  }
  return out;
}

std::vector<Category> NonBaseCategories() {
  return std::vector<Category>(kAllCategories.begin() + 1,
                               kAllCategories.end());
}

std::vector<Category> CategoriesOnAxis(Axis axis) {
  std::vector<Category> out;
  for (Category c : kAllCategories) {
    if (AxisOf(c) == axis) out.push_back(c);
  }
  return out;
}

}  // namespace equity
