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

#include "equity/perturb/io.h"

#include <istream>
#include <ostream>
#include <string>

#include "equity/core/error.h"
#include "equity/core/text.h"

namespace equity::perturb {
namespace {

using ordered_json = nlohmann::ordered_json;

Category CategoryFromJson(const ordered_json& value) {
  if (!value.is_string()) throw ParseError("category must be a string");
  const std::string name = value.get<std::string>();
  const std::optional<Category> category = ParseCategory(name);
  if (!category) throw ParseError("unknown category '" + name + "'");
  return *category;
}

template <typename T, typename Parse>
std::vector<T> ReadLines(std::istream& in, Parse&& parse) {
  std::vector<T> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (TrimAscii(line).empty()) continue;
    try {
      out.push_back(parse(ordered_json::parse(line)));
    } catch (const ordered_json::exception& e) {
      throw ParseError(e.what(), line_number);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_number);
    }
  }
  return out;
}

}  // namespace

ordered_json ToJson(const Variant& variant) {
  ordered_json out;
  out["base_id"] = variant.base_id;
  out["category"] = std::string(CategoryName(variant.category));
  ordered_json factors = ordered_json::array();
  for (Category factor : variant.factors) {
    factors.push_back(std::string(CategoryName(factor)));
  }
  out["factors"] = std::move(factors);
  out["text"] = variant.text;
  ordered_json provenance = ordered_json::array();
  for (const Edit& edit : variant.provenance) {
    provenance.push_back({{"start", edit.start},
                          {"end", edit.end},
                          {"replacement", edit.replacement}});
  }
  out["provenance"] = std::move(provenance);
  return out;
}

ordered_json ToJson(const Triplet& triplet) {
  ordered_json out;
  out["anchor"] = ToJson(triplet.anchor);
  out["positive"] = ToJson(triplet.positive);
  out["negative"] = ToJson(triplet.negative);
  return out;
}

ordered_json ToJson(const SkipRecord& skip) {
  ordered_json out;
  out["base_id"] = skip.base_id;
  out["category"] = std::string(CategoryName(skip.category));
  out["reason"] = skip.reason;
  return out;
}

Variant VariantFromJson(const ordered_json& record) {
  Variant variant;
  variant.base_id = record.at("base_id").get<std::string>();
  variant.category = CategoryFromJson(record.at("category"));
  for (const ordered_json& factor : record.at("factors")) {
    variant.factors.push_back(CategoryFromJson(factor));
  }
  variant.text = record.at("text").get<std::string>();
  for (const ordered_json& edit : record.at("provenance")) {
    variant.provenance.push_back({edit.at("start").get<std::size_t>(),
                                  edit.at("end").get<std::size_t>(),
                                  edit.at("replacement").get<std::string>()});
  }
  return variant;
}

Triplet TripletFromJson(const ordered_json& record) {
  return {VariantFromJson(record.at("anchor")),
          VariantFromJson(record.at("positive")),
          VariantFromJson(record.at("negative"))};
}

void WriteVariants(std::ostream& out, const std::vector<Variant>& variants) {
  for (const Variant& variant : variants) out << ToJson(variant).dump() << '\n';
}

std::vector<Variant> ReadVariants(std::istream& in) {
  return ReadLines<Variant>(in, VariantFromJson);
}

void WriteTriplets(std::ostream& out, const std::vector<Triplet>& triplets) {
  for (const Triplet& triplet : triplets) out << ToJson(triplet).dump() << '\n';
}

std::vector<Triplet> ReadTriplets(std::istream& in) {
  return ReadLines<Triplet>(in, TripletFromJson);
}

}  // namespace equity::perturb
