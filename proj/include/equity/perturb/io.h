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

#ifndef EQUITY_PERTURB_IO_H_
#define EQUITY_PERTURB_IO_H_

#include <iosfwd>
#include <vector>

#include "equity/perturb/variant.h"
#include "json.hpp"

namespace equity::perturb {

nlohmann::ordered_json ToJson(const Variant& variant);
nlohmann::ordered_json ToJson(const Triplet& triplet);
nlohmann::ordered_json ToJson(const SkipRecord& skip);

Variant VariantFromJson(const nlohmann::ordered_json& record);
Triplet TripletFromJson(const nlohmann::ordered_json& record);

void WriteVariants(std::ostream& out, const std::vector<Variant>& variants);
std::vector<Variant> ReadVariants(std::istream& in);

void WriteTriplets(std::ostream& out, const std::vector<Triplet>& triplets);
std::vector<Triplet> ReadTriplets(std::istream& in);

}  // namespace equity::perturb

#endif  // EQUITY_PERTURB_IO_H_
