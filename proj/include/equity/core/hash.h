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

#ifndef EQUITY_CORE_HASH_H_
#define EQUITY_CORE_HASH_H_

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace equity {

// 64-bit FNV-1a. Stable across platforms and runs; never use std::hash for
// anything that is persisted or drives a seeded decision.
std::uint64_t Fnv1a64(std::string_view data);

std::uint64_t SplitMix64(std::uint64_t x);

// Order-sensitive combination of a seed and string parts. Parts are length
// prefixed so ("ab","c") and ("a","bc") hash differently.
std::uint64_t StableHash(std::uint64_t seed,
                         std::initializer_list<std::string_view> parts);

// StableHash mapped to [0, 1) with 53 bits of resolution.
double StableUnit(std::uint64_t seed,
                  std::initializer_list<std::string_view> parts);

inline double UnitFromHash(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Lowercase hex SHA-256 digest.
std::string Sha256Hex(std::string_view data);

}  // namespace equity

#endif  // EQUITY_CORE_HASH_H_
