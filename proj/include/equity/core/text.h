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

#ifndef EQUITY_CORE_TEXT_H_
#define EQUITY_CORE_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace equity {

inline bool IsAsciiWordChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

inline char ToLowerAscii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string ToLowerAscii(std::string_view text);

std::string_view TrimAscii(std::string_view text);

// Splits on Unicode whitespace (ASCII whitespace, NBSP, U+1680, U+2000-200A,
// U+2028, U+2029, U+202F, U+205F, U+3000). Input is UTF-8; invalid bytes are
// treated as non-space.
std::vector<std::string_view> SplitUnicodeWhitespace(std::string_view text);

// Lowercased runs of ASCII letters and digits. Non-ASCII bytes are kept
// inside tokens so accented words stay whole.
std::vector<std::string> WordTokens(std::string_view text);

std::vector<std::string_view> SplitChar(std::string_view text, char sep);

bool EqualsIgnoreCase(std::string_view a, std::string_view b);

bool StartsWith(std::string_view text, std::string_view prefix);

std::string ReplaceAll(std::string text, std::string_view from,
                       std::string_view to);

}  // namespace equity

#endif  // EQUITY_CORE_TEXT_H_
