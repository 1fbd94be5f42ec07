// Copyright 2026 The mcner Authors.
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

#ifndef MCNER_UTF8_H_
#define MCNER_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace mcner::utf8 {

// Decodes UTF-8 into code points. Invalid bytes decode as U+FFFD.
std::vector<char32_t> decode(std::string_view text);
std::string encode(const std::vector<char32_t>& code_points);

// Simple case mapping for Latin (ASCII and Latin-1) and Cyrillic, including
// the Kazakh letters of the Cyrillic Supplement range.
char32_t to_lower(char32_t c);
char32_t to_upper(char32_t c);

bool is_alpha(char32_t c);
bool is_upper(char32_t c);
inline bool is_ascii_latin(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
}

std::string lowercase(std::string_view text);
// Uppercases the first code point only.
std::string capitalize(std::string_view text);

}  // namespace mcner::utf8

#endif  // MCNER_UTF8_H_
