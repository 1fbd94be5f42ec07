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

#include "mcner/features.h"

#include <string>

#include "mcner/common.h"
#include "mcner/utf8.h"

namespace mcner {

FeatureVector extract_features(const Sentence& sentence, std::size_t position) {
  if (position >= sentence.size()) {
    throw Error("feature position " + std::to_string(position) + " outside sentence of length " +
                std::to_string(sentence.size()));
  }
  const Token& token = sentence.tokens[position];
  FeatureVector bits{};
  for (std::size_t i = 0; i < kMorphBits; ++i) bits[i] = token.morph[i];

  const auto cps = utf8::decode(token.surface);
  bool any_alpha = false;
  bool all_latin = true;
  bool all_upper = true;
  for (char32_t c : cps) {
    if (!utf8::is_alpha(c)) continue;
    any_alpha = true;
    all_latin = all_latin && utf8::is_ascii_latin(c);
    all_upper = all_upper && utf8::is_upper(c);
  }
  bits[kFeatCase] = !cps.empty() && utf8::is_upper(cps.front());
  bits[kFeatSentStart] = position == 0;
  bits[kFeatLatin] = any_alpha && all_latin;
  bits[kFeatAcronym] = cps.size() >= 2 && any_alpha && all_upper;
  return bits;
}

}  // namespace mcner
