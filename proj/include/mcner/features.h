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

#ifndef MCNER_FEATURES_H_
#define MCNER_FEATURES_H_

#include <array>
#include <cstddef>
#include <cstdint>

#include "mcner/corpus.h"

namespace mcner {

inline constexpr std::size_t kFeatureCount = 10;

// Binary entity features, in order:
//   0 Root, 1 POS, 2 InflSuffix, 3 DerivSuffix, 4 ProperNoun, 5 KazNameSuffix
//   (copied from the morph column), then the word-type features
//   6 Case, 7 SentStart, 8 Latin, 9 Acronym.
using FeatureVector = std::array<std::uint8_t, kFeatureCount>;

enum FeatureIndex : std::size_t {
  kFeatRoot = 0,
  kFeatPos,
  kFeatInflSuffix,
  kFeatDerivSuffix,
  kFeatProperNoun,
  kFeatKazNameSuffix,
  kFeatCase,
  kFeatSentStart,
  kFeatLatin,
  kFeatAcronym,
};

// Case: first code point is uppercase. SentStart: position 0. Latin: at
// least one letter and every letter is ASCII. Acronym: at least two code
// points, at least one letter, and every letter uppercase.
FeatureVector extract_features(const Sentence& sentence, std::size_t position);

}  // namespace mcner

#endif  // MCNER_FEATURES_H_
