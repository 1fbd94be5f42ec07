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

#ifndef MCNER_TESTS_CONLL_FIXTURES_H_
#define MCNER_TESTS_CONLL_FIXTURES_H_

// Gold/prediction pairs with counts and scores worked out by hand using the
// conlleval chunk rules: a chunk opens at B-X, or at I-X that does not
// continue an open X chunk, and is correct only with matching type and both
// boundaries.

#include <string>
#include <vector>

namespace mcner::testing {

struct ConllFixture {
  std::string name;
  std::vector<std::vector<std::string>> gold;
  std::vector<std::vector<std::string>> predicted;
  std::size_t gold_chunks;
  std::size_t found_chunks;
  std::size_t correct_chunks;
  double precision;
  double recall;
  double f1;
};

inline std::vector<ConllFixture> conll_fixtures() {
  using S = std::vector<std::string>;
  return {
      {"exact match", {S{"B-PER", "I-PER", "O", "B-LOC"}}, {S{"B-PER", "I-PER", "O", "B-LOC"}}, 2, 2, 2,
       100.00, 100.00, 100.00},
      {"right boundary too short", {S{"B-ORG", "I-ORG", "I-ORG", "O"}}, {S{"B-ORG", "I-ORG", "O", "O"}}, 1, 1, 0,
       0.00, 0.00, 0.00},
      {"type error", {S{"B-PER", "O", "B-LOC"}}, {S{"B-ORG", "O", "B-LOC"}}, 2, 2, 1, 50.00, 50.00, 50.00},
      {"adjacent gold chunks merged", {S{"B-LOC", "B-LOC", "O"}}, {S{"B-LOC", "I-LOC", "O"}}, 2, 1, 0, 0.00,
       0.00, 0.00},
      {"adjacent chunks kept apart", {S{"B-PER", "I-PER", "B-PER", "O", "B-ORG"}},
       {S{"B-PER", "I-PER", "B-PER", "O", "O"}}, 3, 2, 2, 100.00, 66.67, 80.00},
      {"all outside", {S{"O", "O", "O"}, S{"O"}}, {S{"O", "O", "O"}, S{"O"}}, 0, 0, 0, 0.00, 0.00, 0.00},
      {"spurious chunks", {S{"O", "O", "O", "O"}}, {S{"O", "B-LOC", "O", "B-PER"}}, 0, 2, 0, 0.00, 0.00, 0.00},
      {"chunk opened by I-", {S{"B-LOC", "I-LOC", "O"}}, {S{"I-LOC", "I-LOC", "O"}}, 1, 1, 1, 100.00, 100.00,
       100.00},
      {"inside tag of another type", {S{"B-PER", "I-PER", "O"}}, {S{"B-PER", "I-ORG", "O"}}, 1, 2, 0, 0.00,
       0.00, 0.00},
      // 5 gold: ORG, PER | LOC, LOC | PER. 6 found: ORG, PER | LOC, LOC | PER,
      // PER. Correct: ORG, PER, first LOC, last PER.
      {"three sentences",
       {S{"B-ORG", "I-ORG", "O", "B-PER"}, S{"B-LOC", "O", "B-LOC", "I-LOC"}, S{"O", "B-PER"}},
       {S{"B-ORG", "I-ORG", "O", "B-PER"}, S{"B-LOC", "O", "B-LOC", "O"}, S{"B-PER", "B-PER"}}, 5, 6, 4, 66.67,
       80.00, 72.73},
  };
}

}  // namespace mcner::testing

#endif  // MCNER_TESTS_CONLL_FIXTURES_H_
