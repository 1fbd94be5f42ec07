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

#ifndef MCNER_EVALUATOR_H_
#define MCNER_EVALUATOR_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcner/corpus.h"
#include "mcner/embeddings.h"

namespace mcner {

struct ChunkSpan {
  std::string type;
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive

  auto operator<=>(const ChunkSpan&) const = default;
};

// Maximal chunks with conlleval boundaries: a chunk opens at B-X, or at I-X
// that does not continue an X chunk; it closes at O, B-*, or a type change.
// Throws Error on anything other than O, B-X, I-X.
std::vector<ChunkSpan> extract_chunks(std::span<const std::string> tags);

// IOB2 tags of `length` tokens covering the given chunks.
std::vector<std::string> chunks_to_iob2(std::span<const ChunkSpan> chunks, std::size_t length);

struct ChunkCounts {
  std::size_t gold = 0;
  std::size_t found = 0;
  std::size_t correct = 0;

  // Percentages; F1 = 2PR / (P + R), and 0 when P + R = 0.
  double precision() const;
  double recall() const;
  double f1() const;
};

struct EvalReport {
  std::map<std::string, ChunkCounts> per_type;  // always holds LOC, ORG, PER
  ChunkCounts overall;
  std::size_t tokens = 0;
  std::size_t correct_tags = 0;

  double accuracy() const;
};

// Micro-averaged chunk scores. A predicted chunk is correct only when type
// and both boundaries match a gold chunk.
EvalReport evaluate(const std::vector<std::vector<std::string>>& gold,
                    const std::vector<std::vector<std::string>>& predicted);
EvalReport evaluate(std::span<const Sentence> gold,
                    const std::vector<std::vector<std::string>>& predicted);

// conlleval-style text: summary lines, one row per type, then Overall.
std::string format_conlleval(const EvalReport& report);
// One delimited row per type plus Overall, with a header row.
std::string format_table(const EvalReport& report, char delimiter = '\t');

class OutOfVocabulary : public Error {
 public:
  using Error::Error;
};

struct Neighbor {
  std::string token;
  double cosine = 0.0;
};

struct NeighborResult {
  std::vector<Neighbor> neighbors;
  std::size_t zero_norm_skipped = 0;
};

// Top-k columns by cosine similarity to the query's column. The query, the
// reserved symbols and zero-norm columns never appear; ties go to the lower
// id. Throws OutOfVocabulary when the query has no column of its own.
NeighborResult nearest_neighbors(const EmbeddingTable& table, const Dictionary& dictionary,
                                 std::string_view query, std::size_t k);

}  // namespace mcner

#endif  // MCNER_EVALUATOR_H_
