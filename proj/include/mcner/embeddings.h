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

#ifndef MCNER_EMBEDDINGS_H_
#define MCNER_EMBEDDINGS_H_

#include <filesystem>
#include <map>
#include <vector>

#include "mcner/common.h"
#include "mcner/corpus.h"
#include "mcner/features.h"

namespace mcner {

// Columns are entity vectors: a d x |dictionary| matrix.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(int dim, int size) : matrix_(Matrix::Zero(dim, size)) {}

  int dim() const { return static_cast<int>(matrix_.rows()); }
  int size() const { return static_cast<int>(matrix_.cols()); }
  bool empty() const { return matrix_.size() == 0; }

  // Throws Error when index is outside [0, size()).
  Matrix::ConstColXpr lookup(int index) const;
  Matrix::ColXpr column(int index);

  Matrix& matrix() { return matrix_; }
  const Matrix& matrix() const { return matrix_; }

 private:
  void check_index(int index) const;
  Matrix matrix_;
};

struct WindowConfig {
  int window = 3;
  int word_dim = 50;
  int root_dim = 50;
  int tag_dim = 50;
  bool use_root = false;
  bool use_tag_embedding = false;
  bool use_features = false;

  void validate() const;
  int half_window() const { return window / 2; }

  // Input layout: [w word slots | root | previous tag | 10*w feature bits].
  int root_offset() const { return window * word_dim; }
  int tag_offset() const { return root_offset() + (use_root ? root_dim : 0); }
  int feature_offset() const { return tag_offset() + (use_tag_embedding ? tag_dim : 0); }
  int input_size() const {
    return feature_offset() + (use_features ? static_cast<int>(kFeatureCount) * window : 0);
  }

  bool operator==(const WindowConfig&) const = default;
};

// Symmetric small-scale initialization range of every lookup table.
inline constexpr double kEmbeddingInitScale = 0.01;

struct EmbeddingSet {
  EmbeddingTable words;
  EmbeddingTable roots;  // empty unless use_root
  EmbeddingTable tags;   // |tags| + 1 columns, the last one is the start tag

  static EmbeddingSet create(const Vocabulary& vocab, const WindowConfig& config, Rng& rng);

  // Throws Error when table shapes disagree with the vocabulary or config.
  void check(const Vocabulary& vocab, const WindowConfig& config) const;

  bool operator==(const EmbeddingSet& other) const;
};

// Tag id standing for "no previous tag" at position 0.
inline int start_tag(const Vocabulary& vocab) { return vocab.tags.size(); }

struct EncodedToken {
  int word = Dictionary::kUnknown;
  int root = Dictionary::kUnknown;
  FeatureVector features{};
};
using EncodedSentence = std::vector<EncodedToken>;

EncodedSentence encode(const Sentence& sentence, const Vocabulary& vocab);
// Gold tag ids; throws Error on tags outside the tag set.
std::vector<int> encode_tags(const Sentence& sentence, const Vocabulary& vocab);

// Word id filling window slot `offset` (in [-w/2, w/2]) around `position`,
// with the start/end pads past the sentence boundaries.
int window_word(const EncodedSentence& sentence, int position, int offset);

// Concatenated network input for one position. prev_tag is ignored unless the
// config uses tag embeddings.
void build_input(const EncodedSentence& sentence, int position, int prev_tag,
                 const EmbeddingSet& tables, const WindowConfig& config, Vector& out);
Vector build_input(const EncodedSentence& sentence, int position, int prev_tag,
                   const EmbeddingSet& tables, const WindowConfig& config);
Vector build_input(const Sentence& sentence, int position, int prev_tag, const Vocabulary& vocab,
                   const EmbeddingSet& tables, const WindowConfig& config);

// Sparse gradients: one accumulated column per touched id.
struct EmbeddingGradients {
  std::map<int, Vector> words;
  std::map<int, Vector> roots;
  std::map<int, Vector> tags;

  void clear();
};

// Routes the gradient w.r.t. the input vector into the columns that built it.
// Feature bits are constants and receive nothing.
void route_input_gradient(const Vector& input_gradient, const EncodedSentence& sentence,
                          int position, int prev_tag, const WindowConfig& config,
                          EmbeddingGradients& grads);

struct PretrainedCoverage {
  int found = 0;    // dictionary entries overwritten
  int missing = 0;  // non-reserved entries absent from the file
  int ignored = 0;  // file rows not in the dictionary
};

// word2vec text format: "<count> <dim>" header, then "token v1 ... v_dim".
// The table is left untouched when the file is rejected.
PretrainedCoverage load_pretrained(const std::filesystem::path& path, EmbeddingTable& table,
                                   const Dictionary& dictionary, bool lowercase);
// Writes every non-reserved column with shortest round-trip float formatting.
void save_pretrained(const std::filesystem::path& path, const EmbeddingTable& table,
                     const Dictionary& dictionary);

}  // namespace mcner

#endif  // MCNER_EMBEDDINGS_H_
