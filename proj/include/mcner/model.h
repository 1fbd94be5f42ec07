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

#ifndef MCNER_MODEL_H_
#define MCNER_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcner/corpus.h"
#include "mcner/decoder.h"
#include "mcner/embeddings.h"
#include "mcner/network.h"

namespace mcner {

struct ModelConfig {
  WindowConfig window;
  NetworkConfig network;

  // Tag embeddings replace the transition matrix: f(t | i, t_{i-1}).
  bool pairwise() const { return window.use_tag_embedding; }
  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

// Gradients of one or more sentences.
struct Gradients {
  // Aligned with Model::dense_parameters(): network tensors, then the
  // transition matrix when the model has one.
  std::vector<Matrix> dense;
  EmbeddingGradients embeddings;
  // Rows of the transition matrix that received gradient.
  std::vector<bool> transition_rows;

  void clear();
};

class Model {
 public:
  Model() = default;
  Model(Vocabulary vocab, ModelConfig config, EmbeddingSet tables, Network network,
        std::optional<TransitionMatrix> transitions);

  // Fresh model with seeded random initialization; transitions start at 0.
  static Model create(Vocabulary vocab, const ModelConfig& config, std::uint64_t seed);

  const Vocabulary& vocab() const { return vocab_; }
  const ModelConfig& config() const { return config_; }
  EmbeddingSet& tables() { return tables_; }
  const EmbeddingSet& tables() const { return tables_; }
  Network& network() { return network_; }
  const Network& network() const { return network_; }
  TransitionMatrix* transitions() { return transitions_ ? &*transitions_ : nullptr; }
  const TransitionMatrix* transitions() const { return transitions_ ? &*transitions_ : nullptr; }

  EncodedSentence encode(const Sentence& sentence) const { return mcner::encode(sentence, vocab_); }

  // Unary lattice for transition models; pairwise lattice (one network
  // evaluation per previous tag) for tag-embedding models.
  TagLattice lattice(const EncodedSentence& sentence) const;

  // Viterbi path. With `constrained`, transitions that break IOB2 are ruled out.
  std::vector<int> decode(const EncodedSentence& sentence, bool constrained = false) const;
  std::vector<std::string> tag(const Sentence& sentence, bool constrained = false) const;

  // Negative log-likelihood of the gold path. Transition models use the
  // sentence-level criterion log Z - s(X, Y); tag-embedding models use the
  // per-position softmax conditioned on the gold previous tag. Gradients are
  // added into `grads` when non-null.
  double loss(const EncodedSentence& sentence, std::span<const int> gold, Gradients* grads) const;

  Gradients zero_gradients() const;
  std::vector<ParamRef> dense_parameters();
  int transition_index() const;  // index in dense_parameters(), -1 without transitions

  bool operator==(const Model& o) const = default;

 private:
  Vocabulary vocab_;
  ModelConfig config_;
  EmbeddingSet tables_;
  Network network_;
  std::optional<TransitionMatrix> transitions_;
};

// Adds a large penalty to every transition that breaks IOB2 (I-X after
// anything but B-X or I-X, including the sentence start).
Matrix iob_transition_mask(const TagSet& tags);

}  // namespace mcner

#endif  // MCNER_MODEL_H_
