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

#include "mcner/model.h"

#include <cmath>

namespace mcner {
namespace {

constexpr double kForbidden = -1e9;

void check_gold(std::span<const int> gold, const EncodedSentence& sentence, int tag_count) {
  if (gold.size() != sentence.size()) throw Error("gold tag count differs from sentence length");
  for (int t : gold) {
    if (t < 0 || t >= tag_count) throw Error("invalid gold tag id " + std::to_string(t));
  }
}

}  // namespace

void ModelConfig::validate() const {
  window.validate();
  network.validate();
}

void Gradients::clear() {
  for (auto& m : dense) m.setZero();
  embeddings.clear();
  std::fill(transition_rows.begin(), transition_rows.end(), false);
}

Model::Model(Vocabulary vocab, ModelConfig config, EmbeddingSet tables, Network network,
             std::optional<TransitionMatrix> transitions)
    : vocab_(std::move(vocab)),
      config_(std::move(config)),
      tables_(std::move(tables)),
      network_(std::move(network)),
      transitions_(std::move(transitions)) {
  config_.validate();
  if (config_.network.tag_count != vocab_.tags.size()) {
    throw Error("network has " + std::to_string(config_.network.tag_count) +
                " outputs, vocabulary has " + std::to_string(vocab_.tags.size()) + " tags");
  }
  tables_.check(vocab_, config_.window);
  if (network_.input_size() != config_.window.input_size() || !(network_.config() == config_.network)) {
    throw Error("network does not match the model config");
  }
  if (config_.pairwise() == transitions_.has_value()) {
    throw Error(config_.pairwise() ? "tag-embedding models take no transition matrix"
                                   : "model needs a transition matrix");
  }
  if (transitions_ && transitions_->tag_count() != vocab_.tags.size()) {
    throw Error("transition matrix does not match the tag set");
  }
}

Model Model::create(Vocabulary vocab, const ModelConfig& config, std::uint64_t seed) {
  ModelConfig cfg = config;
  cfg.network.tag_count = vocab.tags.size();
  cfg.validate();
  Rng rng(seed);
  EmbeddingSet tables = EmbeddingSet::create(vocab, cfg.window, rng);
  Network network(cfg.network, cfg.window.input_size());
  network.initialize(rng);
  std::optional<TransitionMatrix> transitions;
  if (!cfg.pairwise()) transitions.emplace(vocab.tags.size());
  return Model(std::move(vocab), cfg, std::move(tables), std::move(network), std::move(transitions));
}

TagLattice Model::lattice(const EncodedSentence& sentence) const {
  const int n = static_cast<int>(sentence.size());
  if (n == 0) throw Error("cannot score an empty sentence");
  const int k = vocab_.tags.size();
  Vector input;
  if (!config_.pairwise()) {
    std::vector<Vector> emissions(n);
    for (int i = 0; i < n; ++i) {
      build_input(sentence, i, 0, tables_, config_.window, input);
      emissions[i] = network_.forward(input);
    }
    return TagLattice::unary(std::move(emissions));
  }

  const int tag_offset = config_.window.tag_offset();
  const int tag_dim = config_.window.tag_dim;
  std::vector<Matrix> emissions(n, Matrix::Zero(k + 1, k));
  for (int i = 0; i < n; ++i) {
    build_input(sentence, i, start_tag(vocab_), tables_, config_.window, input);
    if (i == 0) {
      emissions[i].row(0) = network_.forward(input).transpose();
      continue;
    }
    for (int p = 0; p < k; ++p) {
      input.segment(tag_offset, tag_dim) = tables_.tags.lookup(p);
      emissions[i].row(p + 1) = network_.forward(input).transpose();
    }
  }
  return TagLattice::pairwise(std::move(emissions));
}

Matrix iob_transition_mask(const TagSet& tags) {
  const int k = tags.size();
  Matrix mask = Matrix::Zero(k + 1, k);
  for (int t = 0; t < k; ++t) {
    const auto to = parse_tag(tags.name(t));
    if (!to || to->prefix != 'I') continue;
    mask(0, t) = kForbidden;
    for (int p = 0; p < k; ++p) {
      const auto from = parse_tag(tags.name(p));
      if (!from || from->prefix == 'O' || from->type != to->type) mask(p + 1, t) = kForbidden;
    }
  }
  return mask;
}

std::vector<int> Model::decode(const EncodedSentence& sentence, bool constrained) const {
  if (sentence.empty()) return {};
  TagLattice lat = lattice(sentence);
  if (!constrained) return viterbi(lat, transitions()).path;

  const Matrix mask = iob_transition_mask(vocab_.tags);
  if (transitions_) {
    TransitionMatrix masked(transitions_->scores() + mask);
    return viterbi(lat, &masked).path;
  }
  std::vector<Matrix> emissions;
  for (int i = 0; i < lat.length(); ++i) emissions.push_back(lat.pairwise_at(i) + mask);
  return viterbi(TagLattice::pairwise(std::move(emissions)), nullptr).path;
}

std::vector<std::string> Model::tag(const Sentence& sentence, bool constrained) const {
  std::vector<std::string> out;
  for (int t : decode(encode(sentence), constrained)) out.push_back(vocab_.tags.name(t));
  return out;
}

double Model::loss(const EncodedSentence& sentence, std::span<const int> gold,
                   Gradients* grads) const {
  const int n = static_cast<int>(sentence.size());
  if (n == 0) throw Error("cannot score an empty sentence");
  const int k = vocab_.tags.size();
  check_gold(gold, sentence, k);

  std::span<Matrix> network_grads;
  if (grads) {
    if (grads->dense.size() != network_.tensor_count() + (transitions_ ? 1 : 0)) {
      throw Error("gradient buffer does not match the model");
    }
    network_grads = std::span<Matrix>(grads->dense.data(), grads->dense.size() - (transitions_ ? 1 : 0));
  }

  Vector input;
  if (config_.pairwise()) {
    // Teacher forcing: condition each position on the gold previous tag.
    double total = 0.0;
    Network::Cache cache;
    for (int i = 0; i < n; ++i) {
      const int prev = i == 0 ? start_tag(vocab_) : gold[i - 1];
      build_input(sentence, i, prev, tables_, config_.window, input);
      const Vector scores = network_.forward(input, grads ? &cache : nullptr);
      const double lse = log_sum_exp(scores);
      total += lse - scores[gold[i]];
      if (grads) {
        Vector d = (scores.array() - lse).exp();
        d[gold[i]] -= 1.0;
        const Vector dinput = network_.backward(cache, d, network_grads);
        route_input_gradient(dinput, sentence, i, prev, config_.window, grads->embeddings);
      }
    }
    return total;
  }

  std::vector<Network::Cache> caches(grads ? n : 0);
  std::vector<Vector> emissions(n);
  for (int i = 0; i < n; ++i) {
    build_input(sentence, i, 0, tables_, config_.window, input);
    emissions[i] = network_.forward(input, grads ? &caches[i] : nullptr);
  }
  const TagLattice lat = TagLattice::unary(std::move(emissions));
  const double gold_score = sentence_score(lat, gold, transitions());
  if (!grads) return log_partition(lat, transitions()) - gold_score;

  const Marginals m = forward_backward(lat, transitions());
  for (int i = 0; i < n; ++i) {
    Vector d = m.node[i];
    d[gold[i]] -= 1.0;
    const Vector dinput = network_.backward(caches[i], d, network_grads);
    route_input_gradient(dinput, sentence, i, 0, config_.window, grads->embeddings);
  }
  Matrix& da = grads->dense.back();
  for (int i = 0; i < n; ++i) da += m.edge[i];
  da(0, gold[0]) -= 1.0;
  for (int i = 1; i < n; ++i) da(gold[i - 1] + 1, gold[i]) -= 1.0;
  grads->transition_rows[0] = true;
  if (n > 1) {
    for (int r = 1; r <= k; ++r) grads->transition_rows[r] = true;
  }
  return m.log_partition - gold_score;
}

Gradients Model::zero_gradients() const {
  Gradients g;
  g.dense = network_.zero_gradients();
  if (transitions_) {
    g.dense.push_back(Matrix::Zero(transitions_->scores().rows(), transitions_->scores().cols()));
    g.transition_rows.assign(transitions_->scores().rows(), false);
  }
  return g;
}

std::vector<ParamRef> Model::dense_parameters() {
  auto params = network_.parameters();
  if (transitions_) {
    Matrix& a = transitions_->scores();
    params.push_back({"transitions", a.data(), a.rows(), a.cols()});
  }
  return params;
}

int Model::transition_index() const {
  if (!transitions_) return -1;
  return static_cast<int>(network_.tensor_count());
}

}  // namespace mcner
