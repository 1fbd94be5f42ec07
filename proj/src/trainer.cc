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

#include "mcner/trainer.h"

#include <cmath>
#include <cstdio>
#include <numeric>

namespace mcner {
namespace {

void require_finite(const Eigen::Ref<const Matrix>& g, const std::string& name) {
  if (!g.allFinite()) throw Error("non-finite gradient for " + name);
}

void update_columns(EmbeddingTable& table, Matrix& accumulator, const std::map<int, Vector>& grads,
                    double lr, double l2) {
  for (const auto& [id, g] : grads) {
    adagrad_update(table.column(id), accumulator.col(id), g, lr, l2);
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error("learning rate must be > 0");
  if (!(l2 >= 0.0)) throw Error("l2 must be >= 0");
  if (epochs < 1) throw Error("epochs must be >= 1");
  if (patience < 0) throw Error("patience must be >= 0");
  if (!(target_f1 >= 0.0 && target_f1 <= 100.0)) throw Error("target F1 must be in [0, 100]");
}

AdaGradState AdaGradState::zeros(const Model& model) {
  AdaGradState state;
  for (const auto& g : model.zero_gradients().dense) state.dense.push_back(Matrix::Zero(g.rows(), g.cols()));
  const auto& t = model.tables();
  state.words = Matrix::Zero(t.words.dim(), t.words.size());
  state.roots = Matrix::Zero(t.roots.dim(), t.roots.size());
  state.tags = Matrix::Zero(t.tags.dim(), t.tags.size());
  return state;
}

void adagrad_update(StridedRef param, StridedRef accumulator, const ConstStridedRef& grad,
                    double learning_rate, double l2) {
  for (Eigen::Index j = 0; j < param.cols(); ++j) {
    for (Eigen::Index i = 0; i < param.rows(); ++i) {
      const double g = grad(i, j) + l2 * param(i, j);
      accumulator(i, j) += g * g;
      param(i, j) -= learning_rate * g / (std::sqrt(accumulator(i, j)) + AdaGradState::kEpsilon);
    }
  }
}

void adagrad_step(Model& model, const Gradients& grads, AdaGradState& state, double learning_rate,
                  double l2) {
  auto params = model.dense_parameters();
  if (grads.dense.size() != params.size() || state.dense.size() != params.size()) {
    throw Error("gradients do not match the model");
  }
  for (std::size_t k = 0; k < params.size(); ++k) require_finite(grads.dense[k], params[k].name);
  for (const auto& [id, g] : grads.embeddings.words) require_finite(g, "word embedding " + std::to_string(id));
  for (const auto& [id, g] : grads.embeddings.roots) require_finite(g, "root embedding " + std::to_string(id));
  for (const auto& [id, g] : grads.embeddings.tags) require_finite(g, "tag embedding " + std::to_string(id));

  const int transitions = model.transition_index();
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (static_cast<int>(k) == transitions) {
      auto a = params[k].map();
      for (Eigen::Index r = 0; r < a.rows(); ++r) {
        if (!grads.transition_rows[r]) continue;
        adagrad_update(a.row(r), state.dense[k].row(r), grads.dense[k].row(r), learning_rate, l2);
      }
      continue;
    }
    adagrad_update(params[k].map(), state.dense[k], grads.dense[k], learning_rate, l2);
  }
  auto& tables = model.tables();
  update_columns(tables.words, state.words, grads.embeddings.words, learning_rate, l2);
  update_columns(tables.roots, state.roots, grads.embeddings.roots, learning_rate, l2);
  update_columns(tables.tags, state.tags, grads.embeddings.tags, learning_rate, l2);
}

std::string epoch_log_header() { return "epoch\tloss\tdev_p\tdev_r\tdev_f1\tdev_acc"; }

std::string format_epoch_log(const EpochLog& row) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d\t%.6f\t%.2f\t%.2f\t%.2f\t%.2f", row.epoch, row.train_loss,
                row.dev_precision, row.dev_recall, row.dev_f1, row.dev_accuracy);
  return buf;
}

std::vector<std::vector<std::string>> tag_all(const Model& model, std::span<const Sentence> sentences) {
  std::vector<std::vector<std::string>> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(model.tag(s));
  return out;
}

TrainResult train(Model model, std::span<const Sentence> train, std::span<const Sentence> dev,
                  const TrainConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  if (train.empty()) throw Error("training set is empty");
  if (dev.empty()) throw Error("development set is empty");

  std::vector<EncodedSentence> inputs;
  std::vector<std::vector<int>> golds;
  for (std::size_t s = 0; s < train.size(); ++s) {
    if (train[s].size() == 0) throw Error("training sentence " + std::to_string(s + 1) + " is empty");
    const auto tags = train[s].tags();
    if (auto v = validate_iob(tags)) {
      throw Error("training sentence " + std::to_string(s + 1) + ": " + v->message);
    }
    inputs.push_back(model.encode(train[s]));
    golds.push_back(encode_tags(train[s], model.vocab()));
  }
  std::vector<std::vector<std::string>> dev_gold;
  for (const auto& s : dev) dev_gold.push_back(s.tags());

  AdaGradState state = AdaGradState::zeros(model);
  Gradients grads = model.zero_gradients();
  Rng rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  int since_best = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.shuffle) rng.shuffle(order.begin(), order.end());
    double total = 0.0;
    for (std::size_t s : order) {
      grads.clear();
      total += model.loss(inputs[s], golds[s], &grads);
      adagrad_step(model, grads, state, config.learning_rate, config.l2);
    }

    const EvalReport report = evaluate(dev_gold, tag_all(model, dev));
    EpochLog row;
    row.epoch = epoch;
    row.train_loss = total / static_cast<double>(train.size());
    row.dev_precision = report.overall.precision();
    row.dev_recall = report.overall.recall();
    row.dev_f1 = report.overall.f1();
    row.dev_accuracy = report.accuracy();
    result.log.push_back(row);
    if (on_epoch) on_epoch(row);

    if (epoch == 1 || row.dev_f1 > result.best_dev_f1) {
      result.model = model;
      result.best_epoch = epoch;
      result.best_dev_f1 = row.dev_f1;
      since_best = 0;
    } else if (config.patience > 0 && ++since_best >= config.patience) {
      break;
    }
    if (config.target_f1 > 0.0 && row.dev_f1 >= config.target_f1) break;
  }
  return result;
}

}  // namespace mcner
