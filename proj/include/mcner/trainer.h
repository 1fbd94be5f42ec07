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

#ifndef MCNER_TRAINER_H_
#define MCNER_TRAINER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mcner/evaluator.h"
#include "mcner/model.h"

namespace mcner {

struct TrainConfig {
  double learning_rate = 0.01;
  double l2 = 1e-4;
  int epochs = 30;
  std::uint64_t seed = 0;
  bool shuffle = true;
  // Stop after this many epochs without a dev F1 improvement; 0 disables.
  int patience = 0;
  // Stop as soon as dev F1 reaches this value; 0 disables.
  double target_f1 = 0.0;

  void validate() const;
};

// Per-parameter accumulated squared gradients.
struct AdaGradState {
  static constexpr double kEpsilon = 1e-8;

  std::vector<Matrix> dense;  // aligned with Model::dense_parameters()
  Matrix words;
  Matrix roots;
  Matrix tags;

  static AdaGradState zeros(const Model& model);
};

using StridedRef = Eigen::Ref<Matrix, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
using ConstStridedRef = Eigen::Ref<const Matrix, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;

// param -= lr * g / (sqrt(acc) + eps) with g = grad + l2 * param and
// acc += g^2, applied elementwise.
void adagrad_update(StridedRef param, StridedRef accumulator, const ConstStridedRef& grad,
                    double learning_rate, double l2);

// One optimizer step. Dense tensors are updated in full; embedding columns and
// transition rows only where the gradient touched them. Throws Error naming
// the parameter when a gradient is not finite, before anything is modified.
void adagrad_step(Model& model, const Gradients& grads, AdaGradState& state, double learning_rate,
                  double l2);

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;  // mean sentence loss over the epoch
  double dev_precision = 0.0;
  double dev_recall = 0.0;
  double dev_f1 = 0.0;
  double dev_accuracy = 0.0;

  bool operator==(const EpochLog&) const = default;
};

std::string epoch_log_header();
std::string format_epoch_log(const EpochLog& row);

struct TrainResult {
  Model model;  // snapshot with the highest dev F1, earliest on ties
  std::vector<EpochLog> log;
  int best_epoch = 0;
  double best_dev_f1 = 0.0;
};

using EpochCallback = std::function<void(const EpochLog&)>;

// Per-sentence AdaGrad over `train`, scoring `dev` after every epoch.
TrainResult train(Model model, std::span<const Sentence> train, std::span<const Sentence> dev,
                  const TrainConfig& config, const EpochCallback& on_epoch = {});

// Tags every sentence with the model.
std::vector<std::vector<std::string>> tag_all(const Model& model, std::span<const Sentence> sentences);

}  // namespace mcner

#endif  // MCNER_TRAINER_H_
