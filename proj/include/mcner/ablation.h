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

#ifndef MCNER_ABLATION_H_
#define MCNER_ABLATION_H_

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mcner/model.h"
#include "mcner/synth.h"
#include "mcner/trainer.h"

namespace mcner {

struct AblationVariant {
  std::string name;
  Architecture architecture = Architecture::kPlain;
  bool use_root = false;
  bool use_tag_embedding = false;
  bool use_features = false;
};

// "NN" followed by any of "+root", "+tag", "+tensor", "+feat".
AblationVariant parse_variant(const std::string& name);

// NN, NN+root, NN+root+tag, NN+root+tensor.
std::vector<AblationVariant> standard_variants();

struct AblationConfig {
  SynthConfig synth;  // synth.seed is replaced by each run seed
  std::vector<AblationVariant> variants = standard_variants();
  std::vector<std::uint64_t> seeds{0};
  ModelConfig model;  // feature switches are taken from each variant
  TrainConfig train;  // train.seed is replaced by each run seed

  void validate() const;
};

// F1 columns in the order LOC, ORG, PER, Overall.
using F1Row = std::array<double, 4>;

struct AblationRow {
  std::string variant;
  F1Row dev{};   // mean over seeds
  F1Row test{};  // mean over seeds
  std::vector<F1Row> test_per_seed;

  bool operator==(const AblationRow&) const = default;
};

struct AblationTable {
  std::vector<AblationRow> rows;
  std::vector<std::uint64_t> seeds;

  bool operator==(const AblationTable&) const = default;
};

using AblationProgress = std::function<void(const std::string& variant, std::uint64_t seed, const F1Row& test)>;

// Every variant sees the same synthetic splits, model seed and shuffling seed
// for a given run seed; the reported model is the best-dev snapshot.
AblationTable run_ablation(const AblationConfig& config, const AblationProgress& progress = {});

F1Row f1_row(const EvalReport& report);

// One row per variant, columns dev LOC/ORG/PER/Overall then test ones.
std::string format_ablation(const AblationTable& table, char delimiter = '\t');

}  // namespace mcner

#endif  // MCNER_ABLATION_H_
