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

#include "mcner/ablation.h"

#include <cstdio>
#include <sstream>

namespace mcner {

AblationVariant parse_variant(const std::string& name) {
  std::vector<std::string> parts;
  std::stringstream in(name);
  for (std::string part; std::getline(in, part, '+');) parts.push_back(part);
  if (parts.empty() || parts.front() != "NN") throw Error("variant '" + name + "' must start with NN");
  AblationVariant v;
  v.name = name;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    bool* flag = nullptr;
    bool seen = false;
    if (parts[i] == "root") {
      flag = &v.use_root;
    } else if (parts[i] == "tag") {
      flag = &v.use_tag_embedding;
    } else if (parts[i] == "feat") {
      flag = &v.use_features;
    } else if (parts[i] == "tensor") {
      seen = v.architecture == Architecture::kTensor;
      v.architecture = Architecture::kTensor;
    } else {
      throw Error("unknown component '" + parts[i] + "' in variant '" + name + "'");
    }
    if (flag) {
      seen = *flag;
      *flag = true;
    }
    if (seen) throw Error("component '" + parts[i] + "' repeated in variant '" + name + "'");
  }
  return v;
}

std::vector<AblationVariant> standard_variants() {
  std::vector<AblationVariant> out;
  for (const char* name : {"NN", "NN+root", "NN+root+tag", "NN+root+tensor"}) out.push_back(parse_variant(name));
  return out;
}

void AblationConfig::validate() const {
  if (variants.empty()) throw Error("ablation needs at least one variant");
  if (seeds.empty()) throw Error("ablation needs at least one seed");
  synth.validate();
  train.validate();
}

F1Row f1_row(const EvalReport& report) {
  F1Row row{};
  int k = 0;
  for (const char* type : {"LOC", "ORG", "PER"}) {
    auto it = report.per_type.find(type);
    row[k++] = it == report.per_type.end() ? 0.0 : it->second.f1();
  }
  row[3] = report.overall.f1();
  return row;
}

AblationTable run_ablation(const AblationConfig& config, const AblationProgress& progress) {
  config.validate();
  AblationTable table;
  table.seeds = config.seeds;
  for (const auto& v : config.variants) table.rows.push_back({v.name, {}, {}, {}});

  for (const std::uint64_t seed : config.seeds) {
    SynthConfig synth = config.synth;
    synth.seed = seed;
    const SynthCorpus corpus = generate(synth);
    if (corpus.split.dev.empty() || corpus.split.test.empty()) {
      throw Error("synthetic corpus is too small for a dev and test split");
    }
    const Vocabulary vocab = build_vocabulary(corpus.split.train);

    for (std::size_t k = 0; k < config.variants.size(); ++k) {
      const auto& variant = config.variants[k];
      ModelConfig mc = config.model;
      mc.network.architecture = variant.architecture;
      mc.window.use_root = variant.use_root;
      mc.window.use_tag_embedding = variant.use_tag_embedding;
      mc.window.use_features = variant.use_features;
      TrainConfig tc = config.train;
      tc.seed = seed;

      const TrainResult result = train(Model::create(vocab, mc, seed), corpus.split.train, corpus.split.dev, tc);
      const F1Row dev = f1_row(evaluate(corpus.split.dev, tag_all(result.model, corpus.split.dev)));
      const F1Row test = f1_row(evaluate(corpus.split.test, tag_all(result.model, corpus.split.test)));
      auto& row = table.rows[k];
      for (int c = 0; c < 4; ++c) {
        row.dev[c] += dev[c] / static_cast<double>(config.seeds.size());
        row.test[c] += test[c] / static_cast<double>(config.seeds.size());
      }
      row.test_per_seed.push_back(test);
      if (progress) progress(variant.name, seed, test);
    }
  }
  return table;
}

std::string format_ablation(const AblationTable& table, char delimiter) {
  std::ostringstream out;
  const char d = delimiter;
  out << "variant";
  for (const char* split : {"dev", "test"}) {
    for (const char* col : {"LOC", "ORG", "PER", "Overall"}) out << d << split << '_' << col;
  }
  out << '\n';
  char buf[32];
  for (const auto& row : table.rows) {
    out << row.variant;
    for (const F1Row* part : {&row.dev, &row.test}) {
      for (double f : *part) {
        std::snprintf(buf, sizeof(buf), "%.2f", f);
        out << d << buf;
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace mcner
