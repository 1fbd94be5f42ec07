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

#ifndef MCNER_SYNTH_H_
#define MCNER_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mcner/corpus.h"

namespace mcner {

struct SynthConfig {
  int n_roots = 100;
  int n_suffixes = 10;
  int max_suffix_chain = 2;
  int loc_gazetteer = 30;
  int org_gazetteer = 20;
  int per_gazetteer = 30;
  int n_sentences = 1000;
  int min_length = 5;
  int max_length = 15;
  double entity_density = 0.2;  // chance that a free slot opens an entity
  std::uint64_t seed = 0;
  SplitRatios split;

  void validate() const;
};

struct SynthReport {
  std::size_t tokens = 0;
  std::size_t surface_types = 0;  // distinct lowercased surfaces
  std::size_t root_types = 0;
  double type_token_ratio = 0.0;
  std::uint64_t forms_per_root = 0;  // 1 + s + s^2 + ... + s^max_chain
};

struct SynthCorpus {
  std::vector<Sentence> sentences;  // generation order
  CorpusSplit split;
  SynthReport report;
};

// Upper bound on distinct surface forms derivable from one root.
std::uint64_t forms_per_root(int n_suffixes, int max_suffix_chain);

// Each token is a root followed by 0..max_suffix_chain suffixes. Entity
// mentions (LOC: 1 token, PER: 1-2, ORG: 1-3) draw their roots from per-type
// gazetteers, are capitalized and carry the ProperNoun bit; every token
// carries the Root bit. Identical configs give identical corpora.
SynthCorpus generate(const SynthConfig& config);

SynthReport measure(const std::vector<Sentence>& sentences, const SynthConfig& config);
std::string format_report(const SynthReport& report);

}  // namespace mcner

#endif  // MCNER_SYNTH_H_
