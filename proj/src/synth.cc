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

#include "mcner/synth.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <numeric>
#include <set>

#include "mcner/common.h"
#include "mcner/features.h"
#include "mcner/utf8.h"

namespace mcner {
namespace {

constexpr std::string_view kConsonants = "bdgjklmnpqrstyz";
constexpr std::string_view kVowels = "aeiou";

std::string syllable(Rng& rng) {
  std::string s;
  s += kConsonants[rng.below(kConsonants.size())];
  s += kVowels[rng.below(kVowels.size())];
  return s;
}

// Distinct strings made of `min_syll`..`max_syll` syllables, optionally
// closed by a consonant.
std::vector<std::string> distinct_strings(Rng& rng, std::size_t count, int min_syll, int max_syll,
                                          bool closing, std::set<std::string>& taken) {
  std::vector<std::string> out;
  while (out.size() < count) {
    std::string s;
    const int n = min_syll + static_cast<int>(rng.below(static_cast<std::size_t>(max_syll - min_syll + 1)));
    for (int i = 0; i < n; ++i) s += syllable(rng);
    if (closing && rng.bernoulli(0.5)) s += kConsonants[rng.below(kConsonants.size())];
    if (taken.insert(s).second) out.push_back(s);
  }
  return out;
}

std::uint64_t syllable_space() { return kConsonants.size() * kVowels.size(); }

}  // namespace

std::uint64_t forms_per_root(int n_suffixes, int max_suffix_chain) {
  std::uint64_t total = 0;
  std::uint64_t term = 1;
  for (int k = 0; k <= max_suffix_chain; ++k) {
    total += term;
    term *= static_cast<std::uint64_t>(n_suffixes);
  }
  return total;
}

void SynthConfig::validate() const {
  if (n_roots < 1) throw Error("n_roots must be >= 1");
  if (n_suffixes < 0 || max_suffix_chain < 0) throw Error("suffix counts must be >= 0");
  if (loc_gazetteer < 1 || org_gazetteer < 1 || per_gazetteer < 1) {
    throw Error("gazetteer sizes must be >= 1");
  }
  if (n_sentences < 1) throw Error("n_sentences must be >= 1");
  if (min_length < 1 || max_length < min_length) throw Error("invalid sentence length range");
  if (!(entity_density > 0.0 && entity_density < 1.0)) throw Error("entity density must be in (0, 1)");
  const std::uint64_t syll = syllable_space();
  if (static_cast<std::uint64_t>(n_roots) > syll * syll + syll * syll * syll) {
    throw Error("n_roots exceeds the root string space");
  }
  if (static_cast<std::uint64_t>(n_suffixes) > syll * (kConsonants.size() + 1)) {
    throw Error("n_suffixes exceeds the suffix string space");
  }
  // Gazetteer entries are distinct roots of the shared inventory.
  for (auto [name, size] : {std::pair{"LOC", loc_gazetteer}, {"ORG", org_gazetteer}, {"PER", per_gazetteer}}) {
    if (size > n_roots) {
      throw Error(std::string(name) + " gazetteer of " + std::to_string(size) +
                  " entries exceeds the " + std::to_string(n_roots) + " derivable roots");
    }
  }
}

SynthCorpus generate(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  std::set<std::string> taken;
  const auto roots = distinct_strings(rng, config.n_roots, 2, 3, false, taken);
  const auto suffixes = distinct_strings(rng, config.n_suffixes, 1, 1, true, taken);

  // Gazetteers take disjoint slices of a shuffled root order while roots
  // last, wrapping around otherwise; common words use the remaining roots.
  std::vector<std::size_t> order(roots.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order.begin(), order.end());
  const std::array<std::pair<const char*, int>, 3> types{
      {{"LOC", config.loc_gazetteer}, {"ORG", config.org_gazetteer}, {"PER", config.per_gazetteer}}};
  std::array<std::vector<std::size_t>, 3> gazetteers;
  std::size_t cursor = 0;
  for (std::size_t t = 0; t < types.size(); ++t) {
    for (int e = 0; e < types[t].second; ++e) gazetteers[t].push_back(order[cursor++ % order.size()]);
  }
  std::vector<std::size_t> common;
  for (std::size_t i = cursor; i < order.size(); ++i) common.push_back(order[i]);
  if (common.empty()) common = order;

  auto inflect = [&](const std::string& root) {
    std::string surface = root;
    if (suffixes.empty()) return surface;
    const auto chain = rng.below(static_cast<std::size_t>(config.max_suffix_chain) + 1);
    for (std::size_t k = 0; k < chain; ++k) surface += suffixes[rng.below(suffixes.size())];
    return surface;
  };
  auto make_token = [&](std::size_t root_index, bool entity) {
    Token token;
    token.root = roots[root_index];
    token.surface = inflect(token.root);
    if (entity) token.surface = utf8::capitalize(token.surface);
    token.morph[kFeatRoot] = 1;
    token.morph[kFeatProperNoun] = entity ? 1 : 0;
    return token;
  };
  constexpr std::array<int, 3> kMaxMention{2, 3, 2};  // LOC, ORG, PER

  SynthCorpus corpus;
  for (int s = 0; s < config.n_sentences; ++s) {
    const int length = config.min_length +
                       static_cast<int>(rng.below(static_cast<std::size_t>(config.max_length - config.min_length + 1)));
    Sentence sentence;
    while (static_cast<int>(sentence.size()) < length) {
      if (rng.bernoulli(config.entity_density)) {
        const std::size_t t = rng.below(types.size());
        const int room = length - static_cast<int>(sentence.size());
        const int span = std::min(room, 1 + static_cast<int>(rng.below(static_cast<std::size_t>(kMaxMention[t]))));
        for (int k = 0; k < span; ++k) {
          Token token = make_token(gazetteers[t][rng.below(gazetteers[t].size())], true);
          token.tag = std::string(k == 0 ? "B-" : "I-") + types[t].first;
          sentence.tokens.push_back(std::move(token));
        }
      } else {
        Token token = make_token(common[rng.below(common.size())], false);
        token.tag = "O";
        sentence.tokens.push_back(std::move(token));
      }
    }
    auto& first = sentence.tokens.front();
    first.surface = utf8::capitalize(first.surface);
    corpus.sentences.push_back(std::move(sentence));
  }

  corpus.report = measure(corpus.sentences, config);
  if (corpus.sentences.size() >= 3) {
    corpus.split = split_corpus(corpus.sentences, config.split, config.seed);
  } else {
    corpus.split.train = corpus.sentences;
  }
  return corpus;
}

SynthReport measure(const std::vector<Sentence>& sentences, const SynthConfig& config) {
  SynthReport report;
  std::set<std::string> surfaces;
  std::set<std::string> roots;
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) {
      ++report.tokens;
      surfaces.insert(utf8::lowercase(t.surface));
      roots.insert(t.root);
    }
  }
  report.surface_types = surfaces.size();
  report.root_types = roots.size();
  report.type_token_ratio =
      report.tokens ? static_cast<double>(report.surface_types) / static_cast<double>(report.tokens) : 0.0;
  report.forms_per_root = forms_per_root(config.n_suffixes, config.max_suffix_chain);
  return report;
}

std::string format_report(const SynthReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "tokens\t%zu\nsurface_types\t%zu\nroot_types\t%zu\ntype_token_ratio\t%.4f\n"
                "forms_per_root\t%llu\n",
                report.tokens, report.surface_types, report.root_types, report.type_token_ratio,
                static_cast<unsigned long long>(report.forms_per_root));
  return buf;
}

}  // namespace mcner
