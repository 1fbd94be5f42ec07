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

#include <gtest/gtest.h>

#include "mcner/model.h"
#include "oracles.h"

namespace mcner {
namespace {

using testing::brute_force;
using testing::probe_gradients;
using testing::randomize;
using testing::small_corpus;
using testing::tiny_config;

struct Variant {
  Architecture arch;
  bool tag;
};

class ModelGradient : public ::testing::TestWithParam<std::tuple<Architecture, bool, bool>> {};

TEST_P(ModelGradient, SentenceLossMatchesFiniteDifferences) {
  const auto [arch, tag, extra] = GetParam();
  const auto corpus = small_corpus(5);
  const auto vocab = build_vocabulary(corpus.split.train);
  auto config = tiny_config(arch, true, tag, true);
  if (extra) config.network.extra_hidden = 4;
  Model model = Model::create(vocab, config, 9);
  Rng rng(41);
  randomize(model, rng, 0.5);
  for (int s = 0; s < 3; ++s) {
    const auto& sentence = corpus.split.train[s];
    const auto probes =
        probe_gradients(model, model.encode(sentence), encode_tags(sentence, vocab), rng, 4);
    for (const auto& p : probes) {
      EXPECT_LT(p.error, 1e-4) << p.parameter << " analytic " << p.analytic << " numeric " << p.numeric;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Configurations, ModelGradient,
                         ::testing::Combine(::testing::Values(Architecture::kPlain, Architecture::kTensor),
                                            ::testing::Bool(), ::testing::Bool()));

TEST(Model, CrfLossIsLogPartitionMinusGoldScore) {
  const auto corpus = small_corpus(6);
  const auto vocab = build_vocabulary(corpus.split.train);
  Model model = Model::create(vocab, tiny_config(Architecture::kPlain, true, false, true), 1);
  Rng rng(42);
  randomize(model, rng, 0.3);
  for (const auto& sentence : corpus.split.train) {
    if (sentence.size() > 4) continue;
    const auto enc = model.encode(sentence);
    const auto gold = encode_tags(sentence, vocab);
    const auto lattice = model.lattice(enc);
    const auto bf = brute_force(lattice, model.transitions());
    const double expected = bf.log_partition - sentence_score(lattice, gold, model.transitions());
    EXPECT_NEAR(model.loss(enc, gold, nullptr), expected, 1e-9);
    EXPECT_GE(model.loss(enc, gold, nullptr), 0.0);
    EXPECT_EQ(model.decode(enc), bf.path);
  }
}

TEST(Model, PairwiseLossIsTeacherForcedSoftmax) {
  const auto corpus = small_corpus(7);
  const auto vocab = build_vocabulary(corpus.split.train);
  Model model = Model::create(vocab, tiny_config(Architecture::kTensor, true, true, true), 2);
  Rng rng(43);
  randomize(model, rng, 0.3);
  EXPECT_EQ(model.transitions(), nullptr);
  const auto& sentence = corpus.split.train[0];
  const auto enc = model.encode(sentence);
  const auto gold = encode_tags(sentence, vocab);
  double expected = 0.0;
  for (int i = 0; i < static_cast<int>(enc.size()); ++i) {
    const int prev = i == 0 ? start_tag(vocab) : gold[i - 1];
    const Vector scores = model.network().forward(build_input(enc, i, prev, model.tables(), model.config().window));
    expected += log_sum_exp(scores) - scores[gold[i]];
  }
  EXPECT_NEAR(model.loss(enc, gold, nullptr), expected, 1e-10);

  // The inference lattice holds the same network scores, one row per previous tag.
  const auto lattice = model.lattice(enc);
  ASSERT_TRUE(lattice.is_pairwise());
  for (int i = 0; i < static_cast<int>(enc.size()); ++i) {
    for (int p = (i == 0 ? -1 : 0); p < (i == 0 ? 0 : vocab.tags.size()); ++p) {
      const int prev = p < 0 ? start_tag(vocab) : p;
      const Vector scores = model.network().forward(build_input(enc, i, prev, model.tables(), model.config().window));
      EXPECT_EQ(Vector(lattice.pairwise_at(i).row(p + 1).transpose()), scores);
    }
  }
  EXPECT_EQ(model.decode(enc), brute_force(lattice, nullptr).path);
}

TEST(Model, ConstrainedDecodingIsValidIob2) {
  const auto corpus = small_corpus(8);
  const auto vocab = build_vocabulary(corpus.split.train);
  for (bool tag : {false, true}) {
    Model model = Model::create(vocab, tiny_config(Architecture::kPlain, true, tag, false), 3);
    Rng rng(44);
    randomize(model, rng, 2.0);
    for (const auto& sentence : corpus.split.test) {
      EXPECT_FALSE(validate_iob(model.tag(sentence, true))) << "tag embeddings " << tag;
    }
  }
}

TEST(Model, IobMaskForbidsDanglingInside) {
  TagSet tags;
  tags.add("B-LOC");
  tags.add("I-LOC");
  tags.add("B-PER");
  const Matrix mask = iob_transition_mask(tags);
  const int i_loc = tags.id("I-LOC");
  EXPECT_LT(mask(0, i_loc), -1e8);                     // sentence start
  EXPECT_EQ(mask(tags.id("B-LOC") + 1, i_loc), 0.0);   // B-LOC -> I-LOC
  EXPECT_EQ(mask(i_loc + 1, i_loc), 0.0);              // I-LOC -> I-LOC
  EXPECT_LT(mask(tags.id("B-PER") + 1, i_loc), -1e8);  // B-PER -> I-LOC
  EXPECT_EQ(mask(0, tags.id("B-PER")), 0.0);
}

TEST(Model, UnknownWordsAreTaggedWithoutError) {
  const auto corpus = small_corpus(9);
  const auto vocab = build_vocabulary(corpus.split.train);
  Model model = Model::create(vocab, tiny_config(Architecture::kTensor, true, true, true), 4);
  Sentence s;
  s.tokens.push_back({"Жоқсөз", "жоқ", {}, std::nullopt});
  s.tokens.push_back({"мүлдежоқ", "мүлде", {}, std::nullopt});
  const auto enc = model.encode(s);
  EXPECT_EQ(enc[0].word, Dictionary::kUnknown);
  EXPECT_EQ(enc[1].root, Dictionary::kUnknown);
  EXPECT_EQ(model.tag(s).size(), 2u);
}

TEST(Model, CreateIsDeterministic) {
  const auto corpus = small_corpus(10);
  const auto vocab = build_vocabulary(corpus.split.train);
  const auto c = tiny_config(Architecture::kTensor, true, false, true);
  EXPECT_TRUE(Model::create(vocab, c, 5) == Model::create(vocab, c, 5));
  EXPECT_FALSE(Model::create(vocab, c, 5) == Model::create(vocab, c, 6));
  const Model m = Model::create(vocab, c, 5);
  EXPECT_TRUE(m.transitions()->scores().isZero());
}

}  // namespace
}  // namespace mcner
