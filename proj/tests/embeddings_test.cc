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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mcner/embeddings.h"

namespace mcner {
namespace {

std::vector<Sentence> toy_corpus() {
  std::istringstream in("Астана астана 100010 B-LOC\nқаласы қала 101000 O\nүлкен үлкен 000000 O\n\n");
  return parse_corpus(in);
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("mcner_emb_" + name);
  std::ofstream(path) << contents;
  return path;
}

TEST(EmbeddingTable, LookupChecksRange) {
  EmbeddingTable t(3, 4);
  EXPECT_NO_THROW(t.lookup(3));
  EXPECT_THROW(t.lookup(4), Error);
  EXPECT_THROW(t.lookup(-1), Error);
}

TEST(Window, InputLayout) {
  WindowConfig c;
  c.word_dim = 4;
  c.root_dim = 3;
  c.tag_dim = 2;
  EXPECT_EQ(c.input_size(), 12);
  c.use_root = true;
  c.use_tag_embedding = true;
  c.use_features = true;
  EXPECT_EQ(c.root_offset(), 12);
  EXPECT_EQ(c.tag_offset(), 15);
  EXPECT_EQ(c.feature_offset(), 17);
  EXPECT_EQ(c.input_size(), 47);
  c.window = 4;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Window, PadsAtBoundaries) {
  const auto corpus = toy_corpus();
  const auto vocab = build_vocabulary(corpus);
  const auto enc = encode(corpus[0], vocab);
  EXPECT_EQ(window_word(enc, 0, -1), Dictionary::kStart);
  EXPECT_EQ(window_word(enc, 2, 1), Dictionary::kEnd);
  EXPECT_EQ(window_word(enc, 1, -1), vocab.word_id("астана"));
}

TEST(Window, BuildInputConcatenatesSlots) {
  const auto corpus = toy_corpus();
  const auto vocab = build_vocabulary(corpus);
  WindowConfig c;
  c.word_dim = c.root_dim = c.tag_dim = 3;
  c.use_root = c.use_tag_embedding = c.use_features = true;
  Rng rng(1);
  const auto tables = EmbeddingSet::create(vocab, c, rng);
  const auto enc = encode(corpus[0], vocab);
  const int prev = 1;
  const Vector x = build_input(enc, 0, prev, tables, c);
  ASSERT_EQ(x.size(), c.input_size());
  EXPECT_EQ(x.segment(0, 3), tables.words.lookup(Dictionary::kStart));
  EXPECT_EQ(x.segment(3, 3), tables.words.lookup(enc[0].word));
  EXPECT_EQ(x.segment(6, 3), tables.words.lookup(enc[1].word));
  EXPECT_EQ(x.segment(c.root_offset(), 3), tables.roots.lookup(enc[0].root));
  EXPECT_EQ(x.segment(c.tag_offset(), 3), tables.tags.lookup(prev));
  // Padded slot carries no features, the centre slot carries the token's.
  EXPECT_TRUE(x.segment(c.feature_offset(), 10).isZero());
  EXPECT_EQ(x[c.feature_offset() + 10 + kFeatSentStart], 1.0);
  EXPECT_EQ(x[c.feature_offset() + 10 + kFeatProperNoun], 1.0);
}

// Property: routing is the adjoint of the lookup, so <g, x> equals the sum of
// <routed column, table column> plus the constant feature part.
TEST(Window, RoutingIsAdjointOfLookup) {
  const auto corpus = toy_corpus();
  const auto vocab = build_vocabulary(corpus);
  WindowConfig c;
  c.word_dim = c.root_dim = c.tag_dim = 4;
  c.use_root = c.use_tag_embedding = c.use_features = true;
  Rng rng(2);
  const auto tables = EmbeddingSet::create(vocab, c, rng);
  const auto enc = encode(corpus[0], vocab);
  for (int pos = 0; pos < 3; ++pos) {
    const Vector x = build_input(enc, pos, start_tag(vocab), tables, c);
    Vector g(x.size());
    rng.fill_uniform(g, 1.0);
    EmbeddingGradients grads;
    route_input_gradient(g, enc, pos, start_tag(vocab), c, grads);
    double lhs = g.head(c.feature_offset()).dot(x.head(c.feature_offset()));
    double rhs = 0.0;
    for (const auto& [id, v] : grads.words) rhs += v.dot(tables.words.lookup(id));
    for (const auto& [id, v] : grads.roots) rhs += v.dot(tables.roots.lookup(id));
    for (const auto& [id, v] : grads.tags) rhs += v.dot(tables.tags.lookup(id));
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}

TEST(Tables, ShapesFollowVocabulary) {
  const auto corpus = toy_corpus();
  const auto vocab = build_vocabulary(corpus);
  WindowConfig c;
  Rng rng(0);
  auto t = EmbeddingSet::create(vocab, c, rng);
  EXPECT_EQ(t.words.size(), vocab.words.size());
  EXPECT_TRUE(t.roots.empty());
  EXPECT_TRUE(t.tags.empty());
  c.use_tag_embedding = true;
  EXPECT_EQ(EmbeddingSet::create(vocab, c, rng).tags.size(), vocab.tags.size() + 1);
  c.use_tag_embedding = false;
  EXPECT_LE(t.words.matrix().cwiseAbs().maxCoeff(), kEmbeddingInitScale);
  EXPECT_NO_THROW(t.check(vocab, c));
  c.use_root = true;
  EXPECT_THROW(t.check(vocab, c), Error);
}

TEST(Pretrained, OverwritesOnlyCoveredColumns) {
  const auto corpus = toy_corpus();
  const auto vocab = build_vocabulary(corpus);
  EmbeddingTable t(2, vocab.words.size());
  t.matrix().setConstant(7.0);
  const Matrix before = t.matrix();
  const auto path = temp_file("cover.txt", "3 2\nастана 1 2\nмүлде 5 5\n<UNK> 9 9\n");
  const auto c = load_pretrained(path, t, vocab.words, true);
  EXPECT_EQ(c.found, 1);
  EXPECT_EQ(c.missing, vocab.words.size() - Dictionary::kReserved - 1);
  EXPECT_EQ(c.ignored, 2);
  for (int id = 0; id < t.size(); ++id) {
    if (id == vocab.word_id("астана")) {
      EXPECT_EQ(t.lookup(id), (Vector(2) << 1, 2).finished());
    } else {
      EXPECT_EQ(t.lookup(id), before.col(id));
    }
  }
}

TEST(Pretrained, RejectsBadFilesAtomically) {
  const auto corpus = toy_corpus();
  const auto vocab = build_vocabulary(corpus);
  EmbeddingTable t(2, vocab.words.size());
  const Matrix before = t.matrix();
  EXPECT_THROW(load_pretrained(temp_file("dim.txt", "1 3\nастана 1 2 3\n"), t, vocab.words, true), Error);
  EXPECT_THROW(load_pretrained(temp_file("short.txt", "2 2\nастана 1 2\nқаласы 1\n"), t, vocab.words, true),
               ParseError);
  EXPECT_THROW(load_pretrained(temp_file("nan.txt", "1 2\nастана 1 x\n"), t, vocab.words, true), ParseError);
  EXPECT_EQ(t.matrix(), before);
}

TEST(Pretrained, SaveLoadRoundTripIsExact) {
  const auto corpus = toy_corpus();
  const auto vocab = build_vocabulary(corpus);
  EmbeddingTable t(3, vocab.words.size());
  Rng rng(5);
  rng.fill_uniform(t.matrix(), 1.0);
  const auto path = std::filesystem::temp_directory_path() / "mcner_emb_roundtrip.txt";
  save_pretrained(path, t, vocab.words);
  EmbeddingTable u(3, vocab.words.size());
  load_pretrained(path, u, vocab.words, false);
  for (int id = Dictionary::kReserved; id < t.size(); ++id) EXPECT_EQ(u.lookup(id), t.lookup(id));
}

}  // namespace
}  // namespace mcner
