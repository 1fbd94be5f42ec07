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

#include <cmath>
#include <set>

#include "conll_fixtures.h"
#include "mcner/evaluator.h"

namespace mcner {
namespace {

double round2(double x) { return std::round(x * 100.0) / 100.0; }

TEST(Chunks, ConllevalStartRules) {
  const std::vector<std::string> tags{"I-PER", "I-PER", "B-PER", "I-LOC", "O", "B-ORG", "I-ORG"};
  const auto chunks = extract_chunks(tags);
  const std::vector<ChunkSpan> expected{{"PER", 0, 2}, {"PER", 2, 3}, {"LOC", 3, 4}, {"ORG", 5, 7}};
  EXPECT_EQ(chunks, expected);
  EXPECT_THROW(extract_chunks(std::vector<std::string>{"B-"}), Error);
  EXPECT_THROW(extract_chunks(std::vector<std::string>{"X"}), Error);
}

// Property: chunks -> IOB2 -> chunks is the identity for non-overlapping spans.
TEST(Chunks, Iob2RoundTrip) {
  Rng rng(51);
  const char* types[] = {"LOC", "ORG", "PER"};
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    std::vector<ChunkSpan> spans;
    std::size_t i = 0;
    while (i < n) {
      if (rng.bernoulli(0.4)) {
        const std::size_t len = 1 + rng.below(std::min<std::size_t>(3, n - i));
        spans.push_back({types[rng.below(3)], i, i + len});
        i += len;
      } else {
        ++i;
      }
    }
    const auto tags = chunks_to_iob2(spans, n);
    EXPECT_FALSE(validate_iob(tags));
    EXPECT_EQ(extract_chunks(tags), spans);
  }
}

class ConllFixtureTest : public ::testing::TestWithParam<testing::ConllFixture> {};

TEST_P(ConllFixtureTest, MatchesHandCount) {
  const auto& f = GetParam();
  const auto r = evaluate(f.gold, f.predicted);
  EXPECT_EQ(r.overall.gold, f.gold_chunks);
  EXPECT_EQ(r.overall.found, f.found_chunks);
  EXPECT_EQ(r.overall.correct, f.correct_chunks);
  EXPECT_EQ(round2(r.overall.precision()), f.precision);
  EXPECT_EQ(round2(r.overall.recall()), f.recall);
  EXPECT_EQ(round2(r.overall.f1()), f.f1);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, ConllFixtureTest, ::testing::ValuesIn(testing::conll_fixtures()),
                         [](const auto& info) {
                           std::string name;
                           for (char c : info.param.name) name += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
                           return name;
                         });

TEST(Evaluate, PerTypeRowsAndAccuracy) {
  const std::vector<std::vector<std::string>> gold{{"B-PER", "O", "B-LOC", "I-LOC"}};
  const std::vector<std::vector<std::string>> pred{{"B-PER", "O", "B-ORG", "I-ORG"}};
  const auto r = evaluate(gold, pred);
  EXPECT_EQ(r.per_type.size(), 3u);  // LOC, ORG, PER are always present
  EXPECT_EQ(r.per_type.at("PER").correct, 1u);
  EXPECT_EQ(r.per_type.at("LOC").gold, 1u);
  EXPECT_EQ(r.per_type.at("LOC").found, 0u);
  EXPECT_EQ(r.per_type.at("ORG").found, 1u);
  EXPECT_EQ(r.accuracy(), 50.0);
}

TEST(Evaluate, AlignmentErrorsNameTheSentence) {
  const std::vector<std::vector<std::string>> gold{{"O"}, {"O", "O"}};
  const std::vector<std::vector<std::string>> pred{{"O"}, {"O"}};
  try {
    evaluate(gold, pred);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("sentence 2"), std::string::npos);
  }
  EXPECT_THROW(evaluate(gold, {{"O"}}), Error);
}

TEST(Evaluate, ReportLayouts) {
  const auto f = testing::conll_fixtures().back();
  const auto r = evaluate(f.gold, f.predicted);
  const std::string text = format_conlleval(r);
  EXPECT_NE(text.find("processed 10 tokens with 5 phrases; found: 6 phrases; correct: 4."), std::string::npos);
  for (const char* row : {"LOC:", "ORG:", "PER:", "Overall:"}) EXPECT_NE(text.find(row), std::string::npos);
  EXPECT_NE(text.find("FB1:  72.73"), std::string::npos);
  const std::string table = format_table(r, '\t');
  EXPECT_EQ(table.substr(0, table.find('\n')), "type\tgold\tfound\tcorrect\tprecision\trecall\tf1");
  EXPECT_NE(table.find("Overall\t5\t6\t4\t66.67\t80.00\t72.73\n"), std::string::npos);
}

TEST(Neighbors, CosineRankingWithTies) {
  Dictionary d;
  for (const char* w : {"a", "b", "c", "d", "zero"}) d.add(w);
  EmbeddingTable t(2, d.size());
  t.column(d.lookup("a")) << 1, 0;
  t.column(d.lookup("b")) << 2, 0;    // same direction as a
  t.column(d.lookup("c")) << 1, 1;    // 45 degrees
  t.column(d.lookup("d")) << 3, 0;    // ties with b, higher id
  t.column(Dictionary::kStart) << 5, 0;  // reserved, never listed
  const auto r = nearest_neighbors(t, d, "a", 10);
  ASSERT_EQ(r.neighbors.size(), 3u);
  EXPECT_EQ(r.neighbors[0].token, "b");
  EXPECT_EQ(r.neighbors[1].token, "d");
  EXPECT_NEAR(r.neighbors[0].cosine, 1.0, 1e-15);
  EXPECT_EQ(r.neighbors[2].token, "c");
  EXPECT_NEAR(r.neighbors[2].cosine, std::sqrt(0.5), 1e-15);
  EXPECT_EQ(r.zero_norm_skipped, 1u);
  EXPECT_EQ(nearest_neighbors(t, d, "a", 1).neighbors.size(), 1u);
  EXPECT_THROW(nearest_neighbors(t, d, "missing", 3), OutOfVocabulary);
  EXPECT_THROW(nearest_neighbors(t, d, "<UNK>", 3), OutOfVocabulary);
  EXPECT_THROW(nearest_neighbors(t, d, "zero", 3), Error);
}

}  // namespace
}  // namespace mcner
