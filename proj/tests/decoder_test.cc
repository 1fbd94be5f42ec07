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

#include "mcner/decoder.h"
#include "oracles.h"

namespace mcner {
namespace {

using testing::brute_force;
using testing::brute_force_node_marginals;
using testing::random_lattice;
using testing::tied_lattice;

TransitionMatrix random_transitions(Rng& rng, int tags) {
  TransitionMatrix a(tags);
  rng.fill_uniform(a.scores(), 2.0);
  return a;
}

class DecoderOracle : public ::testing::TestWithParam<bool> {};

TEST_P(DecoderOracle, ViterbiAndPartitionMatchEnumeration) {
  const bool pairwise = GetParam();
  Rng rng(pairwise ? 31 : 32);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(5));
    const int tags = 2 + static_cast<int>(rng.below(4));
    const auto lattice = random_lattice(rng, n, tags, pairwise);
    const auto a = random_transitions(rng, tags);
    const TransitionMatrix* t = pairwise ? nullptr : &a;
    const auto bf = brute_force(lattice, t);
    const auto v = viterbi(lattice, t);
    EXPECT_EQ(v.path, bf.path);
    EXPECT_EQ(v.score, bf.score);
    EXPECT_EQ(sentence_score(lattice, v.path, t), v.score);
    EXPECT_NEAR(log_partition(lattice, t), bf.log_partition, 1e-9);
  }
}

TEST_P(DecoderOracle, TiesGoToTheLowestLatestTag) {
  const bool pairwise = GetParam();
  Rng rng(pairwise ? 33 : 34);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(5));
    const int tags = 2 + static_cast<int>(rng.below(3));
    const auto lattice = tied_lattice(rng, n, tags, pairwise);
    TransitionMatrix a(tags);
    a.scores() = a.scores().unaryExpr([&](double) { return static_cast<double>(rng.below(2)); });
    const TransitionMatrix* t = pairwise ? nullptr : &a;
    EXPECT_EQ(viterbi(lattice, t).path, brute_force(lattice, t).path);
  }
}

TEST_P(DecoderOracle, NodeMarginalsMatchEnumeration) {
  const bool pairwise = GetParam();
  Rng rng(pairwise ? 35 : 36);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(4));
    const int tags = 2 + static_cast<int>(rng.below(3));
    const auto lattice = random_lattice(rng, n, tags, pairwise);
    const auto a = random_transitions(rng, tags);
    const TransitionMatrix* t = pairwise ? nullptr : &a;
    const auto m = forward_backward(lattice, t);
    const auto expected = brute_force_node_marginals(lattice, t);
    for (int i = 0; i < n; ++i) {
      EXPECT_LT((m.node[i] - expected[i]).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_NEAR(m.node[i].sum(), 1.0, 1e-12);
      // Edge marginals sum to the node marginal of the later position.
      const Vector col = i == 0 ? Vector(m.edge[0].row(0).transpose())
                                : Vector(m.edge[i].bottomRows(tags).colwise().sum().transpose());
      EXPECT_LT((col - m.node[i]).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Variants, DecoderOracle, ::testing::Values(false, true),
                         [](const auto& info) { return info.param ? "Pairwise" : "Unary"; });

TEST(Decoder, HandComputedExample) {
  // Two tags, two positions. Path scores:
  //   00: 0 + 1 + 0 + 0 = 1, 01: 0 + 1 + 3 + 2 = 6,
  //   10: 0 + 0 + 1 + 0 = 1, 11: 0 + 0 + 0 + 2 = 2.
  TransitionMatrix a(2);
  a.scores() << 0, 0, 0, 3, 1, 0;
  auto lattice = TagLattice::unary({(Vector(2) << 1, 0).finished(), (Vector(2) << 0, 2).finished()});
  const auto v = viterbi(lattice, &a);
  EXPECT_EQ(v.path, (std::vector<int>{0, 1}));
  EXPECT_EQ(v.score, 6.0);
  const double z = std::log(std::exp(1.0) + std::exp(6.0) + std::exp(1.0) + std::exp(2.0));
  EXPECT_NEAR(log_partition(lattice, &a), z, 1e-14);
}

TEST(Decoder, RejectsMismatchedTransitions) {
  auto unary = TagLattice::unary({Vector::Zero(3)});
  TransitionMatrix wrong(2);
  EXPECT_THROW(viterbi(unary, nullptr), Error);
  EXPECT_THROW(viterbi(unary, &wrong), Error);
  auto pair = TagLattice::pairwise({Matrix::Zero(4, 3)});
  TransitionMatrix right(3);
  EXPECT_THROW(viterbi(pair, &right), Error);
}

TEST(Decoder, LogSumExpIsStable) {
  Vector v(3);
  v << 1000.0, 1000.0, -1e300;
  EXPECT_NEAR(log_sum_exp(v), 1000.0 + std::log(2.0), 1e-12);
}

// Property: adding a constant to every initial score shifts every path score
// and log Z by that constant, leaving the argmax unchanged.
TEST(Decoder, InitialShiftInvariance) {
  Rng rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    const auto lattice = random_lattice(rng, 4, 5, false);
    auto a = random_transitions(rng, 5);
    const auto before = viterbi(lattice, &a);
    const double z = log_partition(lattice, &a);
    a.scores().row(0).array() += 2.5;
    EXPECT_EQ(viterbi(lattice, &a).path, before.path);
    EXPECT_NEAR(log_partition(lattice, &a), z + 2.5, 1e-12);
  }
}

}  // namespace
}  // namespace mcner
