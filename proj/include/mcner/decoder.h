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

#ifndef MCNER_DECODER_H_
#define MCNER_DECODER_H_

#include <span>
#include <vector>

#include "mcner/common.h"

namespace mcner {

// (|T| + 1) x |T| scores: row 0 holds the initial scores, row p + 1 the
// scores of moving from tag p.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(int tag_count) : scores_(Matrix::Zero(tag_count + 1, tag_count)) {}
  explicit TransitionMatrix(Matrix scores);

  int tag_count() const { return static_cast<int>(scores_.cols()); }
  double initial(int tag) const { return scores_(0, tag); }
  double transition(int from, int to) const { return scores_(from + 1, to); }

  Matrix& scores() { return scores_; }
  const Matrix& scores() const { return scores_; }

  bool operator==(const TransitionMatrix& o) const { return scores_ == o.scores_; }

 private:
  Matrix scores_;
};

// Network scores of one sentence.
//   unary:    one |T| vector per position, f(t | i); combined with transitions.
//   pairwise: one (|T| + 1) x |T| matrix per position, f(t | i, t_{i-1}), laid
//             out like TransitionMatrix (row 0: start, row p + 1: previous tag
//             p). Only row 0 is read at position 0, only rows 1.. afterwards.
class TagLattice {
 public:
  static TagLattice unary(std::vector<Vector> emissions);
  static TagLattice pairwise(std::vector<Matrix> emissions);

  bool is_pairwise() const { return pairwise_; }
  int length() const { return static_cast<int>(pairwise_ ? pair_.size() : unary_.size()); }
  int tag_count() const { return tag_count_; }

  const Vector& unary_at(int i) const { return unary_[i]; }
  const Matrix& pairwise_at(int i) const { return pair_[i]; }

  // Score of tag `tag` at position i given the previous-tag row (0 for the
  // start, p + 1 for tag p), including the transition for unary lattices.
  double potential(int i, int prev_row, int tag, const TransitionMatrix* transitions) const {
    if (pairwise_) return pair_[i](prev_row, tag);
    return transitions->scores()(prev_row, tag) + unary_[i][tag];
  }

  // Throws Error unless transitions are given exactly for unary lattices and
  // their size matches.
  void check(const TransitionMatrix* transitions) const;

 private:
  TagLattice() = default;
  bool pairwise_ = false;
  int tag_count_ = 0;
  std::vector<Vector> unary_;
  std::vector<Matrix> pair_;
};

double sentence_score(const TagLattice& lattice, std::span<const int> tags,
                      const TransitionMatrix* transitions);

struct ViterbiResult {
  std::vector<int> path;
  double score = 0.0;
};

// Ties go to the lowest tag index at the latest differing position.
ViterbiResult viterbi(const TagLattice& lattice, const TransitionMatrix* transitions);

double log_partition(const TagLattice& lattice, const TransitionMatrix* transitions);

struct Marginals {
  double log_partition = 0.0;
  std::vector<Vector> node;  // P(t_i = t)
  // P(row, t_i = t), same layout as the pairwise lattice: row 0 is the start
  // at position 0; rows p + 1 hold P(t_{i-1} = p, t_i = t) for i > 0.
  std::vector<Matrix> edge;
};

Marginals forward_backward(const TagLattice& lattice, const TransitionMatrix* transitions);

double log_sum_exp(const Eigen::Ref<const Vector>& v);

}  // namespace mcner

#endif  // MCNER_DECODER_H_
