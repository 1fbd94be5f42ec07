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

#include "mcner/decoder.h"

#include <cmath>
#include <limits>
#include <string>

namespace mcner {

TransitionMatrix::TransitionMatrix(Matrix scores) : scores_(std::move(scores)) {
  if (scores_.rows() != scores_.cols() + 1) {
    throw Error("transition matrix must be (|T|+1) x |T|");
  }
}

TagLattice TagLattice::unary(std::vector<Vector> emissions) {
  if (emissions.empty()) throw Error("lattice must have at least one position");
  TagLattice lattice;
  lattice.tag_count_ = static_cast<int>(emissions.front().size());
  for (const auto& e : emissions) {
    if (e.size() != lattice.tag_count_) throw Error("ragged unary lattice");
    if (!e.allFinite()) throw Error("non-finite lattice score");
  }
  lattice.unary_ = std::move(emissions);
  return lattice;
}

TagLattice TagLattice::pairwise(std::vector<Matrix> emissions) {
  if (emissions.empty()) throw Error("lattice must have at least one position");
  TagLattice lattice;
  lattice.pairwise_ = true;
  lattice.tag_count_ = static_cast<int>(emissions.front().cols());
  for (const auto& e : emissions) {
    if (e.cols() != lattice.tag_count_ || e.rows() != lattice.tag_count_ + 1) {
      throw Error("pairwise lattice entries must be (|T|+1) x |T|");
    }
    if (!e.allFinite()) throw Error("non-finite lattice score");
  }
  lattice.pair_ = std::move(emissions);
  return lattice;
}

void TagLattice::check(const TransitionMatrix* transitions) const {
  if (pairwise_) {
    if (transitions) throw Error("pairwise lattices take no transition matrix");
    return;
  }
  if (!transitions) throw Error("unary lattices need a transition matrix");
  if (transitions->tag_count() != tag_count_) {
    throw Error("transition matrix has " + std::to_string(transitions->tag_count()) +
                " tags, lattice has " + std::to_string(tag_count_));
  }
}

double log_sum_exp(const Eigen::Ref<const Vector>& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

double sentence_score(const TagLattice& lattice, std::span<const int> tags,
                      const TransitionMatrix* transitions) {
  lattice.check(transitions);
  if (static_cast<int>(tags.size()) != lattice.length()) {
    throw Error("tag sequence length " + std::to_string(tags.size()) + " differs from lattice length " +
                std::to_string(lattice.length()));
  }
  double total = 0.0;
  int prev_row = 0;
  for (int i = 0; i < lattice.length(); ++i) {
    const int t = tags[i];
    if (t < 0 || t >= lattice.tag_count()) throw Error("tag id out of range");
    total += lattice.potential(i, prev_row, t, transitions);
    prev_row = t + 1;
  }
  return total;
}

ViterbiResult viterbi(const TagLattice& lattice, const TransitionMatrix* transitions) {
  lattice.check(transitions);
  const int n = lattice.length();
  const int k = lattice.tag_count();
  Matrix delta(k, n);
  Eigen::MatrixXi back(k, n);
  for (int t = 0; t < k; ++t) delta(t, 0) = lattice.potential(0, 0, t, transitions);
  for (int i = 1; i < n; ++i) {
    for (int t = 0; t < k; ++t) {
      double best = -std::numeric_limits<double>::infinity();
      int arg = 0;
      for (int p = 0; p < k; ++p) {
        const double s = delta(p, i - 1) + lattice.potential(i, p + 1, t, transitions);
        if (s > best) {
          best = s;
          arg = p;
        }
      }
      delta(t, i) = best;
      back(t, i) = arg;
    }
  }
  ViterbiResult result;
  result.path.resize(n);
  int best_tag = 0;
  for (int t = 1; t < k; ++t) {
    if (delta(t, n - 1) > delta(best_tag, n - 1)) best_tag = t;
  }
  result.score = delta(best_tag, n - 1);
  for (int i = n - 1; i >= 0; --i) {
    result.path[i] = best_tag;
    if (i > 0) best_tag = back(best_tag, i);
  }
  return result;
}

namespace {

// alpha(t, i): log-sum of all prefixes ending in tag t at position i.
Matrix forward_scores(const TagLattice& lattice, const TransitionMatrix* transitions) {
  const int n = lattice.length();
  const int k = lattice.tag_count();
  Matrix alpha(k, n);
  Vector terms(k);
  for (int t = 0; t < k; ++t) alpha(t, 0) = lattice.potential(0, 0, t, transitions);
  for (int i = 1; i < n; ++i) {
    for (int t = 0; t < k; ++t) {
      for (int p = 0; p < k; ++p) terms[p] = alpha(p, i - 1) + lattice.potential(i, p + 1, t, transitions);
      alpha(t, i) = log_sum_exp(terms);
    }
  }
  return alpha;
}

}  // namespace

double log_partition(const TagLattice& lattice, const TransitionMatrix* transitions) {
  lattice.check(transitions);
  const Matrix alpha = forward_scores(lattice, transitions);
  return log_sum_exp(alpha.col(lattice.length() - 1));
}

Marginals forward_backward(const TagLattice& lattice, const TransitionMatrix* transitions) {
  lattice.check(transitions);
  const int n = lattice.length();
  const int k = lattice.tag_count();
  const Matrix alpha = forward_scores(lattice, transitions);
  Matrix beta = Matrix::Zero(k, n);
  Vector terms(k);
  for (int i = n - 2; i >= 0; --i) {
    for (int p = 0; p < k; ++p) {
      for (int t = 0; t < k; ++t) terms[t] = lattice.potential(i + 1, p + 1, t, transitions) + beta(t, i + 1);
      beta(p, i) = log_sum_exp(terms);
    }
  }

  Marginals m;
  m.log_partition = log_sum_exp(alpha.col(n - 1));
  m.node.resize(n);
  m.edge.assign(n, Matrix::Zero(k + 1, k));
  for (int i = 0; i < n; ++i) {
    m.node[i] = (alpha.col(i) + beta.col(i)).array() - m.log_partition;
    m.node[i] = m.node[i].array().exp();
  }
  m.edge[0].row(0) = m.node[0].transpose();
  for (int i = 1; i < n; ++i) {
    for (int p = 0; p < k; ++p) {
      for (int t = 0; t < k; ++t) {
        m.edge[i](p + 1, t) = std::exp(alpha(p, i - 1) + lattice.potential(i, p + 1, t, transitions) +
                                       beta(t, i) - m.log_partition);
      }
    }
  }
  return m;
}

}  // namespace mcner
