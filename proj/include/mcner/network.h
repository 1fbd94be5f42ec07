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

#ifndef MCNER_NETWORK_H_
#define MCNER_NETWORK_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcner/common.h"

namespace mcner {

// A named view of one trainable tensor, stored column-major.
struct ParamRef {
  std::string name;
  double* data = nullptr;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;

  Eigen::Map<Matrix> map() const { return Eigen::Map<Matrix>(data, rows, cols); }
  Eigen::Index size() const { return rows * cols; }
};

enum class Activation { kTanh, kIdentity };

struct DenseLayer {
  Matrix weight;  // out x in
  Vector bias;
  Activation activation = Activation::kTanh;

  DenseLayer() = default;
  DenseLayer(int in, int out, Activation act)
      : weight(Matrix::Zero(out, in)), bias(Vector::Zero(out)), activation(act) {}

  int in() const { return static_cast<int>(weight.cols()); }
  int out() const { return static_cast<int>(weight.rows()); }
  Vector forward(const Vector& x) const;

  bool operator==(const DenseLayer& o) const {
    return weight == o.weight && bias == o.bias && activation == o.activation;
  }
};

// h_i = tanh(e^T P[i] Q[i] e + (W e + b)_i) with rank-r slices P[i] (h1 x r)
// and Q[i] (r x h1). The slices are stored side by side so that every slice's
// two rank-r products come out of one matrix-vector product each.
class FactorizedTensorLayer {
 public:
  FactorizedTensorLayer() = default;
  FactorizedTensorLayer(int in, int out, int factors);

  int in() const { return linear_.in(); }
  int out() const { return linear_.out(); }
  int factors() const { return factors_; }

  auto slice_p(int i) const { return p_.middleCols(static_cast<Eigen::Index>(i) * factors_, factors_); }
  auto slice_q(int i) const { return q_.middleRows(static_cast<Eigen::Index>(i) * factors_, factors_); }
  auto slice_p(int i) { return p_.middleCols(static_cast<Eigen::Index>(i) * factors_, factors_); }
  auto slice_q(int i) { return q_.middleRows(static_cast<Eigen::Index>(i) * factors_, factors_); }

  Matrix& p() { return p_; }  // h1 x (h2 r)
  Matrix& q() { return q_; }  // (h2 r) x h1
  const Matrix& p() const { return p_; }
  const Matrix& q() const { return q_; }
  DenseLayer& linear() { return linear_; }
  const DenseLayer& linear() const { return linear_; }

  std::size_t parameter_count() const;

  Vector forward(const Vector& e) const;
  // Quadratic term e^T P[i] Q[i] e for every slice; left/right receive P^T e
  // and Q e when non-null.
  Vector quadratic(const Vector& e, Vector* left = nullptr, Vector* right = nullptr) const;

  bool operator==(const FactorizedTensorLayer& o) const {
    return factors_ == o.factors_ && p_ == o.p_ && q_ == o.q_ && linear_ == o.linear_;
  }

 private:
  int factors_ = 0;
  Matrix p_;
  Matrix q_;
  DenseLayer linear_;
};

enum class Architecture { kPlain, kTensor };

struct NetworkConfig {
  Architecture architecture = Architecture::kPlain;
  int hidden_size = 300;
  int tensor_size = 50;
  int factors = 3;
  // Optional tanh layer between the tensor (or hidden) layer and the output.
  int extra_hidden = 0;
  int tag_count = 0;

  void validate() const;
  bool operator==(const NetworkConfig&) const = default;
};

std::string to_string(Architecture a);
Architecture parse_architecture(const std::string& name);

// output(tanh(hidden(input))); output must be an identity layer.
Vector forward_plain(const Vector& input, const DenseLayer& hidden, const DenseLayer& output);
Vector forward_tensor(const Vector& input, const FactorizedTensorLayer& layer);

// Scoring network: first layer (dense or factorized tensor), optional extra
// dense layer, linear output of one score per tag.
class Network {
 public:
  struct Cache {
    Vector input;
    Vector left;                      // P^T e (tensor only)
    Vector right;                     // Q e (tensor only)
    std::vector<Vector> activations;  // post-tanh output of each hidden layer
    bool valid = false;
  };

  Network() = default;
  Network(const NetworkConfig& config, int input_size);

  // Glorot-uniform weights, zero biases.
  void initialize(Rng& rng);

  const NetworkConfig& config() const { return config_; }
  int input_size() const { return input_size_; }

  Vector forward(const Vector& input, Cache* cache = nullptr) const;

  // Adds d(loss)/d(param) into grads (aligned with parameters()) and returns
  // d(loss)/d(input). Throws Error when the cache holds no forward pass.
  Vector backward(const Cache& cache, const Vector& upstream, std::span<Matrix> grads) const;

  std::vector<ParamRef> parameters();
  std::vector<Matrix> zero_gradients() const;
  std::size_t tensor_count() const { return (hidden_ ? 2 : 4) + (extra_ ? 2 : 0) + 2; }

  DenseLayer* hidden() { return hidden_ ? &*hidden_ : nullptr; }
  FactorizedTensorLayer* tensor() { return tensor_ ? &*tensor_ : nullptr; }
  DenseLayer* extra() { return extra_ ? &*extra_ : nullptr; }
  DenseLayer& output() { return output_; }
  const DenseLayer& output() const { return output_; }

  bool operator==(const Network& o) const = default;

 private:
  NetworkConfig config_;
  int input_size_ = 0;
  std::optional<DenseLayer> hidden_;
  std::optional<FactorizedTensorLayer> tensor_;
  std::optional<DenseLayer> extra_;
  DenseLayer output_;
};

}  // namespace mcner

#endif  // MCNER_NETWORK_H_
