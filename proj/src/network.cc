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

#include "mcner/network.h"

#include <cmath>

namespace mcner {
namespace {

void check_input(const Vector& x, int expected, const char* what) {
  if (x.size() != expected) {
    throw Error(std::string(what) + ": input has " + std::to_string(x.size()) +
                " entries, expected " + std::to_string(expected));
  }
}

void glorot(Rng& rng, Matrix& m, int fan_in, int fan_out) {
  rng.fill_uniform(m, std::sqrt(6.0 / (fan_in + fan_out)));
}

// Backpropagates through a dense layer whose post-activation output is `out`.
Vector dense_backward(const DenseLayer& layer, const Vector& in, const Vector& out,
                      const Vector& upstream, Matrix& dweight, Matrix& dbias) {
  Vector dpre = upstream;
  if (layer.activation == Activation::kTanh) {
    dpre.array() *= 1.0 - out.array().square();
  }
  dweight.noalias() += dpre * in.transpose();
  dbias.col(0) += dpre;
  return layer.weight.transpose() * dpre;
}

}  // namespace

Vector DenseLayer::forward(const Vector& x) const {
  check_input(x, in(), "dense layer");
  Vector h = weight * x + bias;
  if (activation == Activation::kTanh) h = h.array().tanh();
  return h;
}

FactorizedTensorLayer::FactorizedTensorLayer(int in, int out, int factors)
    : factors_(factors),
      p_(Matrix::Zero(in, static_cast<Eigen::Index>(out) * factors)),
      q_(Matrix::Zero(static_cast<Eigen::Index>(out) * factors, in)),
      linear_(in, out, Activation::kTanh) {
  if (in < 1 || out < 1 || factors < 1) throw Error("tensor layer sizes must be >= 1");
}

std::size_t FactorizedTensorLayer::parameter_count() const {
  return static_cast<std::size_t>(p_.size() + q_.size() + linear_.weight.size() + linear_.bias.size());
}

Vector FactorizedTensorLayer::quadratic(const Vector& e, Vector* left, Vector* right) const {
  check_input(e, in(), "tensor layer");
  Vector a = p_.transpose() * e;
  Vector b = q_ * e;
  Vector quad(out());
  for (int i = 0; i < out(); ++i) {
    quad[i] = a.segment(static_cast<Eigen::Index>(i) * factors_, factors_)
                  .dot(b.segment(static_cast<Eigen::Index>(i) * factors_, factors_));
  }
  if (left) *left = std::move(a);
  if (right) *right = std::move(b);
  return quad;
}

Vector FactorizedTensorLayer::forward(const Vector& e) const {
  Vector pre = quadratic(e) + linear_.weight * e + linear_.bias;
  return pre.array().tanh();
}

void NetworkConfig::validate() const {
  if (tag_count < 1) throw Error("network needs at least one tag");
  if (architecture == Architecture::kPlain && hidden_size < 1) {
    throw Error("plain network needs hidden_size >= 1");
  }
  if (architecture == Architecture::kTensor && (tensor_size < 1 || factors < 1)) {
    throw Error("tensor network needs tensor_size >= 1 and factors >= 1");
  }
  if (extra_hidden < 0) throw Error("extra_hidden must be >= 0");
}

std::string to_string(Architecture a) { return a == Architecture::kPlain ? "plain" : "tensor"; }

Architecture parse_architecture(const std::string& name) {
  if (name == "plain") return Architecture::kPlain;
  if (name == "tensor") return Architecture::kTensor;
  throw Error("unknown architecture '" + name + "'");
}

Vector forward_plain(const Vector& input, const DenseLayer& hidden, const DenseLayer& output) {
  if (output.activation != Activation::kIdentity) throw Error("output layer must be linear");
  if (hidden.out() != output.in()) throw Error("hidden and output layer shapes do not chain");
  check_input(input, hidden.in(), "hidden layer");
  Vector h = hidden.weight * input + hidden.bias;
  h = h.array().tanh();
  return output.forward(h);
}

Vector forward_tensor(const Vector& input, const FactorizedTensorLayer& layer) {
  return layer.forward(input);
}

Network::Network(const NetworkConfig& config, int input_size)
    : config_(config), input_size_(input_size) {
  config.validate();
  if (input_size < 1) throw Error("network input size must be >= 1");
  int width = 0;
  if (config.architecture == Architecture::kPlain) {
    hidden_.emplace(input_size, config.hidden_size, Activation::kTanh);
    width = config.hidden_size;
  } else {
    tensor_.emplace(input_size, config.tensor_size, config.factors);
    width = config.tensor_size;
  }
  if (config.extra_hidden > 0) {
    extra_.emplace(width, config.extra_hidden, Activation::kTanh);
    width = config.extra_hidden;
  }
  output_ = DenseLayer(width, config.tag_count, Activation::kIdentity);
}

void Network::initialize(Rng& rng) {
  if (hidden_) glorot(rng, hidden_->weight, hidden_->in(), hidden_->out());
  if (tensor_) {
    const int h1 = tensor_->in();
    const int r = tensor_->factors();
    glorot(rng, tensor_->p(), h1, r);
    glorot(rng, tensor_->q(), r, h1);
    glorot(rng, tensor_->linear().weight, h1, tensor_->out());
  }
  if (extra_) glorot(rng, extra_->weight, extra_->in(), extra_->out());
  glorot(rng, output_.weight, output_.in(), output_.out());
}

Vector Network::forward(const Vector& input, Cache* cache) const {
  check_input(input, input_size_, "network");
  Vector h;
  Vector left, right;
  if (hidden_) {
    h = hidden_->forward(input);
  } else {
    Vector pre = tensor_->quadratic(input, cache ? &left : nullptr, cache ? &right : nullptr);
    pre += tensor_->linear().weight * input + tensor_->linear().bias;
    h = pre.array().tanh();
  }
  Vector h2;
  if (extra_) h2 = extra_->forward(h);
  Vector scores = output_.forward(extra_ ? h2 : h);
  if (cache) {
    cache->input = input;
    cache->left = std::move(left);
    cache->right = std::move(right);
    cache->activations.clear();
    cache->activations.push_back(std::move(h));
    if (extra_) cache->activations.push_back(std::move(h2));
    cache->valid = true;
  }
  return scores;
}

Vector Network::backward(const Cache& cache, const Vector& upstream, std::span<Matrix> grads) const {
  if (!cache.valid) throw Error("backward called without a cached forward pass");
  if (upstream.size() != config_.tag_count) throw Error("upstream gradient has the wrong size");
  if (grads.size() != tensor_count()) throw Error("gradient list does not match the network");

  std::size_t k = grads.size();
  const Vector& top = cache.activations.back();
  Vector d = dense_backward(output_, top, Vector(), upstream, grads[k - 2], grads[k - 1]);
  k -= 2;
  if (extra_) {
    d = dense_backward(*extra_, cache.activations[0], cache.activations[1], d, grads[k - 2],
                       grads[k - 1]);
    k -= 2;
  }
  const Vector& e = cache.input;
  const Vector& h = cache.activations[0];
  if (hidden_) return dense_backward(*hidden_, e, h, d, grads[0], grads[1]);

  // Tensor layer.
  const int r = tensor_->factors();
  Vector dpre = d.array() * (1.0 - h.array().square());
  Vector c(dpre.size() * r);  // dpre broadcast over each slice's factors
  for (Eigen::Index i = 0; i < dpre.size(); ++i) c.segment(i * r, r).setConstant(dpre[i]);
  const Vector cb = c.cwiseProduct(cache.right);
  const Vector ca = c.cwiseProduct(cache.left);
  grads[0].noalias() += e * cb.transpose();
  grads[1].noalias() += ca * e.transpose();
  grads[2].noalias() += dpre * e.transpose();
  grads[3].col(0) += dpre;
  Vector de = tensor_->p() * cb;
  de.noalias() += tensor_->q().transpose() * ca;
  de.noalias() += tensor_->linear().weight.transpose() * dpre;
  return de;
}

std::vector<ParamRef> Network::parameters() {
  std::vector<ParamRef> params;
  auto add_matrix = [&](const std::string& name, Matrix& m) {
    params.push_back({name, m.data(), m.rows(), m.cols()});
  };
  auto add_vector = [&](const std::string& name, Vector& v) {
    params.push_back({name, v.data(), v.size(), 1});
  };
  if (hidden_) {
    add_matrix("hidden.weight", hidden_->weight);
    add_vector("hidden.bias", hidden_->bias);
  } else {
    add_matrix("tensor.P", tensor_->p());
    add_matrix("tensor.Q", tensor_->q());
    add_matrix("tensor.weight", tensor_->linear().weight);
    add_vector("tensor.bias", tensor_->linear().bias);
  }
  if (extra_) {
    add_matrix("extra.weight", extra_->weight);
    add_vector("extra.bias", extra_->bias);
  }
  add_matrix("output.weight", output_.weight);
  add_vector("output.bias", output_.bias);
  return params;
}

std::vector<Matrix> Network::zero_gradients() const {
  std::vector<Matrix> grads;
  auto dense = [&](const DenseLayer& l) {
    grads.push_back(Matrix::Zero(l.out(), l.in()));
    grads.push_back(Matrix::Zero(l.out(), 1));
  };
  if (hidden_) {
    dense(*hidden_);
  } else {
    grads.push_back(Matrix::Zero(tensor_->p().rows(), tensor_->p().cols()));
    grads.push_back(Matrix::Zero(tensor_->q().rows(), tensor_->q().cols()));
    dense(tensor_->linear());
  }
  if (extra_) dense(*extra_);
  dense(output_);
  return grads;
}

}  // namespace mcner
