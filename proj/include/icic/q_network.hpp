// Copyright 2026 The icic Authors. All rights reserved.
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

#ifndef ICIC_Q_NETWORK_HPP_
#define ICIC_Q_NETWORK_HPP_

#include <Eigen/Dense>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace icic {

// Parameter-shaped gradient: one weight matrix (out x in) and one bias
// vector per layer.
struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  // Same ordering as QNetwork::parameters().
  std::vector<double> flatten() const;
};

// Fully-connected action-value network. Hidden layers use ReLU, the output
// layer is linear. Parameters are doubles.
class QNetwork {
 public:
  QNetwork() = default;
  // All weights and biases start at zero. Needs at least two sizes.
  explicit QNetwork(std::vector<int> layer_sizes);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  int num_layers() const { return static_cast<int>(weights_.size()); }
  std::size_t parameter_count() const;

  // U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
  void init_fan_in_uniform(std::mt19937_64& rng);

  Eigen::VectorXd forward(std::span<const double> input) const;
  // One sample per column.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;

  // Mean over columns j of (targets[j] - Q(inputs.col(j), actions[j]))^2 and
  // its exact gradient. Only the chosen output of each sample contributes.
  double loss_and_gradient(const Eigen::MatrixXd& inputs,
                           std::span<const int> actions,
                           std::span<const double> targets,
                           Gradients& grad) const;

  // theta <- theta - lr * grad
  void apply_gradient(const Gradients& grad, double learning_rate);

  // Layer by layer: weights row-major, then biases.
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> values);
  bool all_finite() const;

  Eigen::MatrixXd& weight(int layer) { return weights_[layer]; }
  Eigen::VectorXd& bias(int layer) { return biases_[layer]; }
  const Eigen::MatrixXd& weight(int layer) const { return weights_[layer]; }
  const Eigen::VectorXd& bias(int layer) const { return biases_[layer]; }

  // Text checkpoint: a header line, the layer sizes, then per layer the
  // weight matrix rows and the bias vector, values in round-trip precision.
  void save(std::ostream& out) const;
  // Throws std::runtime_error on malformed input.
  static QNetwork load(std::istream& in);

  friend bool operator==(const QNetwork& a, const QNetwork& b);

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

}  // namespace icic

#endif  // ICIC_Q_NETWORK_HPP_
