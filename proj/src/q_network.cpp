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

#include "icic/q_network.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace icic {

namespace {

constexpr const char* kCheckpointMagic = "icic-qnetwork-v1";

void append_row_major(const Eigen::MatrixXd& m, std::vector<double>& out) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
}

}  // namespace

std::vector<double> Gradients::flatten() const {
  std::vector<double> out;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    append_row_major(weights[l], out);
    for (Eigen::Index i = 0; i < biases[l].size(); ++i) out.push_back(biases[l](i));
  }
  return out;
}

QNetwork::QNetwork(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("need at least two layer sizes");
  for (int s : sizes_) {
    if (s < 1) throw std::invalid_argument("layer sizes must be positive");
  }
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    weights_.push_back(Eigen::MatrixXd::Zero(sizes_[l + 1], sizes_[l]));
    biases_.push_back(Eigen::VectorXd::Zero(sizes_[l + 1]));
  }
}

std::size_t QNetwork::parameter_count() const {
  std::size_t count = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    count += static_cast<std::size_t>(weights_[l].size() + biases_[l].size());
  }
  return count;
}

void QNetwork::init_fan_in_uniform(std::mt19937_64& rng) {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(weights_[l].cols()));
    std::uniform_real_distribution<double> dist(-bound, bound);
    // Fill row-major so the draw order matches the checkpoint layout.
    for (Eigen::Index r = 0; r < weights_[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights_[l].cols(); ++c) {
        weights_[l](r, c) = dist(rng);
      }
    }
    for (Eigen::Index i = 0; i < biases_[l].size(); ++i) biases_[l](i) = dist(rng);
  }
}

Eigen::VectorXd QNetwork::forward(std::span<const double> input) const {
  if (static_cast<int>(input.size()) != input_size()) {
    throw std::invalid_argument("input size does not match network");
  }
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(
      input.data(), static_cast<Eigen::Index>(input.size()));
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    a = weights_[l] * a + biases_[l];
    if (l + 1 < weights_.size()) a = a.cwiseMax(0.0);
  }
  return a;
}

Eigen::MatrixXd QNetwork::forward_batch(const Eigen::MatrixXd& inputs) const {
  if (inputs.rows() != input_size()) {
    throw std::invalid_argument("input size does not match network");
  }
  Eigen::MatrixXd a = inputs;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    a = (weights_[l] * a).colwise() + biases_[l];
    if (l + 1 < weights_.size()) a = a.cwiseMax(0.0);
  }
  return a;
}

double QNetwork::loss_and_gradient(const Eigen::MatrixXd& inputs,
                                   std::span<const int> actions,
                                   std::span<const double> targets,
                                   Gradients& grad) const {
  const Eigen::Index batch = inputs.cols();
  if (batch == 0 || static_cast<Eigen::Index>(actions.size()) != batch ||
      static_cast<Eigen::Index>(targets.size()) != batch) {
    throw std::invalid_argument("batch shape mismatch");
  }
  if (inputs.rows() != input_size()) {
    throw std::invalid_argument("input size does not match network");
  }

  const std::size_t depth = weights_.size();
  // activations[0] is the input; pre[l] is layer l's pre-activation.
  std::vector<Eigen::MatrixXd> activations(depth + 1);
  std::vector<Eigen::MatrixXd> pre(depth);
  activations[0] = inputs;
  for (std::size_t l = 0; l < depth; ++l) {
    pre[l] = (weights_[l] * activations[l]).colwise() + biases_[l];
    activations[l + 1] = (l + 1 < depth) ? pre[l].cwiseMax(0.0) : pre[l];
  }

  const Eigen::MatrixXd& q = activations[depth];
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(q.rows(), batch);
  double loss = 0.0;
  for (Eigen::Index j = 0; j < batch; ++j) {
    const int a = actions[static_cast<std::size_t>(j)];
    if (a < 0 || a >= output_size()) throw std::out_of_range("action out of range");
    const double err = targets[static_cast<std::size_t>(j)] - q(a, j);
    loss += err * err;
    delta(a, j) = -2.0 * err / static_cast<double>(batch);
  }
  loss /= static_cast<double>(batch);

  grad.weights.resize(depth);
  grad.biases.resize(depth);
  for (std::size_t l = depth; l-- > 0;) {
    grad.weights[l].noalias() = delta * activations[l].transpose();
    grad.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd upstream = weights_[l].transpose() * delta;
      delta = upstream.cwiseProduct(
          (pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return loss;
}

void QNetwork::apply_gradient(const Gradients& grad, double learning_rate) {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    weights_[l] -= learning_rate * grad.weights[l];
    biases_[l] -= learning_rate * grad.biases[l];
  }
}

std::vector<double> QNetwork::parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    append_row_major(weights_[l], out);
    for (Eigen::Index i = 0; i < biases_[l].size(); ++i) out.push_back(biases_[l](i));
  }
  return out;
}

void QNetwork::set_parameters(std::span<const double> values) {
  if (values.size() != parameter_count()) {
    throw std::invalid_argument("parameter count mismatch");
  }
  std::size_t pos = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    for (Eigen::Index r = 0; r < weights_[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights_[l].cols(); ++c) {
        weights_[l](r, c) = values[pos++];
      }
    }
    for (Eigen::Index i = 0; i < biases_[l].size(); ++i) biases_[l](i) = values[pos++];
  }
}

bool QNetwork::all_finite() const {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    if (!weights_[l].allFinite() || !biases_[l].allFinite()) return false;
  }
  return true;
}

void QNetwork::save(std::ostream& out) const {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << kCheckpointMagic << '\n' << sizes_.size();
  for (int s : sizes_) out << ' ' << s;
  out << '\n';
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    for (Eigen::Index r = 0; r < weights_[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights_[l].cols(); ++c) {
        out << (c ? " " : "") << weights_[l](r, c);
      }
      out << '\n';
    }
    for (Eigen::Index i = 0; i < biases_[l].size(); ++i) {
      out << (i ? " " : "") << biases_[l](i);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

QNetwork QNetwork::load(std::istream& in) {
  std::string magic;
  if (!(in >> magic) || magic != kCheckpointMagic) {
    throw std::runtime_error("not a Q-network checkpoint");
  }
  std::size_t count = 0;
  if (!(in >> count) || count < 2 || count > 64) {
    throw std::runtime_error("bad layer count in checkpoint");
  }
  std::vector<int> sizes(count);
  for (int& s : sizes) {
    if (!(in >> s) || s < 1) throw std::runtime_error("bad layer size in checkpoint");
  }
  QNetwork net(sizes);
  std::vector<double> values(net.parameter_count());
  for (double& v : values) {
    if (!(in >> v)) throw std::runtime_error("truncated checkpoint");
  }
  net.set_parameters(values);
  return net;
}

bool operator==(const QNetwork& a, const QNetwork& b) {
  return a.sizes_ == b.sizes_ && a.parameters() == b.parameters();
}

}  // namespace icic
