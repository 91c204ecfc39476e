// Copyright 2026 The paritylab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "paritylab/relu_nets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace paritylab {
namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string("non-finite ") + what);
  }
}

double sum_squares(std::span<const double> values) {
  double acc = 0.0;
  for (double v : values) acc += v * v;
  return acc;
}

}  // namespace

OneHiddenLayerNet::OneHiddenLayerNet(int width, int dim)
    : width_(width),
      dim_(dim),
      u_(width > 0 ? width : 0, 0.0),
      w_(width > 0 && dim > 0 ? static_cast<std::size_t>(width) * dim : 0, 0.0),
      b_(width > 0 ? width : 0, 0.0) {
  validate();
}

OneHiddenLayerNet::OneHiddenLayerNet(int dim, std::vector<double> u, std::vector<double> w_rows,
                                     std::vector<double> b)
    : width_(static_cast<int>(u.size())),
      dim_(dim),
      u_(std::move(u)),
      w_(std::move(w_rows)),
      b_(std::move(b)) {
  validate();
}

void OneHiddenLayerNet::validate() const {
  if (width_ < 0) throw std::invalid_argument("network width must be >= 0");
  if (dim_ < 1) throw std::invalid_argument("network input dimension must be >= 1");
  if (b_.size() != u_.size() || w_.size() != u_.size() * static_cast<std::size_t>(dim_)) {
    throw std::invalid_argument("network arrays have inconsistent shapes");
  }
  require_finite(u_, "output weight");
  require_finite(w_, "hidden weight");
  require_finite(b_, "bias");
}

std::vector<double> OneHiddenLayerNet::flatten() const {
  std::vector<double> theta;
  theta.reserve(parameter_count());
  theta.insert(theta.end(), u_.begin(), u_.end());
  theta.insert(theta.end(), w_.begin(), w_.end());
  theta.insert(theta.end(), b_.begin(), b_.end());
  return theta;
}

void OneHiddenLayerNet::assign_flat(std::span<const double> theta) {
  if (theta.size() != parameter_count()) {
    throw std::invalid_argument("flat parameter vector has wrong length");
  }
  auto it = theta.begin();
  std::copy(it, it + u_.size(), u_.begin());
  it += static_cast<std::ptrdiff_t>(u_.size());
  std::copy(it, it + w_.size(), w_.begin());
  it += static_cast<std::ptrdiff_t>(w_.size());
  std::copy(it, it + b_.size(), b_.begin());
}

OneHiddenLayerNet OneHiddenLayerNet::from_flat(int width, int dim,
                                               std::span<const double> theta) {
  OneHiddenLayerNet net(width, dim);
  net.assign_flat(theta);
  net.validate();
  return net;
}

SingleNeuron::SingleNeuron(int sign_value, std::vector<double> weights, double bias)
    : sign(sign_value), w(std::move(weights)), b(bias) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("neuron sign must be +1 or -1");
  if (w.empty()) throw std::invalid_argument("neuron input dimension must be >= 1");
  require_finite(w, "neuron weight");
  if (!std::isfinite(b)) throw std::invalid_argument("non-finite neuron bias");
}

std::vector<double> SingleNeuron::flatten() const {
  std::vector<double> theta(w);
  theta.push_back(b);
  return theta;
}

void SingleNeuron::assign_flat(std::span<const double> theta) {
  if (theta.size() != w.size() + 1) {
    throw std::invalid_argument("flat neuron vector has wrong length");
  }
  std::copy(theta.begin(), theta.end() - 1, w.begin());
  b = theta.back();
}

double forward(const OneHiddenLayerNet& net, const CubePoint& x) {
  if (x.dim() != net.dim()) throw std::invalid_argument("forward: dimension mismatch");
  double out = 0.0;
  for (int j = 0; j < net.width(); ++j) {
    const auto row = net.w_row(j);
    double z = net.b()[j];
    for (int i = 0; i < net.dim(); ++i) z += ((x.bits() >> i) & 1u) ? row[i] : -row[i];
    if (z > 0.0) out += net.u()[j] * z;
  }
  return out;
}

double forward(const SingleNeuron& neuron, const CubePoint& x) {
  if (x.dim() != neuron.dim()) throw std::invalid_argument("forward: dimension mismatch");
  double z = neuron.b;
  for (int i = 0; i < neuron.dim(); ++i) {
    z += ((x.bits() >> i) & 1u) ? neuron.w[i] : -neuron.w[i];
  }
  return z > 0.0 ? neuron.sign * z : 0.0;
}

bool has_integer_parameters(const OneHiddenLayerNet& net) {
  constexpr double kLimit = 0x1.0p40;
  for (double v : net.flatten()) {
    if (v != std::trunc(v) || std::abs(v) > kLimit) return false;
  }
  return true;
}

std::optional<std::int64_t> forward_exact(const OneHiddenLayerNet& net, const CubePoint& x) {
  if (x.dim() != net.dim()) throw std::invalid_argument("forward_exact: dimension mismatch");
  if (!has_integer_parameters(net)) return std::nullopt;
  std::int64_t out = 0;
  for (int j = 0; j < net.width(); ++j) {
    const auto row = net.w_row(j);
    auto z = static_cast<std::int64_t>(net.b()[j]);
    for (int i = 0; i < net.dim(); ++i) {
      const auto wi = static_cast<std::int64_t>(row[i]);
      z += ((x.bits() >> i) & 1u) ? wi : -wi;
    }
    if (z > 0) out += static_cast<std::int64_t>(net.u()[j]) * z;
  }
  return out;
}

double parameter_norm(const OneHiddenLayerNet& net) {
  return std::sqrt(sum_squares(net.u()) + sum_squares(net.w_all()) + sum_squares(net.b()));
}

double parameter_norm(const SingleNeuron& neuron) {
  return std::sqrt(sum_squares(neuron.w) + neuron.b * neuron.b);
}

OneHiddenLayerNet build_exact_parity_net(int dim, const SubsetMask& s) {
  if (s.dim() != dim) throw std::invalid_argument("build_exact_parity_net: dimension mismatch");
  if (s.is_empty()) throw std::invalid_argument("build_exact_parity_net: S must be nonempty");
  const int k = s.cardinality();
  const int width = k + 1;
  OneHiddenLayerNet net(width, dim);
  for (int j = 0; j < width; ++j) {
    net.u()[j] = j == 0 ? 1.0 : 4.0 * j * ((j % 2 == 0) ? 1.0 : -1.0);
    net.b()[j] = static_cast<double>(k + 1 - 2 * j);
    auto row = net.w_row(j);
    for (int i = 0; i < dim; ++i) row[i] = s.contains(i) ? -1.0 : 0.0;
  }
  return net;
}

double parity_net_norm_bound(int subset_size) {
  return 6.0 * std::pow(static_cast<double>(subset_size), 1.5);
}

SingleNeuron build_weak_single_neuron(const SubsetMask& s) {
  const int k = s.cardinality();
  if (k < 4 || k % 2 != 0) {
    throw std::invalid_argument("build_weak_single_neuron: need |S| even and >= 4, got " +
                                std::to_string(k));
  }
  const double scale = 0.5 * std::pow(static_cast<double>(k), -1.5);
  std::vector<double> w(s.dim(), 0.0);
  for (int i : s.indices()) w[i] = scale;
  const int sign = (((k - 2) / 2) % 2 == 0) ? 1 : -1;
  return SingleNeuron(sign, std::move(w), 0.0);
}

double weak_neuron_loss_bound(int subset_size) {
  return 1.0 - 1.0 / (8.0 * subset_size * subset_size);
}

nlohmann::json to_json(const OneHiddenLayerNet& net) {
  nlohmann::json rows = nlohmann::json::array();
  for (int j = 0; j < net.width(); ++j) {
    const auto row = net.w_row(j);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"n", net.width()},
          {"d", net.dim()},
          {"u", std::vector<double>(net.u().begin(), net.u().end())},
          {"W", rows},
          {"b", std::vector<double>(net.b().begin(), net.b().end())}};
}

OneHiddenLayerNet net_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const int d = j.at("d").get<int>();
  auto u = j.at("u").get<std::vector<double>>();
  auto b = j.at("b").get<std::vector<double>>();
  const auto& rows = j.at("W");
  if (static_cast<int>(u.size()) != n || !rows.is_array() || static_cast<int>(rows.size()) != n) {
    throw std::invalid_argument("network JSON: array lengths disagree with n");
  }
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(n) * d);
  for (const auto& row : rows) {
    auto r = row.get<std::vector<double>>();
    if (static_cast<int>(r.size()) != d) {
      throw std::invalid_argument("network JSON: W row length disagrees with d");
    }
    w.insert(w.end(), r.begin(), r.end());
  }
  return OneHiddenLayerNet(d, std::move(u), std::move(w), std::move(b));
}

nlohmann::json to_json(const SingleNeuron& neuron) {
  return {{"sign", neuron.sign}, {"w", neuron.w}, {"b", neuron.b}};
}

SingleNeuron neuron_from_json(const nlohmann::json& j) {
  return SingleNeuron(j.at("sign").get<int>(), j.at("w").get<std::vector<double>>(),
                      j.at("b").get<double>());
}

}  // namespace paritylab
