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

#pragma once

// One-hidden-layer ReLU networks x -> sum_j u_j [w_j^T x + b_j]_+ and the
// single-neuron model x -> sign * [w^T x + b]_+.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "paritylab/hypercube.hpp"

namespace paritylab {

class OneHiddenLayerNet {
 public:
  // Zero network of width n over d inputs. n == 0 is allowed (the constant 0).
  OneHiddenLayerNet(int width, int dim);
  OneHiddenLayerNet(int dim, std::vector<double> u, std::vector<double> w_rows,
                    std::vector<double> b);

  int width() const { return width_; }
  int dim() const { return dim_; }
  // Flattened parameter count: n output weights, n*d hidden weights, n biases.
  std::size_t parameter_count() const { return u_.size() + w_.size() + b_.size(); }

  std::span<const double> u() const { return u_; }
  std::span<const double> b() const { return b_; }
  std::span<const double> w_row(int j) const {
    return std::span<const double>(w_).subspan(static_cast<std::size_t>(j) * dim_, dim_);
  }
  std::span<const double> w_all() const { return w_; }

  std::span<double> u() { return u_; }
  std::span<double> b() { return b_; }
  std::span<double> w_row(int j) {
    return std::span<double>(w_).subspan(static_cast<std::size_t>(j) * dim_, dim_);
  }

  // Layout [u, W row-major, b].
  std::vector<double> flatten() const;
  void assign_flat(std::span<const double> theta);
  static OneHiddenLayerNet from_flat(int width, int dim, std::span<const double> theta);

 private:
  void validate() const;

  int width_;
  int dim_;
  std::vector<double> u_;
  std::vector<double> w_;
  std::vector<double> b_;
};

struct SingleNeuron {
  int sign = 1;
  std::vector<double> w;
  double b = 0.0;

  SingleNeuron(int sign_value, std::vector<double> weights, double bias);
  int dim() const { return static_cast<int>(w.size()); }

  // Layout [w, b].
  std::vector<double> flatten() const;
  void assign_flat(std::span<const double> theta);
};

double forward(const OneHiddenLayerNet& net, const CubePoint& x);
double forward(const SingleNeuron& neuron, const CubePoint& x);

// Integer-exact forward pass, available when every parameter is an integer
// (and small enough that all partial sums stay exact in int64).
std::optional<std::int64_t> forward_exact(const OneHiddenLayerNet& net, const CubePoint& x);
bool has_integer_parameters(const OneHiddenLayerNet& net);

double parameter_norm(const OneHiddenLayerNet& net);
double parameter_norm(const SingleNeuron& neuron);

// Width |S|+1 network with N(x) = p_S(x) on every cube point. Neuron j
// (j = 0..|S|) has w_j = -1_S, b_j = |S| + 1 - 2j, u_0 = 1, u_j = 4j(-1)^j.
OneHiddenLayerNet build_exact_parity_net(int dim, const SubsetMask& s);

// 6 |S|^{3/2}
double parity_net_norm_bound(int subset_size);

// sign (-1)^{(|S|-2)/2}, w = |S|^{-3/2} 1_S / 2, b = 0; needs |S| even, >= 4.
SingleNeuron build_weak_single_neuron(const SubsetMask& s);

// 1 - 1 / (8 |S|^2)
double weak_neuron_loss_bound(int subset_size);

nlohmann::json to_json(const OneHiddenLayerNet& net);
OneHiddenLayerNet net_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SingleNeuron& neuron);
SingleNeuron neuron_from_json(const nlohmann::json& j);

}  // namespace paritylab
