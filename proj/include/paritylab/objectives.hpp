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

// Exact population losses for learning p_S, their closed-form gradients,
// and Gaussian statistics of gradients and losses.
//
//   linear loss   F_S(theta) = -E_x[N_theta(x) p_S(x)]
//   squared loss  F_S(theta) =  E_x[(sign [w^T x + b]_+ - p_S(x))^2]
//
// The ReLU derivative is 1{z > 0}, so it vanishes at z == 0.

#include <cstdint>
#include <span>
#include <vector>

#include "paritylab/estimate_report.hpp"
#include "paritylab/hypercube.hpp"
#include "paritylab/relu_nets.hpp"

namespace paritylab {

// Partial derivatives for a one-hidden-layer net, shaped like the net.
struct NetGradient {
  std::vector<double> du;  // n
  std::vector<double> dw;  // n x d, row-major
  std::vector<double> db;  // n

  // Layout [du, dW, db], matching OneHiddenLayerNet::flatten.
  std::vector<double> flatten() const;
  double norm() const;
};

struct NeuronGradient {
  std::vector<double> dw;  // d
  double db = 0.0;

  std::vector<double> flatten() const;
  double norm() const;
};

double linear_loss(const OneHiddenLayerNet& net, const SubsetMask& s);
NetGradient linear_loss_grad(const OneHiddenLayerNet& net, const SubsetMask& s);

struct NetLossAndGrad {
  double loss = 0.0;
  NetGradient grad;
};
NetLossAndGrad linear_loss_and_grad(const OneHiddenLayerNet& net, const SubsetMask& s);

double squared_loss_single(const SingleNeuron& neuron, const SubsetMask& s);
NeuronGradient squared_loss_single_grad(const SingleNeuron& neuron, const SubsetMask& s);

struct NeuronLossAndGrad {
  double loss = 0.0;
  NeuronGradient grad;
};
NeuronLossAndGrad squared_loss_single_and_grad(const SingleNeuron& neuron, const SubsetMask& s);

// E_x[[w^T x + b]_+^2]
double mean_squared_relu(std::span<const double> w, double b);

// Shape of a one-hidden-layer architecture.
struct NetShape {
  int width = 1;
  int dim = 1;
};

// Gradient statistics at theta ~ N(0, sigma^2 I) for the linear loss.
struct GradNormStats {
  // Mean of ||grad F_S|| (or of ||grad F_S||^2 with second_moment),
  // bound exp(-|S|/9).
  EstimateReport grad_norm;
  // Mean of |d F_S / d u_j| (averaged over j per sample), bound 5 d sigma exp(-|S|/8).
  EstimateReport du_abs;
};

// Sample i uses the substream (seed, kGradStats, i). The bound comparison
// is informational: parameters.in_bound_regime records whether
// d > 30 and |S| >= 72 ln(6 n d sigma) hold.
GradNormStats grad_norm_gaussian_stats(const NetShape& arch, const SubsetMask& s, double sigma,
                                       std::int64_t num_samples, std::uint64_t seed,
                                       bool second_moment = false);

// Fraction of theta ~ N(0, variance I) with |F_S(theta)| >= epsilon, where
// epsilon defaults to exp(-|S|/18). bound_value is epsilon.
EstimateReport random_loss_stats(const NetShape& arch, const SubsetMask& s, double variance,
                                 std::int64_t num_samples, std::uint64_t seed,
                                 double epsilon = -1.0);

double hardness_epsilon(int subset_size);

}  // namespace paritylab
