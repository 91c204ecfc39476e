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

// Brute-force reference evaluators. Each one loops over every cube point
// and evaluates the defining formula directly, sharing no code with the
// split-table kernels, so the two routes check each other.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "paritylab/hypercube.hpp"
#include "paritylab/relu_nets.hpp"

namespace paritylab::oracle {

// w^T x + b, summed in coordinate order.
double preactivation(std::span<const double> w, double b, std::uint64_t x);

// E_x[g(x) p_S(x)] by direct summation over the table.
double fourier_coeff(std::span<const double> table, std::uint64_t subset_bits);

double threshold_coeff(std::span<const double> w, double b, std::uint64_t subset_bits);

double linear_loss(const OneHiddenLayerNet& net, std::uint64_t subset_bits);
double squared_loss(const SingleNeuron& neuron, std::uint64_t subset_bits);
double mean_squared_relu(std::span<const double> w, double b);

// E_x[[1_S^T x]_+ p_S(x)] at d = |S| = k.
double relu_sum_parity(int k);

// Smallest |w_j^T x + b_j| over all neurons and cube points.
double min_abs_preactivation(const OneHiddenLayerNet& net);
double min_abs_preactivation(const SingleNeuron& neuron);

// Central differences (f(t + h e_k) - f(t - h e_k)) / 2h.
std::vector<double> central_difference(const std::function<double(std::span<const double>)>& f,
                                       std::span<const double> theta, double h);

// alpha_j by the exact ratio alpha_{j+2} = alpha_j j^2 / ((j+1)(j+2)), in long double.
long double arccos_coeff_recurrence(int j);

}  // namespace paritylab::oracle
