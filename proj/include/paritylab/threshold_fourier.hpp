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

// Fourier analysis of linear threshold functions x -> 1{w^T x + b > 0}.

#include <cstdint>
#include <span>
#include <vector>

#include "paritylab/estimate_report.hpp"
#include "paritylab/hypercube.hpp"

namespace paritylab {

struct ThresholdFn {
  std::vector<double> w;
  double b = 0.0;

  ThresholdFn(std::vector<double> weights, double bias);
  int dim() const { return static_cast<int>(w.size()); }
};

// E_x[p_S(x) 1{w^T x + b > 0}], by exact enumeration. Ties count as 0.
double fourier_coeff_threshold(const ThresholdFn& t, const SubsetMask& s);

// Coefficients for several subsets sharing one threshold function.
std::vector<double> fourier_coeffs_threshold(const ThresholdFn& t,
                                             std::span<const SubsetMask> subsets);

// Full spectrum of the indicator, through the Walsh-Hadamard transform.
Spectrum threshold_spectrum(const ThresholdFn& t);

// Indicator table of t on the cube, indexed by point bits.
std::vector<double> threshold_table(const ThresholdFn& t);

// Gaussian average of f_S^2 with w ~ N(0, sigma^2 I_d), and b ~ N(0, sigma^2)
// when include_bias. bound_value is 6 exp(-|S|/4), or 8 exp(-|S|/4) with bias.
// Sample i uses the substream (seed, kThresholdDecay, i).
EstimateReport gaussian_avg_sq_coeff(int dim, const SubsetMask& s, double sigma,
                                     bool include_bias, std::int64_t num_samples,
                                     std::uint64_t seed);

double decay_bound(int subset_size, bool include_bias);

// (pi - arccos(x^T y / d)) / (2 pi)
double hemisphere_overlap(const CubePoint& x, const CubePoint& y);

// Pr_w(w^T x > 0 and w^T y > 0) over standard Gaussian w, by sampling.
// bound_value carries the closed form; bound_satisfied is true when the
// estimate lies within 4 standard errors of it.
EstimateReport hemisphere_overlap_mc(const CubePoint& x, const CubePoint& y,
                                     std::int64_t num_samples, std::uint64_t seed);

// Taylor coefficient alpha_j in arccos(z) = pi/2 - sum_j alpha_j z^j.
double arccos_coeff(int j);

// sqrt(2/pi) * 2e / j^{3/2}
double arccos_coeff_bound(int j);

// E_x[[1_S^T x]_+ p_S(x)] for |S| = k even, 4 <= k <= 40, in closed form.
double relu_sum_parity_coeff(int k);

// D_i g(x) = (g(x with x_i = +1) - g(x with x_i = -1)) / 2.
std::vector<double> discrete_derivative(std::span<const double> values, int i);

}  // namespace paritylab
