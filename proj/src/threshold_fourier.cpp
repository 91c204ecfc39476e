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

#include "paritylab/threshold_fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "paritylab/rng.hpp"
#include "paritylab/split_cube.hpp"

namespace paritylab {
namespace {

void check_same_dim(const ThresholdFn& t, const SubsetMask& s) {
  if (t.dim() != s.dim()) {
    throw std::invalid_argument("threshold dimension " + std::to_string(t.dim()) +
                                " does not match subset dimension " +
                                std::to_string(s.dim()));
  }
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

ThresholdFn::ThresholdFn(std::vector<double> weights, double bias)
    : w(std::move(weights)), b(bias) {
  if (w.empty()) throw std::invalid_argument("threshold function needs d >= 1");
  for (double v : w) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite threshold weight");
  }
  if (!std::isfinite(b)) throw std::invalid_argument("non-finite threshold bias");
}

double fourier_coeff_threshold(const ThresholdFn& t, const SubsetMask& s) {
  check_same_dim(t, s);
  const SplitCube cube(t.w, t.b);
  const std::int64_t count = cube.signed_active_count(s.bits());
  return std::ldexp(static_cast<double>(count), -t.dim());
}

std::vector<double> fourier_coeffs_threshold(const ThresholdFn& t,
                                             std::span<const SubsetMask> subsets) {
  for (const auto& s : subsets) check_same_dim(t, s);
  const SplitCube cube(t.w, t.b);
  std::vector<double> out;
  out.reserve(subsets.size());
  for (const auto& s : subsets) {
    out.push_back(std::ldexp(static_cast<double>(cube.signed_active_count(s.bits())),
                             -t.dim()));
  }
  return out;
}

std::vector<double> threshold_table(const ThresholdFn& t) {
  const SplitCube cube(t.w, t.b);
  std::vector<double> table(std::size_t{1} << t.dim());
  for (std::size_t x = 0; x < table.size(); ++x) table[x] = cube.active(x) ? 1.0 : 0.0;
  return table;
}

Spectrum threshold_spectrum(const ThresholdFn& t) {
  return walsh_hadamard(threshold_table(t));
}

double decay_bound(int subset_size, bool include_bias) {
  return (include_bias ? 8.0 : 6.0) * std::exp(-subset_size / 4.0);
}

EstimateReport gaussian_avg_sq_coeff(int dim, const SubsetMask& s, double sigma,
                                     bool include_bias, std::int64_t num_samples,
                                     std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("gaussian_avg_sq_coeff: need d >= 2");
  check_cube_dim(dim);
  if (s.dim() != dim) throw std::invalid_argument("gaussian_avg_sq_coeff: subset dimension mismatch");
  if (s.cardinality() < 2) throw std::invalid_argument("gaussian_avg_sq_coeff: need |S| >= 2");
  if (num_samples < 2) throw std::invalid_argument("gaussian_avg_sq_coeff: need at least 2 samples");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("gaussian_avg_sq_coeff: sigma must be positive");
  }

  std::vector<double> squares(static_cast<std::size_t>(num_samples));
  std::vector<double> w(dim);
  for (std::int64_t i = 0; i < num_samples; ++i) {
    NormalStream rng(seed, Stream::kThresholdDecay, static_cast<std::uint64_t>(i));
    rng.fill(w, sigma);
    const double b = include_bias ? sigma * rng.next() : 0.0;
    const SplitCube cube(w, b);
    const double f = std::ldexp(static_cast<double>(cube.signed_active_count(s.bits())), -dim);
    squares[static_cast<std::size_t>(i)] = f * f;
  }
  nlohmann::json params = {
      {"d", dim},
      {"S_size", s.cardinality()},
      {"S_bits", s.bits()},
      {"sigma", sigma},
      {"include_bias", include_bias},
      {"statistic", "E_w[f_S(w,b)^2]"},
  };
  return make_upper_bound_report(squares, decay_bound(s.cardinality(), include_bias), seed,
                                 std::move(params));
}

double hemisphere_overlap(const CubePoint& x, const CubePoint& y) {
  const double cosine = static_cast<double>(x.dot(y)) / x.dim();
  const double clamped = std::clamp(cosine, -1.0, 1.0);
  return (std::numbers::pi - std::acos(clamped)) / (2.0 * std::numbers::pi);
}

EstimateReport hemisphere_overlap_mc(const CubePoint& x, const CubePoint& y,
                                     std::int64_t num_samples, std::uint64_t seed) {
  if (x.dim() != y.dim()) throw std::invalid_argument("hemisphere_overlap_mc: dimension mismatch");
  if (num_samples < 2) throw std::invalid_argument("hemisphere_overlap_mc: need at least 2 samples");
  const int dim = x.dim();
  const std::vector<double> xv = x.to_vector();
  const std::vector<double> yv = y.to_vector();
  std::vector<double> hits(static_cast<std::size_t>(num_samples));
  std::vector<double> w(dim);
  for (std::int64_t i = 0; i < num_samples; ++i) {
    NormalStream rng(seed, Stream::kHemisphere, static_cast<std::uint64_t>(i));
    rng.fill(w);
    double wx = 0.0;
    double wy = 0.0;
    for (int k = 0; k < dim; ++k) {
      wx += w[k] * xv[k];
      wy += w[k] * yv[k];
    }
    hits[static_cast<std::size_t>(i)] = (wx > 0.0 && wy > 0.0) ? 1.0 : 0.0;
  }
  const SampleMoments m = sample_moments(hits);
  EstimateReport r;
  r.estimate = m.mean;
  r.std_error = m.std_error;
  r.num_samples = num_samples;
  r.bound_value = hemisphere_overlap(x, y);
  r.bound_satisfied = std::abs(r.estimate - r.bound_value) <= 4.0 * r.std_error;
  r.seed = seed;
  r.parameters = {{"d", dim},
                  {"inner_product", x.dot(y)},
                  {"statistic", "Pr_w(w.x > 0 and w.y > 0)"},
                  {"rng", std::string(kRngMethod)}};
  return r;
}

double arccos_coeff(int j) {
  if (j < 1) throw std::invalid_argument("arccos_coeff: need j >= 1");
  if (j % 2 == 0) return 0.0;
  const int m = (j - 1) / 2;
  const double log_value = std::lgamma(static_cast<double>(j)) -
                           (j - 1) * std::numbers::ln2 -
                           2.0 * std::lgamma(m + 1.0) - std::log(static_cast<double>(j));
  return std::exp(log_value);
}

double arccos_coeff_bound(int j) {
  return std::sqrt(2.0 / std::numbers::pi) * 2.0 * std::numbers::e /
         std::pow(static_cast<double>(j), 1.5);
}

double relu_sum_parity_coeff(int k) {
  if (k % 2 != 0 || k < 4 || k > 40) {
    throw std::invalid_argument("relu_sum_parity_coeff: need even k in [4, 40], got " +
                                std::to_string(k));
  }
  const int half = (k - 2) / 2;
  const double magnitude = std::exp(log_binomial(k - 2, half) - (k - 1) * std::numbers::ln2);
  return (half % 2 == 0) ? magnitude : -magnitude;
}

std::vector<double> discrete_derivative(std::span<const double> values, int i) {
  const int dim = cube_dim_of_length(values.size());
  if (i < 0 || i >= dim) {
    throw std::invalid_argument("discrete_derivative: coordinate " + std::to_string(i) +
                                " out of range");
  }
  const std::uint64_t bit = std::uint64_t{1} << i;
  std::vector<double> out(values.size());
  for (std::size_t x = 0; x < values.size(); ++x) {
    out[x] = (values[x | bit] - values[x & ~bit]) / 2.0;
  }
  return out;
}

}  // namespace paritylab
