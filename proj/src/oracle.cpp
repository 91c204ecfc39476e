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

#include "paritylab/oracle.hpp"

#include <cmath>
#include <limits>

namespace paritylab::oracle {

double preactivation(std::span<const double> w, double b, std::uint64_t x) {
  double z = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) z += ((x >> i) & 1u) ? w[i] : -w[i];
  return z + b;
}

double fourier_coeff(std::span<const double> table, std::uint64_t subset_bits) {
  long double acc = 0.0L;
  for (std::size_t x = 0; x < table.size(); ++x) {
    acc += parity_bits(subset_bits, x) * static_cast<long double>(table[x]);
  }
  return static_cast<double>(acc / table.size());
}

double threshold_coeff(std::span<const double> w, double b, std::uint64_t subset_bits) {
  const std::size_t n = std::size_t{1} << w.size();
  std::int64_t count = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (preactivation(w, b, x) > 0.0) count += parity_bits(subset_bits, x);
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

double linear_loss(const OneHiddenLayerNet& net, std::uint64_t subset_bits) {
  const std::size_t n = std::size_t{1} << net.dim();
  long double acc = 0.0L;
  for (std::size_t x = 0; x < n; ++x) {
    double out = 0.0;
    for (int j = 0; j < net.width(); ++j) {
      const double z = preactivation(net.w_row(j), net.b()[j], x);
      if (z > 0.0) out += net.u()[j] * z;
    }
    acc += parity_bits(subset_bits, x) * static_cast<long double>(out);
  }
  return static_cast<double>(-acc / n);
}

double squared_loss(const SingleNeuron& neuron, std::uint64_t subset_bits) {
  const std::size_t n = std::size_t{1} << neuron.dim();
  long double acc = 0.0L;
  for (std::size_t x = 0; x < n; ++x) {
    const double z = preactivation(neuron.w, neuron.b, x);
    const double out = z > 0.0 ? neuron.sign * z : 0.0;
    const double err = out - parity_bits(subset_bits, x);
    acc += static_cast<long double>(err) * err;
  }
  return static_cast<double>(acc / n);
}

double mean_squared_relu(std::span<const double> w, double b) {
  const std::size_t n = std::size_t{1} << w.size();
  long double acc = 0.0L;
  for (std::size_t x = 0; x < n; ++x) {
    const double z = preactivation(w, b, x);
    if (z > 0.0) acc += static_cast<long double>(z) * z;
  }
  return static_cast<double>(acc / n);
}

double relu_sum_parity(int k) {
  const std::size_t n = std::size_t{1} << k;
  const std::uint64_t all = n - 1;
  std::int64_t acc = 0;
  for (std::size_t x = 0; x < n; ++x) {
    const int sum = 2 * std::popcount(x) - k;
    if (sum > 0) acc += parity_bits(all, x) * sum;
  }
  return static_cast<double>(acc) / static_cast<double>(n);
}

double min_abs_preactivation(const OneHiddenLayerNet& net) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = std::size_t{1} << net.dim();
  for (int j = 0; j < net.width(); ++j) {
    for (std::size_t x = 0; x < n; ++x) {
      best = std::min(best, std::abs(preactivation(net.w_row(j), net.b()[j], x)));
    }
  }
  return best;
}

double min_abs_preactivation(const SingleNeuron& neuron) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = std::size_t{1} << neuron.dim();
  for (std::size_t x = 0; x < n; ++x) {
    best = std::min(best, std::abs(preactivation(neuron.w, neuron.b, x)));
  }
  return best;
}

std::vector<double> central_difference(const std::function<double(std::span<const double>)>& f,
                                       std::span<const double> theta, double h) {
  std::vector<double> point(theta.begin(), theta.end());
  std::vector<double> out(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double saved = point[k];
    point[k] = saved + h;
    const double up = f(point);
    point[k] = saved - h;
    const double down = f(point);
    point[k] = saved;
    out[k] = (up - down) / (2.0 * h);
  }
  return out;
}

long double arccos_coeff_recurrence(int j) {
  if (j % 2 == 0) return 0.0L;
  long double alpha = 1.0L;
  for (int m = 1; m < j; m += 2) {
    alpha *= static_cast<long double>(m) * m / (static_cast<long double>(m + 1) * (m + 2));
  }
  return alpha;
}

}  // namespace paritylab::oracle
