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

#include "paritylab/split_cube.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "paritylab/hypercube.hpp"

namespace paritylab {
namespace {

// Sum of w_i x_i over the given bit range, in coordinate order.
std::vector<double> half_table(std::span<const double> w, int first, int count,
                               double offset) {
  const std::size_t n = std::size_t{1} << count;
  std::vector<double> table(n);
  for (std::size_t x = 0; x < n; ++x) {
    double acc = 0.0;
    for (int i = 0; i < count; ++i) {
      const double wi = w[first + i];
      acc += ((x >> i) & 1u) ? wi : -wi;
    }
    table[x] = acc + offset;
  }
  return table;
}

}  // namespace

SplitCube::SplitCube(std::span<const double> w, double b)
    : dim_(static_cast<int>(w.size())), low_dim_(dim_ / 2) {
  check_cube_dim(dim_);
  low_mask_ = (std::uint64_t{1} << low_dim_) - 1;
  low_ = half_table(w, 0, low_dim_, 0.0);
  high_ = half_table(w, low_dim_, dim_ - low_dim_, b);

  order_.resize(low_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  std::stable_sort(order_.begin(), order_.end(),
                   [this](std::uint32_t a, std::uint32_t c) { return low_[a] < low_[c]; });
  sorted_low_.resize(low_.size());
  for (std::size_t k = 0; k < order_.size(); ++k) sorted_low_[k] = low_[order_[k]];

  cut_.resize(high_.size());
  for (std::size_t hi = 0; hi < high_.size(); ++hi) {
    const double threshold = -high_[hi];
    const auto it = std::upper_bound(sorted_low_.begin(), sorted_low_.end(), threshold);
    cut_[hi] = static_cast<std::uint32_t>(it - sorted_low_.begin());
  }
}

std::int64_t SplitCube::signed_active_count(std::uint64_t subset_bits) const {
  const std::uint64_t s_low = subset_bits & low_mask_;
  const std::uint64_t s_high = subset_bits >> low_dim_;
  const std::size_t n_low = order_.size();
  std::vector<std::int64_t> suffix(n_low + 1, 0);
  for (std::size_t k = n_low; k-- > 0;) {
    suffix[k] = suffix[k + 1] + parity_bits(s_low, order_[k]);
  }
  std::int64_t total = 0;
  for (std::size_t hi = 0; hi < high_.size(); ++hi) {
    total += parity_bits(s_high, hi) * suffix[cut_[hi]];
  }
  return total;
}

double SplitCube::signed_relu_sum(std::uint64_t subset_bits) const {
  const std::uint64_t s_low = subset_bits & low_mask_;
  const std::uint64_t s_high = subset_bits >> low_dim_;
  const std::size_t n_low = order_.size();
  std::vector<std::int64_t> sign_suffix(n_low + 1, 0);
  std::vector<double> value_suffix(n_low + 1, 0.0);
  for (std::size_t k = n_low; k-- > 0;) {
    const int sgn = parity_bits(s_low, order_[k]);
    sign_suffix[k] = sign_suffix[k + 1] + sgn;
    value_suffix[k] = value_suffix[k + 1] + sgn * sorted_low_[k];
  }
  double total = 0.0;
  for (std::size_t hi = 0; hi < high_.size(); ++hi) {
    const std::uint32_t c = cut_[hi];
    const double part =
        value_suffix[c] + high_[hi] * static_cast<double>(sign_suffix[c]);
    total += parity_bits(s_high, hi) * part;
  }
  return total;
}

ReluMoments SplitCube::relu_moments() const {
  const std::size_t n_low = order_.size();
  const int high_dim = dim_ - low_dim_;
  std::vector<double> sum_a(n_low + 1, 0.0);
  std::vector<double> sum_a2(n_low + 1, 0.0);
  // Per low coordinate: suffix sums of x_i * A and of x_i.
  std::vector<std::vector<double>> sum_xa(low_dim_, std::vector<double>(n_low + 1, 0.0));
  std::vector<std::vector<std::int64_t>> sum_x(low_dim_,
                                               std::vector<std::int64_t>(n_low + 1, 0));
  for (std::size_t k = n_low; k-- > 0;) {
    const double a = sorted_low_[k];
    sum_a[k] = sum_a[k + 1] + a;
    sum_a2[k] = sum_a2[k + 1] + a * a;
    const std::uint32_t lo = order_[k];
    for (int i = 0; i < low_dim_; ++i) {
      const int xi = ((lo >> i) & 1u) ? 1 : -1;
      sum_xa[i][k] = sum_xa[i][k + 1] + xi * a;
      sum_x[i][k] = sum_x[i][k + 1] + xi;
    }
  }

  ReluMoments m;
  m.sum_relu_x.assign(dim_, 0.0);
  for (std::size_t hi = 0; hi < high_.size(); ++hi) {
    const std::uint32_t c = cut_[hi];
    const double bias = high_[hi];
    const double count = static_cast<double>(n_low - c);
    const double relu = sum_a[c] + bias * count;
    m.active += static_cast<std::int64_t>(n_low - c);
    m.sum_relu += relu;
    m.sum_relu_sq += sum_a2[c] + 2.0 * bias * sum_a[c] + bias * bias * count;
    for (int i = 0; i < low_dim_; ++i) {
      m.sum_relu_x[i] += sum_xa[i][c] + bias * static_cast<double>(sum_x[i][c]);
    }
    for (int i = 0; i < high_dim; ++i) {
      m.sum_relu_x[low_dim_ + i] += ((hi >> i) & 1u) ? relu : -relu;
    }
  }
  return m;
}

}  // namespace paritylab
