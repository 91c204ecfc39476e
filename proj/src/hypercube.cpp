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

#include "paritylab/hypercube.hpp"

#include <string>

namespace paritylab {
namespace {

constexpr std::size_t kPairwiseBlock = 128;

std::uint64_t low_bits(int dim) {
  return dim >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << dim) - 1);
}

void check_mask_dim(int dim) {
  if (dim < 1 || dim > kMaxMaskDim) {
    throw std::invalid_argument("dimension " + std::to_string(dim) +
                                " outside [1, 64]");
  }
}

double pairwise_sum_range(const std::function<double(std::size_t)>& term,
                          std::size_t begin, std::size_t end) {
  if (end - begin <= kPairwiseBlock) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += term(i);
    return acc;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return pairwise_sum_range(term, begin, mid) + pairwise_sum_range(term, mid, end);
}

}  // namespace

SubsetMask::SubsetMask(std::uint64_t bits, int dim) : bits_(bits), dim_(dim) {
  check_mask_dim(dim);
  if ((bits & ~low_bits(dim)) != 0) {
    throw std::invalid_argument("subset mask has bits at or above dimension " +
                                std::to_string(dim));
  }
}

SubsetMask SubsetMask::full(int dim) {
  check_mask_dim(dim);
  return SubsetMask(low_bits(dim), dim);
}

SubsetMask SubsetMask::prefix(int k, int dim) {
  if (k < 0 || k > dim) throw std::invalid_argument("prefix size out of range");
  return SubsetMask(k == 0 ? 0 : low_bits(k), dim);
}

SubsetMask SubsetMask::from_indices(std::initializer_list<int> indices, int dim) {
  return from_indices(std::span<const int>(indices.begin(), indices.size()), dim);
}

SubsetMask SubsetMask::from_indices(std::span<const int> indices, int dim) {
  check_mask_dim(dim);
  std::uint64_t bits = 0;
  for (int i : indices) {
    if (i < 0 || i >= dim) {
      throw std::invalid_argument("subset index " + std::to_string(i) +
                                  " outside [0, " + std::to_string(dim) + ")");
    }
    bits |= std::uint64_t{1} << i;
  }
  return SubsetMask(bits, dim);
}

SubsetMask SubsetMask::symmetric_difference(const SubsetMask& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("subset dimension mismatch");
  return SubsetMask(bits_ ^ other.bits_, dim_);
}

SubsetMask SubsetMask::with_toggled(int i) const {
  if (i < 0 || i >= dim_) throw std::invalid_argument("coordinate out of range");
  return SubsetMask(bits_ ^ (std::uint64_t{1} << i), dim_);
}

std::vector<int> SubsetMask::indices() const {
  std::vector<int> out;
  for (int i = 0; i < dim_; ++i) {
    if ((bits_ >> i) & 1u) out.push_back(i);
  }
  return out;
}

CubePoint::CubePoint(std::uint64_t bits, int dim) : bits_(bits), dim_(dim) {
  check_mask_dim(dim);
  if ((bits & ~low_bits(dim)) != 0) {
    throw std::invalid_argument("cube point has bits at or above dimension " +
                                std::to_string(dim));
  }
}

CubePoint CubePoint::from_coordinates(std::span<const int> coords) {
  const int dim = static_cast<int>(coords.size());
  check_mask_dim(dim);
  std::uint64_t bits = 0;
  for (int i = 0; i < dim; ++i) {
    if (coords[i] == 1) {
      bits |= std::uint64_t{1} << i;
    } else if (coords[i] != -1) {
      throw std::invalid_argument("cube coordinates must be -1 or +1");
    }
  }
  return CubePoint(bits, dim);
}

CubePoint CubePoint::from_coordinates(std::initializer_list<int> coords) {
  return from_coordinates(std::span<const int>(coords.begin(), coords.size()));
}

int CubePoint::coordinate(int i) const {
  if (i < 0 || i >= dim_) throw std::invalid_argument("coordinate out of range");
  return ((bits_ >> i) & 1u) ? 1 : -1;
}

CubePoint CubePoint::negated() const { return CubePoint(~bits_ & low_bits(dim_), dim_); }

int CubePoint::dot(const CubePoint& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("cube point dimension mismatch");
  const int disagree = std::popcount(bits_ ^ other.bits_);
  return dim_ - 2 * disagree;
}

std::vector<double> CubePoint::to_vector() const {
  std::vector<double> v(dim_);
  for (int i = 0; i < dim_; ++i) v[i] = ((bits_ >> i) & 1u) ? 1.0 : -1.0;
  return v;
}

Spectrum::Spectrum(int dim, std::vector<double> coeffs)
    : dim_(dim), coeffs_(std::move(coeffs)) {
  check_cube_dim(dim);
  if (coeffs_.size() != (std::size_t{1} << dim)) {
    throw std::invalid_argument("spectrum length must be 2^dim");
  }
}

double Spectrum::at(const SubsetMask& s) const {
  if (s.dim() != dim_) throw std::invalid_argument("subset dimension mismatch");
  return coeffs_[s.bits()];
}

double Spectrum::energy() const {
  return pairwise_sum_range([this](std::size_t i) { return coeffs_[i] * coeffs_[i]; },
                            0, coeffs_.size());
}

int parity(const SubsetMask& s, const CubePoint& x) {
  if (s.dim() != x.dim()) throw std::invalid_argument("parity: dimension mismatch");
  return parity_bits(s.bits(), x.bits());
}

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return pairwise_sum_range([values](std::size_t i) { return values[i]; }, 0,
                            values.size());
}

void check_cube_dim(int dim) {
  if (dim < 1 || dim > kMaxCubeDim) {
    throw std::out_of_range("cube dimension " + std::to_string(dim) +
                            " outside [1, " + std::to_string(kMaxCubeDim) + "]");
  }
}

double expect_over_cube(const std::function<double(const CubePoint&)>& g, int dim) {
  check_cube_dim(dim);
  const std::size_t n = std::size_t{1} << dim;
  const double total = pairwise_sum_range(
      [&g, dim](std::size_t x) { return g(CubePoint(x, dim)); }, 0, n);
  return total / static_cast<double>(n);
}

std::vector<double> tabulate(const std::function<double(const CubePoint&)>& g, int dim) {
  check_cube_dim(dim);
  const std::size_t n = std::size_t{1} << dim;
  std::vector<double> table(n);
  for (std::size_t x = 0; x < n; ++x) table[x] = g(CubePoint(x, dim));
  return table;
}

int cube_dim_of_length(std::size_t length) {
  if (length < 2 || !std::has_single_bit(length)) {
    throw std::invalid_argument("table length " + std::to_string(length) +
                                " is not a power of two >= 2");
  }
  const int dim = std::countr_zero(length);
  check_cube_dim(dim);
  return dim;
}

Spectrum walsh_hadamard(std::span<const double> values) {
  const int dim = cube_dim_of_length(values.size());
  std::vector<double> a(values.begin(), values.end());
  const std::size_t n = a.size();
  // Pair (bit clear = coordinate -1, bit set = coordinate +1) maps to
  // (sum, +1 minus -1), so index S accumulates sum_x g(x) p_S(x).
  for (std::size_t half = 1; half < n; half <<= 1) {
    for (std::size_t block = 0; block < n; block += 2 * half) {
      for (std::size_t k = block; k < block + half; ++k) {
        const double lo = a[k];
        const double hi = a[k + half];
        a[k] = lo + hi;
        a[k + half] = hi - lo;
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(n);
  for (double& c : a) c *= scale;
  return Spectrum(dim, std::move(a));
}

}  // namespace paritylab
