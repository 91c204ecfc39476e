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

// Exact computation over the Boolean hypercube {-1,+1}^d.
//
// Points and subsets are both d-bit words. For a CubePoint, bit i set means
// coordinate i is +1. For a SubsetMask, bit i set means i is in S. Indices
// are 0-based throughout.

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace paritylab {

// Largest dimension for which full tables (2^d entries) are built.
inline constexpr int kMaxCubeDim = 24;

// Largest dimension a mask can describe.
inline constexpr int kMaxMaskDim = 64;

class SubsetMask {
 public:
  SubsetMask() = default;
  SubsetMask(std::uint64_t bits, int dim);

  static SubsetMask empty(int dim) { return SubsetMask(0, dim); }
  static SubsetMask full(int dim);
  // The first k coordinates {0, ..., k-1}.
  static SubsetMask prefix(int k, int dim);
  static SubsetMask from_indices(std::initializer_list<int> indices, int dim);
  static SubsetMask from_indices(std::span<const int> indices, int dim);

  std::uint64_t bits() const { return bits_; }
  int dim() const { return dim_; }
  int cardinality() const { return std::popcount(bits_); }
  bool contains(int i) const { return i >= 0 && i < dim_ && ((bits_ >> i) & 1u); }
  bool is_empty() const { return bits_ == 0; }

  SubsetMask symmetric_difference(const SubsetMask& other) const;
  SubsetMask with_toggled(int i) const;
  std::vector<int> indices() const;

  friend bool operator==(const SubsetMask&, const SubsetMask&) = default;

 private:
  std::uint64_t bits_ = 0;
  int dim_ = 1;
};

class CubePoint {
 public:
  CubePoint() = default;
  CubePoint(std::uint64_t bits, int dim);

  static CubePoint from_coordinates(std::span<const int> coords);
  static CubePoint from_coordinates(std::initializer_list<int> coords);

  std::uint64_t bits() const { return bits_; }
  int dim() const { return dim_; }
  int coordinate(int i) const;
  CubePoint negated() const;
  // Inner product x^T y, an integer in [-d, d].
  int dot(const CubePoint& other) const;
  std::vector<double> to_vector() const;

  friend bool operator==(const CubePoint&, const CubePoint&) = default;

 private:
  std::uint64_t bits_ = 0;
  int dim_ = 1;
};

// Full Fourier spectrum, coefficient for S at index S.bits().
class Spectrum {
 public:
  Spectrum(int dim, std::vector<double> coeffs);

  int dim() const { return dim_; }
  std::size_t size() const { return coeffs_.size(); }
  double operator[](std::uint64_t subset_bits) const { return coeffs_[subset_bits]; }
  double at(const SubsetMask& s) const;
  std::span<const double> coeffs() const { return coeffs_; }
  // Sum of squared coefficients, pairwise-summed.
  double energy() const;

 private:
  int dim_;
  std::vector<double> coeffs_;
};

// Product of x_i over i in S, as +1 or -1.
int parity(const SubsetMask& s, const CubePoint& x);

// Same, on raw words; no dimension check.
inline int parity_bits(std::uint64_t s, std::uint64_t x) {
  return (std::popcount(s & ~x) & 1) ? -1 : 1;
}

// Pairwise sum with a fixed tree shape (independent of any scheduling).
double pairwise_sum(std::span<const double> values);

// 2^{-d} * sum over all x of g(x), pairwise-summed in index order.
double expect_over_cube(const std::function<double(const CubePoint&)>& g, int dim);

// Evaluates g at every point, indexed by point bits.
std::vector<double> tabulate(const std::function<double(const CubePoint&)>& g, int dim);

// All 2^d Fourier coefficients of a tabulated function.
Spectrum walsh_hadamard(std::span<const double> values);

// log2 of a power-of-two table length; throws otherwise.
int cube_dim_of_length(std::size_t length);

void check_cube_dim(int dim);

}  // namespace paritylab
