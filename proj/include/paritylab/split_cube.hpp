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

// Meet-in-the-middle evaluation of affine threshold sums over {-1,+1}^d.
//
// The coordinates are split into a low half (bits 0..h-1) and a high half.
// For z(x) = w^T x + b we tabulate A[lo] = sum of the low terms and
// B[hi] = sum of the high terms plus b, so z(x) = A[lo] + B[hi]. With the
// low table sorted, the set of active lows for a fixed hi is a suffix of
// the sorted order, and every sum over {x : z(x) > 0} reduces to suffix
// sums over the low half plus one pass over the high half:
// O(2^{d/2} log 2^{d/2}) per (w, b) and O(2^{d/2}) per subset queried.
//
// Activation is the exact sign of the real number A[lo] + B[hi] (that is,
// A[lo] > -B[hi]), so z == 0 counts as inactive and the predicate is the
// same whether evaluated pointwise or through the sorted tables.

#include <cstdint>
#include <span>
#include <vector>

namespace paritylab {

struct ReluMoments {
  std::int64_t active = 0;        // #{x : z(x) > 0}
  double sum_relu = 0.0;          // sum_x [z]_+
  double sum_relu_sq = 0.0;       // sum_x [z]_+^2
  std::vector<double> sum_relu_x; // sum_x [z]_+ x_i, per coordinate
};

class SplitCube {
 public:
  SplitCube(std::span<const double> w, double b);

  int dim() const { return dim_; }
  int low_dim() const { return low_dim_; }

  double preactivation(std::uint64_t x) const {
    return low_[x & low_mask_] + high_[x >> low_dim_];
  }
  bool active(std::uint64_t x) const {
    return low_[x & low_mask_] > -high_[x >> low_dim_];
  }

  // sum_x p_S(x) 1{z(x) > 0}; an exact integer.
  std::int64_t signed_active_count(std::uint64_t subset_bits) const;
  // sum_x p_S(x) [z(x)]_+
  double signed_relu_sum(std::uint64_t subset_bits) const;
  ReluMoments relu_moments() const;

 private:
  int dim_;
  int low_dim_;
  std::uint64_t low_mask_;
  std::vector<double> low_;            // A[lo]
  std::vector<double> high_;           // B[hi]
  std::vector<std::uint32_t> order_;   // lows sorted by A ascending
  std::vector<double> sorted_low_;     // A in sorted order
  std::vector<std::uint32_t> cut_;     // per hi: first sorted position that is active
};

}  // namespace paritylab
