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

// Counter-based Gaussian substreams.
//
// Every draw is a pure function of (seed, stream, index, position): the
// Philox4x32-10 block cipher is keyed by the 64-bit seed and run on the
// counter (block, index_lo, index_hi, stream). Uniforms take 53 bits from
// two 32-bit words; normals come from the Box-Muller transform, both
// outputs used. Sample i of an estimator and step t of a trajectory thus
// never depend on how many draws anything else consumed.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace paritylab {

inline constexpr std::string_view kRngMethod = "philox4x32-10/box-muller";

// Stream identifiers, one per consumer family.
enum class Stream : std::uint32_t {
  kThresholdDecay = 1,
  kHemisphere = 2,
  kGradStats = 3,
  kRandomLoss = 4,
  kPgd = 5,
  kTestData = 6,
};

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

class NormalStream {
 public:
  NormalStream(std::uint64_t seed, Stream stream, std::uint64_t index);

  double next();
  // Uniform on (0, 1].
  double next_uniform();
  void fill(std::span<double> out, double scale = 1.0);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_;
  std::uint64_t index_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> words_{};
  int words_left_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace paritylab
