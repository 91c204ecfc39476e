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
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "paritylab/oracle.hpp"

namespace paritylab {
namespace {

std::vector<double> gaussian_vector(std::mt19937_64& gen, int d) {
  std::normal_distribution<double> normal;
  std::vector<double> w(d);
  for (double& v : w) v = normal(gen);
  return w;
}

TEST(FourierCoeffThresholdTest, ConstantIndicatorHasNoParityMass) {
  const ThresholdFn t(std::vector<double>(3, 0.0), 1.0);
  EXPECT_EQ(fourier_coeff_threshold(t, SubsetMask::from_indices({0}, 3)), 0.0);
}

TEST(FourierCoeffThresholdTest, OneDimensionalHalfspace) {
  const ThresholdFn t({1.0}, 0.0);
  EXPECT_EQ(fourier_coeff_threshold(t, SubsetMask::full(1)), 0.5);
}

TEST(FourierCoeffThresholdTest, MajorityOfFourByEnumeration) {
  const std::vector<double> w(4, 1.0);
  const double expected = oracle::threshold_coeff(w, 0.0, 0b1111);
  // Active points: all +1 (parity +1) and the four with one -1 (parity -1).
  EXPECT_EQ(expected, -3.0 / 16.0);
  EXPECT_EQ(fourier_coeff_threshold(ThresholdFn(w, 0.0), SubsetMask::full(4)), expected);
}

TEST(FourierCoeffThresholdTest, DimensionMismatchThrows) {
  EXPECT_THROW(fourier_coeff_threshold(ThresholdFn({1.0, 2.0}, 0.0), SubsetMask::full(3)),
               std::invalid_argument);
}

TEST(ThresholdSpectrumTest, DegenerateIndicators) {
  const Spectrum ones = threshold_spectrum(ThresholdFn(std::vector<double>(4, 0.0), 1.0));
  EXPECT_EQ(ones[0], 1.0);
  for (std::size_t s = 1; s < ones.size(); ++s) EXPECT_EQ(ones[s], 0.0);
  const Spectrum zeros = threshold_spectrum(ThresholdFn(std::vector<double>(4, 0.0), -1.0));
  for (std::size_t s = 0; s < zeros.size(); ++s) EXPECT_EQ(zeros[s], 0.0);
}

TEST(ThresholdSpectrumTest, AndOfTwo) {
  const Spectrum spec = threshold_spectrum(ThresholdFn({1.0, 1.0}, 0.0));
  for (std::size_t s = 0; s < 4; ++s) EXPECT_EQ(spec[s], 0.25);
}

TEST(ThresholdSpectrumTest, AgreesWithCoefficientRoute) {
  std::mt19937_64 gen(5);
  for (int d = 1; d <= 12; ++d) {
    const ThresholdFn t(gaussian_vector(gen, d), 0.2);
    const Spectrum spec = threshold_spectrum(t);
    for (std::uint64_t s = 0; s < spec.size(); ++s) {
      EXPECT_NEAR(spec[s], fourier_coeff_threshold(t, SubsetMask(s, d)), 1e-10);
    }
    // Parseval: the indicator squares to itself.
    EXPECT_NEAR(spec.energy(), spec[0], 1e-9 * std::max(spec[0], 1e-300));
  }
}

TEST(ThresholdPropertyTest, ScaleInvariance) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + trial % 11;
    const auto w = gaussian_vector(gen, d);
    const double b = std::normal_distribution<double>()(gen);
    for (double c : {0.5, 2.0, 8.0, 1.0 / 1024}) {
      std::vector<double> scaled(w);
      for (double& v : scaled) v *= c;
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << d); s += 1 + (s % 5)) {
        EXPECT_EQ(fourier_coeff_threshold(ThresholdFn(scaled, c * b), SubsetMask(s, d)),
                  fourier_coeff_threshold(ThresholdFn(w, b), SubsetMask(s, d)));
      }
    }
  }
}

TEST(ThresholdPropertyTest, BoundedByOne) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 12;
    const ThresholdFn t(gaussian_vector(gen, d), std::normal_distribution<double>()(gen));
    const Spectrum spec = threshold_spectrum(t);
    for (double c : spec.coeffs()) EXPECT_LE(std::abs(c), 1.0);
  }
}

TEST(ThresholdPropertyTest, PermutationEquivariance) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 9;
    const auto w = gaussian_vector(gen, d);
    const double b = 0.1 * trial - 1.0;
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<double> permuted(d);
    for (int i = 0; i < d; ++i) permuted[perm[i]] = w[i];
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << d); ++s) {
      std::uint64_t image = 0;
      for (int i = 0; i < d; ++i) {
        if ((s >> i) & 1u) image |= std::uint64_t{1} << perm[i];
      }
      EXPECT_EQ(fourier_coeff_threshold(ThresholdFn(permuted, b), SubsetMask(image, d)),
                fourier_coeff_threshold(ThresholdFn(w, b), SubsetMask(s, d)));
    }
  }
}

TEST(ThresholdPropertyTest, EvenCoefficientsVanishWithoutBias) {
  // 1{w.x > 0} - 1/2 is odd in x when ties have measure zero.
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 4 + trial % 12;
    const ThresholdFn t(gaussian_vector(gen, d), 0.0);
    for (int k = 2; k <= d; k += 2) {
      EXPECT_EQ(fourier_coeff_threshold(t, SubsetMask::prefix(k, d)), 0.0);
    }
  }
}

TEST(GaussianAvgSqCoeffTest, PairBoundIsTrivial) {
  const EstimateReport r = gaussian_avg_sq_coeff(6, SubsetMask::prefix(2, 6), 1.0, false, 200, 3);
  EXPECT_NEAR(r.bound_value, 6.0 * std::exp(-0.5), 1e-12);
  EXPECT_TRUE(r.bound_satisfied);
  EXPECT_EQ(r.num_samples, 200);
  EXPECT_EQ(r.seed, 3u);
}

TEST(GaussianAvgSqCoeffTest, ScaleInvariantAcrossSigma) {
  const SubsetMask s = SubsetMask::prefix(5, 10);
  const EstimateReport a = gaussian_avg_sq_coeff(10, s, 1.0, false, 300, 17);
  const EstimateReport b = gaussian_avg_sq_coeff(10, s, 7.0, false, 300, 17);
  const double joint = std::hypot(a.std_error, b.std_error);
  EXPECT_LE(std::abs(a.estimate - b.estimate), 3.0 * joint + 1e-15);
}

TEST(GaussianAvgSqCoeffTest, FullSetAtSixteen) {
  const EstimateReport r =
      gaussian_avg_sq_coeff(16, SubsetMask::full(16), 1.0, false, 2000, 0);
  EXPECT_NEAR(r.bound_value, 6.0 * std::exp(-4.0), 1e-12);
  // |S| = 16 is even and b = 0, so every sample is exactly zero.
  EXPECT_EQ(r.estimate, 0.0);
  EXPECT_TRUE(r.within_bound());
}

TEST(GaussianAvgSqCoeffTest, BiasedOddSubsetRespectsBound) {
  const EstimateReport r = gaussian_avg_sq_coeff(12, SubsetMask::prefix(7, 12), 1.0, true, 400, 1);
  EXPECT_NEAR(r.bound_value, 8.0 * std::exp(-7.0 / 4.0), 1e-12);
  EXPECT_GT(r.estimate, 0.0);
  EXPECT_TRUE(r.within_bound());
}

TEST(GaussianAvgSqCoeffTest, Deterministic) {
  const SubsetMask s = SubsetMask::prefix(3, 8);
  const auto a = gaussian_avg_sq_coeff(8, s, 1.0, true, 100, 99);
  const auto b = gaussian_avg_sq_coeff(8, s, 1.0, true, 100, 99);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(GaussianAvgSqCoeffTest, Preconditions) {
  EXPECT_THROW(gaussian_avg_sq_coeff(6, SubsetMask::prefix(1, 6), 1.0, false, 10, 0),
               std::invalid_argument);
  EXPECT_THROW(gaussian_avg_sq_coeff(6, SubsetMask::prefix(3, 6), 1.0, false, 1, 0),
               std::invalid_argument);
}

TEST(EstimateReportTest, JsonFieldsExactly) {
  const auto r = gaussian_avg_sq_coeff(6, SubsetMask::prefix(3, 6), 1.0, false, 20, 4);
  const nlohmann::json j = to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  EXPECT_EQ(keys, (std::vector<std::string>{"bound_satisfied", "bound_value", "estimate",
                                            "num_samples", "parameters", "seed", "std_error"}));
  const EstimateReport back = estimate_report_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.estimate, r.estimate);
  EXPECT_EQ(back.std_error, r.std_error);
  EXPECT_EQ(back.parameters, r.parameters);
}

TEST(HemisphereTest, ClosedFormEndpoints) {
  const CubePoint x(0b10110, 5);
  EXPECT_DOUBLE_EQ(hemisphere_overlap(x, x), 0.5);
  EXPECT_DOUBLE_EQ(hemisphere_overlap(x, x.negated()), 0.0);
  const CubePoint a = CubePoint::from_coordinates({1, 1, 1, 1});
  const CubePoint b = CubePoint::from_coordinates({1, 1, -1, -1});
  EXPECT_DOUBLE_EQ(hemisphere_overlap(a, b), 0.25);
}

TEST(HemisphereTest, MonteCarloEndpoints) {
  const CubePoint x(0b1011001101, 10);
  const auto same = hemisphere_overlap_mc(x, x, 20000, 1);
  EXPECT_LE(std::abs(same.estimate - 0.5), 4.0 * same.std_error);
  const auto opposite = hemisphere_overlap_mc(x, x.negated(), 20000, 1);
  EXPECT_EQ(opposite.estimate, 0.0);
}

TEST(HemisphereTest, MonteCarloMatchesClosedForm) {
  // d = 10 and x^T y = 2: six agreements, four disagreements.
  const CubePoint x(0b1111111111, 10);
  const CubePoint y(0b1111110000, 10);
  ASSERT_EQ(x.dot(y), 2);
  const auto r = hemisphere_overlap_mc(x, y, 20000, 5);
  const double closed = (std::numbers::pi - std::acos(0.2)) / (2.0 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(r.bound_value, closed);
  EXPECT_LE(std::abs(r.estimate - closed), 4.0 * r.std_error);
  EXPECT_TRUE(r.bound_satisfied);
}

TEST(HemisphereTest, RandomPairsWithinFourStandardErrors) {
  std::mt19937_64 gen(12);
  for (int d : {5, 10, 20}) {
    const std::uint64_t mask = (std::uint64_t{1} << d) - 1;
    for (int pair = 0; pair < 5; ++pair) {
      const CubePoint x(gen() & mask, d), y(gen() & mask, d);
      const auto r = hemisphere_overlap_mc(x, y, 5000, static_cast<std::uint64_t>(pair));
      EXPECT_LE(std::abs(r.estimate - hemisphere_overlap(x, y)),
                4.0 * r.std_error + 1e-12);
    }
  }
}

TEST(ArccosCoeffTest, LeadingTerms) {
  EXPECT_EQ(arccos_coeff(1), 1.0);
  EXPECT_EQ(arccos_coeff(2), 0.0);
  EXPECT_NEAR(arccos_coeff(3), 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(arccos_coeff(5), 3.0 / 40.0, 1e-12);
  EXPECT_THROW(arccos_coeff(0), std::invalid_argument);
}

TEST(ArccosCoeffTest, MatchesNumericDerivatives) {
  // arccos(z) = pi/2 - sum alpha_j z^j, so alpha_j = -arccos^{(j)}(0) / j!.
  auto f = [](double z) { return std::acos(z); };
  const double h3 = 1e-2;
  const double third = (f(2 * h3) - 2 * f(h3) + 2 * f(-h3) - f(-2 * h3)) / (2 * h3 * h3 * h3);
  EXPECT_NEAR(-third / 6.0, arccos_coeff(3), 1e-4);
  const double h5 = 5e-2;
  const double fifth = (f(3 * h5) - 4 * f(2 * h5) + 5 * f(h5) - 5 * f(-h5) + 4 * f(-2 * h5) -
                        f(-3 * h5)) /
                       (2 * std::pow(h5, 5));
  EXPECT_NEAR(-fifth / 120.0, arccos_coeff(5), 2e-3);
}

TEST(ArccosCoeffTest, LogGammaAgreesWithExactRatio) {
  for (int j = 1; j <= 200; ++j) {
    const double exact = static_cast<double>(oracle::arccos_coeff_recurrence(j));
    if (j % 2 == 0) {
      EXPECT_EQ(arccos_coeff(j), 0.0);
    } else {
      EXPECT_NEAR(arccos_coeff(j), exact, 1e-12 * exact) << "j=" << j;
    }
  }
}

TEST(ArccosCoeffTest, StirlingBound) {
  for (int j = 3; j <= 200; ++j) EXPECT_LT(arccos_coeff(j), arccos_coeff_bound(j));
}

TEST(ArccosCoeffTest, SeriesReconstructsArccos) {
  for (double z : {0.5, -0.5}) {
    double sum = std::numbers::pi / 2.0;
    for (int j = 1; j <= 60; ++j) sum -= arccos_coeff(j) * std::pow(z, j);
    EXPECT_NEAR(sum, std::acos(z), 1e-6);
  }
}

TEST(ReluSumParityCoeffTest, ClosedFormMatchesEnumeration) {
  EXPECT_NEAR(relu_sum_parity_coeff(4), -0.25, 1e-15);
  EXPECT_NEAR(relu_sum_parity_coeff(6), 6.0 / 32.0, 1e-15);
  for (int k = 4; k <= 16; k += 2) {
    EXPECT_NEAR(relu_sum_parity_coeff(k), oracle::relu_sum_parity(k), 1e-10) << "k=" << k;
  }
  EXPECT_EQ(oracle::relu_sum_parity(4), -0.25);
  EXPECT_EQ(oracle::relu_sum_parity(6), 0.1875);
}

TEST(ReluSumParityCoeffTest, MagnitudeLowerBound) {
  for (int k = 4; k <= 40; k += 2) {
    EXPECT_GE(std::abs(relu_sum_parity_coeff(k)), 1.0 / (4.0 * std::sqrt(k))) << "k=" << k;
  }
}

TEST(ReluSumParityCoeffTest, Preconditions) {
  EXPECT_THROW(relu_sum_parity_coeff(5), std::invalid_argument);
  EXPECT_THROW(relu_sum_parity_coeff(2), std::invalid_argument);
  EXPECT_THROW(relu_sum_parity_coeff(42), std::invalid_argument);
}

std::vector<double> relu_of_sum(int d, const SubsetMask& s) {
  return tabulate(
      [&](const CubePoint& x) {
        int sum = 0;
        for (int i : s.indices()) sum += x.coordinate(i);
        return std::max(0.0, static_cast<double>(sum));
      },
      d);
}

TEST(DiscreteDerivativeTest, ParityIdentities) {
  const int d = 6;
  const SubsetMask s = SubsetMask::from_indices({0, 2, 3}, d);
  const auto table = tabulate([&](const CubePoint& x) { return parity(s, x); }, d);
  const auto in = discrete_derivative(table, 2);
  const auto out = discrete_derivative(table, 1);
  const SubsetMask reduced = s.with_toggled(2);
  for (std::uint64_t x = 0; x < table.size(); ++x) {
    EXPECT_EQ(in[x], parity_bits(reduced.bits(), x));
    EXPECT_EQ(out[x], 0.0);
  }
  EXPECT_THROW(discrete_derivative(table, 6), std::invalid_argument);
}

TEST(DiscreteDerivativeTest, IndependentOfDifferentiatedCoordinate) {
  std::mt19937_64 gen(13);
  std::vector<double> table(64);
  for (double& v : table) v = std::normal_distribution<double>()(gen);
  for (int i = 0; i < 6; ++i) {
    const auto dv = discrete_derivative(table, i);
    for (std::uint64_t x = 0; x < 64; ++x) EXPECT_EQ(dv[x], dv[x ^ (1u << i)]);
  }
}

TEST(DiscreteDerivativeTest, ReluOfSumGivesShiftedMajority) {
  for (int k = 3; k <= 9; ++k) {
    const int d = k + 1;
    const SubsetMask s = SubsetMask::prefix(k, d);
    const auto g = relu_of_sum(d, s);
    for (int i : s.indices()) {
      const auto dg = discrete_derivative(g, i);
      const SubsetMask rest = s.with_toggled(i);
      for (std::uint64_t x = 0; x < g.size(); ++x) {
        int sum = 0;
        for (int r : rest.indices()) sum += CubePoint(x, d).coordinate(r);
        const double maj = sum > 0 ? 1.0 : (sum < 0 ? -1.0 : 0.0);
        EXPECT_EQ(dg[x], (maj + 1.0) / 2.0);
      }
    }
  }
}

TEST(DiscreteDerivativeTest, FourierCoefficientShifts) {
  std::mt19937_64 gen(14);
  for (int d = 2; d <= 12; d += 2) {
    std::vector<double> g(std::size_t{1} << d);
    for (double& v : g) v = std::normal_distribution<double>()(gen);
    const Spectrum spec = walsh_hadamard(g);
    for (int rep = 0; rep < 4; ++rep) {
      const std::uint64_t s = (gen() & ((std::uint64_t{1} << d) - 1)) | 1u;
      for (int i = 0; i < d; ++i) {
        if (!((s >> i) & 1u)) continue;
        const Spectrum dspec = walsh_hadamard(discrete_derivative(g, i));
        EXPECT_NEAR(dspec[s & ~(std::uint64_t{1} << i)], spec[s], 1e-10);
      }
    }
  }
}

}  // namespace
}  // namespace paritylab
