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

#include "paritylab/objectives.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "paritylab/oracle.hpp"

namespace paritylab {
namespace {

constexpr double kStep = 1e-5;

OneHiddenLayerNet random_net(std::mt19937_64& gen, int n, int d, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  OneHiddenLayerNet net(n, d);
  std::vector<double> theta(net.parameter_count());
  for (double& v : theta) v = normal(gen);
  net.assign_flat(theta);
  return net;
}

SingleNeuron random_neuron(std::mt19937_64& gen, int d, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> w(d);
  for (double& v : w) v = normal(gen);
  return SingleNeuron(gen() & 1u ? 1 : -1, w, normal(gen));
}

TEST(LinearLossTest, MatchesBruteForce) {
  std::mt19937_64 gen(31);
  for (int d = 1; d <= 12; ++d) {
    const OneHiddenLayerNet net = random_net(gen, 3, d, 1.0);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << d); s += 1 + s / 3) {
      EXPECT_NEAR(linear_loss(net, SubsetMask(s, d)), oracle::linear_loss(net, s), 1e-12);
    }
  }
}

TEST(LinearLossTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 gen(32);
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 30; ++trial) {
    const int d = 3 + trial % 8;
    const OneHiddenLayerNet net = random_net(gen, 2 + trial % 3, d, 1.0);
    if (oracle::min_abs_preactivation(net) <= 10 * kStep) continue;
    const SubsetMask s(gen() & ((std::uint64_t{1} << d) - 1), d);
    const auto fd = oracle::central_difference(
        [&](std::span<const double> th) {
          return oracle::linear_loss(OneHiddenLayerNet::from_flat(net.width(), d, th), s.bits());
        },
        net.flatten(), kStep);
    const auto g = linear_loss_grad(net, s).flatten();
    ASSERT_EQ(g.size(), fd.size());
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g[i], fd[i], 1e-6);
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST(LinearLossTest, CombinedAgreesWithSeparate) {
  std::mt19937_64 gen(33);
  const OneHiddenLayerNet net = random_net(gen, 4, 9, 0.7);
  const SubsetMask s = SubsetMask::prefix(5, 9);
  const auto both = linear_loss_and_grad(net, s);
  EXPECT_EQ(both.loss, linear_loss(net, s));
  EXPECT_EQ(both.grad.flatten(), linear_loss_grad(net, s).flatten());
}

TEST(LinearLossTest, SmallCases) {
  EXPECT_EQ(linear_loss(OneHiddenLayerNet(3, 5), SubsetMask::prefix(2, 5)), 0.0);
  std::mt19937_64 gen(38);
  OneHiddenLayerNet net = random_net(gen, 3, 7, 1.0);
  const SubsetMask s = SubsetMask::prefix(3, 7);
  const double before = linear_loss(net, s);
  for (double& u : net.u()) u = -u;
  EXPECT_EQ(linear_loss(net, s), -before);

  // Row 1 has u = 0; row 2 has w = 0, b = 1, so it is the constant 1.
  OneHiddenLayerNet mixed(3, {0.5, 0.0, 2.0}, {1, -1, 0.5, 0.3, 0.2, -0.1, 0, 0, 0},
                          {0.1, 0.4, 1.0});
  const NetGradient h = linear_loss_grad(mixed, SubsetMask::prefix(2, 3));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(h.dw[3 + i], 0.0);
  EXPECT_EQ(h.db[1], 0.0);
  EXPECT_EQ(h.du[2], 0.0);
  EXPECT_EQ(h.db[2], 0.0);
}

TEST(LinearLossTest, DimensionMismatchThrows) {
  EXPECT_THROW(linear_loss(OneHiddenLayerNet(1, 3), SubsetMask::full(4)), std::invalid_argument);
}

TEST(SquaredLossTest, MatchesBruteForce) {
  std::mt19937_64 gen(34);
  for (int d = 1; d <= 12; ++d) {
    const SingleNeuron neuron = random_neuron(gen, d, 1.0);
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << d); s += 1 + s / 3) {
      EXPECT_NEAR(squared_loss_single(neuron, SubsetMask(s, d)),
                  oracle::squared_loss(neuron, s), 1e-12);
    }
  }
}

TEST(SquaredLossTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 gen(35);
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 30; ++trial) {
    const int d = 2 + trial % 9;
    const SingleNeuron neuron = random_neuron(gen, d, 1.0);
    if (oracle::min_abs_preactivation(neuron) <= 10 * kStep) continue;
    std::uint64_t bits = gen() & ((std::uint64_t{1} << d) - 1);
    if (bits == 0) bits = 1;
    const SubsetMask s(bits, d);
    const auto fd = oracle::central_difference(
        [&](std::span<const double> th) {
          SingleNeuron copy = neuron;
          copy.assign_flat(th);
          return oracle::squared_loss(copy, bits);
        },
        neuron.flatten(), kStep);
    const auto g = squared_loss_single_grad(neuron, s).flatten();
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g[i], fd[i], 1e-6);
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST(SquaredLossTest, ExpandedIdentity) {
  // F = E[relu^2] - 2 sign E[relu p_S] + 1.
  std::mt19937_64 gen(36);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 3 + trial % 8;
    const SingleNeuron neuron = random_neuron(gen, d, 1.0);
    const SubsetMask s = SubsetMask::prefix(1 + trial % d, d);
    const OneHiddenLayerNet as_net(d, {static_cast<double>(neuron.sign)}, neuron.w, {neuron.b});
    const double expected =
        oracle::mean_squared_relu(neuron.w, neuron.b) + 2.0 * oracle::linear_loss(as_net, s.bits()) + 1.0;
    EXPECT_NEAR(squared_loss_single(neuron, s), expected, 1e-12);
  }
}

TEST(SquaredLossTest, SmallCases) {
  const SingleNeuron zero(1, std::vector<double>(4, 0.0), 0.0);
  EXPECT_EQ(squared_loss_single(zero, SubsetMask::prefix(2, 4)), 1.0);
  const NeuronGradient g = squared_loss_single_grad(zero, SubsetMask::prefix(2, 4));
  EXPECT_EQ(g.norm(), 0.0);
  const SingleNeuron e1(1, {1.0, 0.0, 0.0}, 0.0);
  EXPECT_EQ(squared_loss_single(e1, SubsetMask::from_indices({1}, 3)), 1.5);
}

TEST(SquaredLossTest, UnbiasedGradientClosedForm) {
  // At b = 0 and sign +1: dF/dw = w - 2 E[p_S 1{w.x > 0} x].
  std::mt19937_64 gen(39);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 3 + trial % 6;
    SingleNeuron neuron = random_neuron(gen, d, 1.0);
    neuron.sign = 1;
    neuron.b = 0.0;
    const SubsetMask s = SubsetMask::prefix(1 + trial % d, d);
    const NeuronGradient g = squared_loss_single_grad(neuron, s);
    for (int i = 0; i < d; ++i) {
      double corr = 0.0;
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << d); ++x) {
        const CubePoint pt(x, d);
        if (oracle::preactivation(neuron.w, 0.0, x) > 0.0) {
          corr += parity(s, pt) * pt.coordinate(i);
        }
      }
      corr /= static_cast<double>(std::uint64_t{1} << d);
      EXPECT_NEAR(g.dw[i], neuron.w[i] - 2.0 * corr, 1e-12);
    }
  }
}

TEST(SquaredLossTest, NeedsNonemptySubset) {
  EXPECT_THROW(squared_loss_single(SingleNeuron(1, {1.0, 1.0}, 0.0), SubsetMask::empty(2)),
               std::invalid_argument);
}

TEST(MeanSquaredReluTest, UnbiasedIsHalfSquaredNorm) {
  // z and -z are equally likely and exactly one of them is positive.
  std::mt19937_64 gen(37);
  for (int d = 1; d <= 16; ++d) {
    std::normal_distribution<double> normal;
    std::vector<double> w(d);
    double sq = 0.0;
    for (double& v : w) {
      v = normal(gen);
      sq += v * v;
    }
    EXPECT_NEAR(mean_squared_relu(w, 0.0), sq / 2.0, 1e-12 * std::max(1.0, sq));
    EXPECT_NEAR(mean_squared_relu(w, 0.3), oracle::mean_squared_relu(w, 0.3), 1e-12 * (1 + sq));
  }
}

TEST(GradNormStatsTest, DecaysWithSubsetSize) {
  const NetShape arch{4, 16};
  double previous = std::numeric_limits<double>::infinity();
  for (int k : {1, 3, 7}) {
    const GradNormStats st =
        grad_norm_gaussian_stats(arch, SubsetMask::prefix(k, 16), 0.5, 60, 3);
    EXPECT_LT(st.grad_norm.estimate, previous) << "k=" << k;
    previous = st.grad_norm.estimate;
    EXPECT_NEAR(st.grad_norm.bound_value, std::exp(-k / 9.0), 1e-15);
    EXPECT_NEAR(st.du_abs.bound_value, 5.0 * 16 * 0.5 * std::exp(-k / 8.0), 1e-12);
    EXPECT_FALSE(st.grad_norm.parameters.at("in_bound_regime").get<bool>());
    EXPECT_EQ(st.grad_norm.num_samples, 60);
  }
}

TEST(GradNormStatsTest, VanishesAsSigmaShrinks) {
  const auto st = grad_norm_gaussian_stats(NetShape{3, 8}, SubsetMask::prefix(4, 8), 1e-9, 20, 0);
  EXPECT_LT(st.grad_norm.estimate, 1e-7);
}

TEST(GradNormStatsTest, SecondMomentDominatesSquaredMean) {
  const NetShape arch{3, 10};
  const SubsetMask s = SubsetMask::prefix(4, 10);
  const auto first = grad_norm_gaussian_stats(arch, s, 1.0, 50, 8);
  const auto second = grad_norm_gaussian_stats(arch, s, 1.0, 50, 8, true);
  EXPECT_GE(second.grad_norm.estimate, first.grad_norm.estimate * first.grad_norm.estimate);
  EXPECT_EQ(second.du_abs.estimate, first.du_abs.estimate);
}

TEST(GradNormStatsTest, Seeded) {
  const NetShape arch{2, 8};
  const SubsetMask s = SubsetMask::prefix(3, 8);
  const auto a = grad_norm_gaussian_stats(arch, s, 1.0, 20, 4);
  const auto b = grad_norm_gaussian_stats(arch, s, 1.0, 20, 4);
  EXPECT_EQ(a.grad_norm.estimate, b.grad_norm.estimate);
  EXPECT_EQ(a.du_abs.std_error, b.du_abs.std_error);
}

TEST(RandomLossStatsTest, ZeroWidthNeverExceeds) {
  const auto r = random_loss_stats(NetShape{0, 12}, SubsetMask::prefix(6, 12), 1.0, 10, 0);
  EXPECT_EQ(r.estimate, 0.0);
  EXPECT_NEAR(r.bound_value, std::exp(-6.0 / 18.0), 1e-15);
}

TEST(RandomLossStatsTest, LargeSubsetRarelyExceeds) {
  const auto r = random_loss_stats(NetShape{4, 18}, SubsetMask::prefix(17, 18), 0.25, 100, 2);
  EXPECT_TRUE(r.within_bound());
  EXPECT_LT(r.parameters.at("mean_abs_loss").get<double>(), r.bound_value);
}

TEST(RandomLossStatsTest, ExplicitEpsilon) {
  const auto r = random_loss_stats(NetShape{3, 6}, SubsetMask::prefix(1, 6), 1.0, 50, 1, 1e-9);
  EXPECT_EQ(r.bound_value, 1e-9);
  EXPECT_GT(r.estimate, 0.5);
}

}  // namespace
}  // namespace paritylab
