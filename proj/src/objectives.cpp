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
#include <stdexcept>
#include <string>

#include "paritylab/rng.hpp"
#include "paritylab/split_cube.hpp"

namespace paritylab {
namespace {

void check_net(const OneHiddenLayerNet& net, const SubsetMask& s) {
  if (net.dim() != s.dim()) {
    throw std::invalid_argument("network dimension " + std::to_string(net.dim()) +
                                " does not match subset dimension " + std::to_string(s.dim()));
  }
  check_cube_dim(net.dim());
}

void check_neuron(const SingleNeuron& neuron, const SubsetMask& s) {
  if (neuron.dim() != s.dim()) {
    throw std::invalid_argument("neuron dimension " + std::to_string(neuron.dim()) +
                                " does not match subset dimension " + std::to_string(s.dim()));
  }
  check_cube_dim(neuron.dim());
  if (s.is_empty()) throw std::invalid_argument("squared loss needs |S| >= 1");
}

double euclidean_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

void check_shape(const NetShape& arch, const SubsetMask& s) {
  if (arch.width < 0) throw std::invalid_argument("network width must be >= 0");
  if (arch.dim != s.dim()) throw std::invalid_argument("architecture dimension mismatch");
  check_cube_dim(arch.dim);
}

OneHiddenLayerNet gaussian_net(const NetShape& arch, double scale, std::uint64_t seed,
                               Stream stream, std::uint64_t index) {
  OneHiddenLayerNet net(arch.width, arch.dim);
  std::vector<double> theta(net.parameter_count());
  NormalStream rng(seed, stream, index);
  rng.fill(theta, scale);
  net.assign_flat(theta);
  return net;
}

}  // namespace

std::vector<double> NetGradient::flatten() const {
  std::vector<double> out;
  out.reserve(du.size() + dw.size() + db.size());
  out.insert(out.end(), du.begin(), du.end());
  out.insert(out.end(), dw.begin(), dw.end());
  out.insert(out.end(), db.begin(), db.end());
  return out;
}

double NetGradient::norm() const { return euclidean_norm(flatten()); }

std::vector<double> NeuronGradient::flatten() const {
  std::vector<double> out(dw);
  out.push_back(db);
  return out;
}

double NeuronGradient::norm() const { return euclidean_norm(flatten()); }

NetLossAndGrad linear_loss_and_grad(const OneHiddenLayerNet& net, const SubsetMask& s) {
  check_net(net, s);
  const int n = net.width();
  const int d = net.dim();
  NetLossAndGrad out;
  out.grad.du.assign(n, 0.0);
  out.grad.dw.assign(static_cast<std::size_t>(n) * d, 0.0);
  out.grad.db.assign(n, 0.0);
  double correlation = 0.0;
  for (int j = 0; j < n; ++j) {
    const SplitCube cube(net.w_row(j), net.b()[j]);
    const double u = net.u()[j];
    const double relu_corr = std::ldexp(cube.signed_relu_sum(s.bits()), -d);
    correlation += u * relu_corr;
    out.grad.du[j] = -relu_corr;
    out.grad.db[j] = -u * std::ldexp(static_cast<double>(cube.signed_active_count(s.bits())), -d);
    for (int i = 0; i < d; ++i) {
      const std::uint64_t toggled = s.bits() ^ (std::uint64_t{1} << i);
      out.grad.dw[static_cast<std::size_t>(j) * d + i] =
          -u * std::ldexp(static_cast<double>(cube.signed_active_count(toggled)), -d);
    }
  }
  out.loss = -correlation;
  return out;
}

double linear_loss(const OneHiddenLayerNet& net, const SubsetMask& s) {
  check_net(net, s);
  double correlation = 0.0;
  for (int j = 0; j < net.width(); ++j) {
    const SplitCube cube(net.w_row(j), net.b()[j]);
    correlation += net.u()[j] * std::ldexp(cube.signed_relu_sum(s.bits()), -net.dim());
  }
  return -correlation;
}

NetGradient linear_loss_grad(const OneHiddenLayerNet& net, const SubsetMask& s) {
  return linear_loss_and_grad(net, s).grad;
}

NeuronLossAndGrad squared_loss_single_and_grad(const SingleNeuron& neuron, const SubsetMask& s) {
  check_neuron(neuron, s);
  const int d = neuron.dim();
  const SplitCube cube(neuron.w, neuron.b);
  const ReluMoments m = cube.relu_moments();
  const double sign = neuron.sign;
  const double relu_corr = std::ldexp(cube.signed_relu_sum(s.bits()), -d);

  NeuronLossAndGrad out;
  out.loss = std::ldexp(m.sum_relu_sq, -d) - 2.0 * sign * relu_corr + 1.0;
  out.grad.dw.resize(d);
  for (int i = 0; i < d; ++i) {
    const std::uint64_t toggled = s.bits() ^ (std::uint64_t{1} << i);
    const double corr = std::ldexp(static_cast<double>(cube.signed_active_count(toggled)), -d);
    out.grad.dw[i] = 2.0 * std::ldexp(m.sum_relu_x[i], -d) - 2.0 * sign * corr;
  }
  const double corr_b = std::ldexp(static_cast<double>(cube.signed_active_count(s.bits())), -d);
  out.grad.db = 2.0 * std::ldexp(m.sum_relu, -d) - 2.0 * sign * corr_b;
  return out;
}

double squared_loss_single(const SingleNeuron& neuron, const SubsetMask& s) {
  check_neuron(neuron, s);
  const int d = neuron.dim();
  const SplitCube cube(neuron.w, neuron.b);
  const ReluMoments m = cube.relu_moments();
  return std::ldexp(m.sum_relu_sq, -d) -
         2.0 * neuron.sign * std::ldexp(cube.signed_relu_sum(s.bits()), -d) + 1.0;
}

NeuronGradient squared_loss_single_grad(const SingleNeuron& neuron, const SubsetMask& s) {
  return squared_loss_single_and_grad(neuron, s).grad;
}

double mean_squared_relu(std::span<const double> w, double b) {
  const SplitCube cube(w, b);
  return std::ldexp(cube.relu_moments().sum_relu_sq, -cube.dim());
}

double hardness_epsilon(int subset_size) { return std::exp(-subset_size / 18.0); }

GradNormStats grad_norm_gaussian_stats(const NetShape& arch, const SubsetMask& s, double sigma,
                                       std::int64_t num_samples, std::uint64_t seed,
                                       bool second_moment) {
  check_shape(arch, s);
  if (num_samples < 2) throw std::invalid_argument("grad_norm_gaussian_stats: need >= 2 samples");
  if (!(sigma > 0.0)) throw std::invalid_argument("grad_norm_gaussian_stats: sigma must be > 0");

  std::vector<double> norms(static_cast<std::size_t>(num_samples));
  std::vector<double> du_abs(static_cast<std::size_t>(num_samples));
  for (std::int64_t i = 0; i < num_samples; ++i) {
    const OneHiddenLayerNet net =
        gaussian_net(arch, sigma, seed, Stream::kGradStats, static_cast<std::uint64_t>(i));
    const NetGradient g = linear_loss_grad(net, s);
    const double norm = g.norm();
    norms[static_cast<std::size_t>(i)] = second_moment ? norm * norm : norm;
    double du_sum = 0.0;
    for (double v : g.du) du_sum += std::abs(v);
    du_abs[static_cast<std::size_t>(i)] = arch.width > 0 ? du_sum / arch.width : 0.0;
  }

  const int k = s.cardinality();
  const bool in_regime =
      arch.width > 0 && arch.dim > 30 &&
      k >= 72.0 * std::log(6.0 * arch.width * arch.dim * sigma);
  const nlohmann::json base = {
      {"d", arch.dim},     {"n", arch.width},   {"S_size", k},
      {"sigma", sigma},    {"S_bits", s.bits()}, {"in_bound_regime", in_regime},
  };

  GradNormStats out;
  nlohmann::json p1 = base;
  p1["statistic"] = second_moment ? "E||grad F_S||^2" : "E||grad F_S||";
  out.grad_norm = make_upper_bound_report(norms, std::exp(-k / 9.0), seed, p1);
  nlohmann::json p2 = base;
  p2["statistic"] = "E|dF_S/du_j| (averaged over j)";
  out.du_abs = make_upper_bound_report(du_abs, 5.0 * arch.dim * sigma * std::exp(-k / 8.0),
                                       seed, p2);
  return out;
}

EstimateReport random_loss_stats(const NetShape& arch, const SubsetMask& s, double variance,
                                 std::int64_t num_samples, std::uint64_t seed, double epsilon) {
  check_shape(arch, s);
  if (num_samples < 2) throw std::invalid_argument("random_loss_stats: need >= 2 samples");
  if (!(variance > 0.0)) throw std::invalid_argument("random_loss_stats: variance must be > 0");
  const double eps = epsilon > 0.0 ? epsilon : hardness_epsilon(s.cardinality());
  const double scale = std::sqrt(variance);

  std::vector<double> exceed(static_cast<std::size_t>(num_samples));
  double abs_sum = 0.0;
  for (std::int64_t i = 0; i < num_samples; ++i) {
    const OneHiddenLayerNet net =
        gaussian_net(arch, scale, seed, Stream::kRandomLoss, static_cast<std::uint64_t>(i));
    const double f = std::abs(linear_loss(net, s));
    abs_sum += f;
    exceed[static_cast<std::size_t>(i)] = f >= eps ? 1.0 : 0.0;
  }
  nlohmann::json params = {
      {"d", arch.dim},
      {"n", arch.width},
      {"S_size", s.cardinality()},
      {"variance", variance},
      {"epsilon", eps},
      {"mean_abs_loss", abs_sum / static_cast<double>(num_samples)},
      {"statistic", "Pr(|F_S(theta)| >= epsilon)"},
  };
  return make_upper_bound_report(exceed, eps, seed, std::move(params));
}

}  // namespace paritylab
