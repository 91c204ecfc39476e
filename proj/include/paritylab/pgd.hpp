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

// Perturbed gradient descent on the exact population losses:
//
//   theta_0 ~ N(0, sigma^2 I),  theta_{t+1} = theta_t - eta grad F_S(theta_t) - xi_t,
//
// with xi_t ~ N(0, sigma^2 I) i.i.d. theta_0 is drawn from substream index 0
// of the PGD stream and xi_t from index t + 1, so every variant below that
// shares a seed also shares the exact noise sequence.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "paritylab/hypercube.hpp"

namespace paritylab {

enum class LossKind { kLinearOneHidden, kSquaredSingle };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

struct PgdConfig {
  double eta = 0.05;
  double sigma = 0.1;
  std::int64_t steps = 0;  // T
  std::uint64_t seed = 0;
  LossKind loss = LossKind::kLinearOneHidden;
  int width = 1;  // n; ignored for the single neuron
  int dim = 1;    // d
  int sign = 1;   // single-neuron output sign
  SubsetMask subset;
  std::int64_t record_every = 1;

  // Throws std::invalid_argument on an unusable configuration.
  void validate() const;
  // Non-fatal issues, e.g. eta >= 2 with the squared loss.
  std::vector<std::string> warnings() const;
  std::size_t parameter_count() const;
};

nlohmann::json to_json(const PgdConfig& config);
PgdConfig pgd_config_from_json(const nlohmann::json& j);

struct Trajectory {
  std::vector<std::int64_t> steps;
  std::vector<double> losses;
  std::vector<double> grad_norms;
  std::vector<double> final_theta;
  PgdConfig config;
  nlohmann::json metadata = nlohmann::json::object();
};

nlohmann::json to_json(const Trajectory& trajectory);

Trajectory run_pgd(const PgdConfig& config);

// Gradients are replaced by their smooth part whenever the remainder has
// norm <= eps_trunc. For the linear loss the smooth part is 0 (this is the
// [z]_eps operator on the whole gradient); for the squared single-neuron
// loss it is theta itself and only the correlation remainder
// grad - theta is truncated. eps_trunc = 0 reproduces run_pgd bit for bit,
// eps_trunc = +inf gives gaussian_walk.
Trajectory run_truncated_pgd(const PgdConfig& config, double eps_trunc);

struct DivergenceReport {
  double max_param_dist = 0.0;
  double final_param_dist = 0.0;
  double final_loss_gap = 0.0;
  double tv_bound = 0.0;  // eps_trunc * eta * sqrt(T) / (2 sigma)
  double eps_trunc = 0.0;
  std::int64_t truncated_steps = 0;
  double final_theta_norm = 0.0;
  PgdConfig config;
};

// Runs run_pgd and run_truncated_pgd in lockstep on the same noise.
DivergenceReport coupled_divergence(const PgdConfig& config, double eps_trunc);
nlohmann::json to_json(const DivergenceReport& report);

// Gradient-free baseline on the same noise: theta_{t+1} = theta_t - xi_t for
// the linear loss, theta_{t+1} = theta_t - eta theta_t - xi_t (the damped
// walk) for the squared loss. Losses and gradient norms are still recorded.
Trajectory gaussian_walk(const PgdConfig& config);

}  // namespace paritylab
