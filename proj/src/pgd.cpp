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

#include "paritylab/pgd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "paritylab/estimate_report.hpp"
#include "paritylab/objectives.hpp"
#include "paritylab/relu_nets.hpp"
#include "paritylab/rng.hpp"

namespace paritylab {
namespace {

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

// Evaluates the configured loss on a flat parameter vector.
class Objective {
 public:
  explicit Objective(const PgdConfig& config) : config_(config) {}

  LossAndGrad evaluate(const std::vector<double>& theta) const {
    LossAndGrad out;
    if (config_.loss == LossKind::kLinearOneHidden) {
      const auto net = OneHiddenLayerNet::from_flat(config_.width, config_.dim, theta);
      auto r = linear_loss_and_grad(net, config_.subset);
      out.loss = r.loss;
      out.grad = r.grad.flatten();
    } else {
      SingleNeuron neuron(config_.sign, std::vector<double>(config_.dim, 0.0), 0.0);
      neuron.assign_flat(theta);
      auto r = squared_loss_single_and_grad(neuron, config_.subset);
      out.loss = r.loss;
      out.grad = r.grad.flatten();
    }
    return out;
  }

  // The part of the gradient kept under truncation.
  void smooth_part(const std::vector<double>& theta, std::vector<double>& out) const {
    if (config_.loss == LossKind::kSquaredSingle) {
      out = theta;
    } else {
      out.assign(theta.size(), 0.0);
    }
  }

 private:
  const PgdConfig& config_;
};

double norm_of_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = a[i] - b[i];
    acc += e * e;
  }
  return std::sqrt(acc);
}

double norm(const std::vector<double>& a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return std::sqrt(acc);
}

std::vector<double> draw_noise(const PgdConfig& config, std::uint64_t index) {
  std::vector<double> v(config.parameter_count());
  NormalStream rng(config.seed, Stream::kPgd, index);
  rng.fill(v, config.sigma);
  return v;
}

enum class Mode { kFull, kTruncated, kWalk };

// One PGD-family process advanced step by step.
class Process {
 public:
  Process(const PgdConfig& config, Mode mode, double eps_trunc)
      : config_(config), objective_(config), mode_(mode), eps_(eps_trunc) {
    theta_ = draw_noise(config, 0);
  }

  const std::vector<double>& theta() const { return theta_; }
  std::int64_t truncated_steps() const { return truncated_; }

  // Loss and gradient at the current iterate.
  const LossAndGrad& current() {
    if (!cached_) {
      eval_ = objective_.evaluate(theta_);
      cached_ = true;
    }
    return eval_;
  }

  void step(const std::vector<double>& xi) {
    if (mode_ == Mode::kWalk) {
      objective_.smooth_part(theta_, direction_);
    } else {
      const LossAndGrad& e = current();
      if (mode_ == Mode::kFull) {
        direction_ = e.grad;
      } else {
        objective_.smooth_part(theta_, direction_);
        double rem = 0.0;
        for (std::size_t k = 0; k < theta_.size(); ++k) {
          const double r = e.grad[k] - direction_[k];
          rem += r * r;
        }
        if (std::sqrt(rem) > eps_) {
          direction_ = e.grad;
        } else {
          ++truncated_;
        }
      }
    }
    for (std::size_t k = 0; k < theta_.size(); ++k) {
      theta_[k] = theta_[k] - config_.eta * direction_[k] - xi[k];
    }
    cached_ = false;
  }

 private:
  const PgdConfig& config_;
  Objective objective_;
  Mode mode_;
  double eps_;
  std::vector<double> theta_;
  std::vector<double> direction_;
  LossAndGrad eval_;
  bool cached_ = false;
  std::int64_t truncated_ = 0;
};

bool is_recorded(const PgdConfig& config, std::int64_t t) {
  return t % config.record_every == 0 || t == config.steps;
}

Trajectory run_process(const PgdConfig& config, Mode mode, double eps_trunc) {
  config.validate();
  Trajectory traj;
  traj.config = config;
  Process process(config, mode, eps_trunc);
  for (std::int64_t t = 0;; ++t) {
    if (is_recorded(config, t)) {
      const LossAndGrad& e = process.current();
      traj.steps.push_back(t);
      traj.losses.push_back(e.loss);
      traj.grad_norms.push_back(norm(e.grad));
    }
    if (t == config.steps) break;
    process.step(draw_noise(config, static_cast<std::uint64_t>(t) + 1));
  }
  traj.final_theta = process.theta();
  traj.metadata["rng"] = std::string(kRngMethod);
  traj.metadata["warnings"] = config.warnings();
  switch (mode) {
    case Mode::kFull:
      traj.metadata["process"] = "pgd";
      break;
    case Mode::kTruncated:
      traj.metadata["process"] = "truncated-pgd";
      traj.metadata["eps_trunc"] = finite_or_null(eps_trunc);
      traj.metadata["truncated_steps"] = process.truncated_steps();
      break;
    case Mode::kWalk:
      traj.metadata["process"] =
          config.loss == LossKind::kSquaredSingle ? "damped-gaussian-walk" : "gaussian-walk";
      break;
  }
  return traj;
}

}  // namespace

std::string to_string(LossKind kind) {
  return kind == LossKind::kLinearOneHidden ? "linear-onehidden" : "squared-single";
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "linear-onehidden") return LossKind::kLinearOneHidden;
  if (name == "squared-single") return LossKind::kSquaredSingle;
  throw std::invalid_argument("unknown loss \"" + name +
                              "\" (expected linear-onehidden or squared-single)");
}

void PgdConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be > 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be > 0");
  if (steps < 0) throw std::invalid_argument("T must be >= 0");
  if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  check_cube_dim(dim);
  if (subset.dim() != dim) throw std::invalid_argument("subset dimension does not match d");
  if (loss == LossKind::kLinearOneHidden && width < 0) {
    throw std::invalid_argument("width must be >= 0");
  }
  if (loss == LossKind::kSquaredSingle) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    if (subset.is_empty()) throw std::invalid_argument("squared loss needs |S| >= 1");
  }
}

std::vector<std::string> PgdConfig::warnings() const {
  std::vector<std::string> out;
  if (loss == LossKind::kSquaredSingle && eta >= 2.0) {
    out.push_back("eta >= 2: the damped walk (1 - eta)^t does not contract");
  }
  return out;
}

std::size_t PgdConfig::parameter_count() const {
  if (loss == LossKind::kSquaredSingle) return static_cast<std::size_t>(dim) + 1;
  return static_cast<std::size_t>(width) * (static_cast<std::size_t>(dim) + 2);
}

nlohmann::json to_json(const PgdConfig& c) {
  return {{"loss", to_string(c.loss)},
          {"eta", c.eta},
          {"sigma", c.sigma},
          {"T", c.steps},
          {"seed", c.seed},
          {"n", c.width},
          {"d", c.dim},
          {"sign", c.sign},
          {"S", c.subset.indices()},
          {"record_every", c.record_every}};
}

PgdConfig pgd_config_from_json(const nlohmann::json& j) {
  PgdConfig c;
  c.loss = loss_kind_from_string(j.at("loss").get<std::string>());
  c.eta = j.at("eta").get<double>();
  c.sigma = j.at("sigma").get<double>();
  c.steps = j.at("T").get<std::int64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.width = j.value("n", 1);
  c.dim = j.at("d").get<int>();
  c.sign = j.value("sign", 1);
  c.subset = SubsetMask::from_indices(j.at("S").get<std::vector<int>>(), c.dim);
  c.record_every = j.value("record_every", std::int64_t{1});
  c.validate();
  return c;
}

nlohmann::json to_json(const Trajectory& t) {
  nlohmann::json losses = nlohmann::json::array();
  nlohmann::json norms = nlohmann::json::array();
  for (double v : t.losses) losses.push_back(finite_or_null(v));
  for (double v : t.grad_norms) norms.push_back(finite_or_null(v));
  return {{"config", to_json(t.config)},
          {"steps", t.steps},
          {"losses", losses},
          {"grad_norms", norms},
          {"final_theta", t.final_theta},
          {"metadata", t.metadata}};
}

Trajectory run_pgd(const PgdConfig& config) { return run_process(config, Mode::kFull, 0.0); }

Trajectory run_truncated_pgd(const PgdConfig& config, double eps_trunc) {
  if (!(eps_trunc >= 0.0)) throw std::invalid_argument("eps_trunc must be >= 0");
  return run_process(config, Mode::kTruncated, eps_trunc);
}

Trajectory gaussian_walk(const PgdConfig& config) {
  return run_process(config, Mode::kWalk, std::numeric_limits<double>::infinity());
}

DivergenceReport coupled_divergence(const PgdConfig& config, double eps_trunc) {
  config.validate();
  if (!(eps_trunc >= 0.0)) throw std::invalid_argument("eps_trunc must be >= 0");
  Process full(config, Mode::kFull, 0.0);
  Process truncated(config, Mode::kTruncated, eps_trunc);
  DivergenceReport r;
  r.config = config;
  r.eps_trunc = eps_trunc;
  for (std::int64_t t = 0;; ++t) {
    r.max_param_dist = std::max(r.max_param_dist,
                                norm_of_difference(full.theta(), truncated.theta()));
    if (t == config.steps) break;
    const auto xi = draw_noise(config, static_cast<std::uint64_t>(t) + 1);
    full.step(xi);
    truncated.step(xi);
  }
  r.final_param_dist = norm_of_difference(full.theta(), truncated.theta());
  r.final_loss_gap = std::abs(full.current().loss - truncated.current().loss);
  r.truncated_steps = truncated.truncated_steps();
  r.final_theta_norm = norm(full.theta());
  r.tv_bound = eps_trunc * config.eta * std::sqrt(static_cast<double>(config.steps)) /
               (2.0 * config.sigma);
  return r;
}

nlohmann::json to_json(const DivergenceReport& r) {
  return {{"max_param_dist", r.max_param_dist},
          {"final_param_dist", r.final_param_dist},
          {"final_loss_gap", r.final_loss_gap},
          {"final_theta_norm", r.final_theta_norm},
          {"truncated_steps", r.truncated_steps},
          {"eps_trunc", finite_or_null(r.eps_trunc)},
          {"tv_bound", finite_or_null(r.tv_bound)},
          {"config", to_json(r.config)},
          {"rng", std::string(kRngMethod)}};
}

}  // namespace paritylab
