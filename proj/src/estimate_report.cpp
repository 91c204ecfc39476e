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

#include "paritylab/estimate_report.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "paritylab/hypercube.hpp"
#include "paritylab/rng.hpp"

namespace paritylab {

SampleMoments sample_moments(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("need at least 2 samples");
  const double n = static_cast<double>(samples.size());
  SampleMoments m;
  m.mean = pairwise_sum(samples) / n;
  std::vector<double> dev(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double e = samples[i] - m.mean;
    dev[i] = e * e;
  }
  m.variance = pairwise_sum(dev) / (n - 1.0);
  m.std_error = std::sqrt(m.variance / n);
  return m;
}

EstimateReport make_upper_bound_report(std::span<const double> samples, double bound,
                                       std::uint64_t seed, nlohmann::json parameters) {
  const SampleMoments m = sample_moments(samples);
  EstimateReport r;
  r.estimate = m.mean;
  r.std_error = m.std_error;
  r.num_samples = static_cast<std::int64_t>(samples.size());
  r.bound_value = bound;
  r.bound_satisfied = m.mean <= bound;
  r.seed = seed;
  r.parameters = std::move(parameters);
  if (!r.parameters.contains("rng")) r.parameters["rng"] = std::string(kRngMethod);
  return r;
}

nlohmann::json finite_or_null(double value) {
  if (std::isfinite(value)) return value;
  return nullptr;
}

nlohmann::json to_json(const EstimateReport& r) {
  return {
      {"estimate", finite_or_null(r.estimate)},
      {"std_error", finite_or_null(r.std_error)},
      {"num_samples", r.num_samples},
      {"bound_value", finite_or_null(r.bound_value)},
      {"bound_satisfied", r.bound_satisfied},
      {"seed", r.seed},
      {"parameters", r.parameters},
  };
}

EstimateReport estimate_report_from_json(const nlohmann::json& j) {
  EstimateReport r;
  r.estimate = j.at("estimate").get<double>();
  r.std_error = j.at("std_error").get<double>();
  r.num_samples = j.at("num_samples").get<std::int64_t>();
  r.bound_value = j.at("bound_value").get<double>();
  r.bound_satisfied = j.at("bound_satisfied").get<bool>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.parameters = j.at("parameters");
  return r;
}

}  // namespace paritylab
