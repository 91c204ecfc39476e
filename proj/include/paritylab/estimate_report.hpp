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

#include <cstdint>
#include <span>
#include <string>

#include "json.hpp"

namespace paritylab {

// Monte Carlo estimate together with the bound it is compared against.
struct EstimateReport {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t num_samples = 0;
  double bound_value = 0.0;
  bool bound_satisfied = false;
  std::uint64_t seed = 0;
  nlohmann::json parameters = nlohmann::json::object();

  // estimate - margin * std_error <= bound_value.
  bool within_bound(double margin = 3.0) const {
    return estimate - margin * std_error <= bound_value;
  }
};

// Sample mean and standard error (sample sd with n - 1, over sqrt(n)).
struct SampleMoments {
  double mean = 0.0;
  double std_error = 0.0;
  double variance = 0.0;
};
SampleMoments sample_moments(std::span<const double> samples);

// Builds a report for an upper-bound check: bound_satisfied = estimate <= bound.
EstimateReport make_upper_bound_report(std::span<const double> samples, double bound,
                                       std::uint64_t seed, nlohmann::json parameters);

nlohmann::json to_json(const EstimateReport& report);
EstimateReport estimate_report_from_json(const nlohmann::json& j);

// JSON has no infinities; non-finite doubles become null.
nlohmann::json finite_or_null(double value);

}  // namespace paritylab
