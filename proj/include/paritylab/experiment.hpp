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

// Experiment specs, config parsing and the runners behind the CLI.
//
// A config is a JSON array of specs, or {"experiments": [...]}:
//
//   {"name": "decay16", "kind": "decay-sweep",
//    "parameters": {"d": 16, "S_sizes": [4, 8, 12, 16]},
//    "seeds": [0, 1], "output_path": "decay/d16"}
//
// Every kind has a fixed parameter schema; unknown keys are rejected by
// name and missing optional keys take documented defaults. The resolved
// parameters are echoed into every report.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace paritylab {

enum class ExperimentKind {
  kConstructVerify,
  kDecaySweep,
  kGradStats,
  kPgdRun,
  kPgdSweep,
  kSingleNeuron,
  kHemisphereCheck,
  kAlphaCheck,
  kWalkBaseline,
  kCoupled,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);
const std::vector<ExperimentKind>& all_experiment_kinds();

// Parameter schema of a kind: key -> default. Required keys map to null.
struct ParameterSchema {
  nlohmann::json defaults = nlohmann::json::object();
  std::vector<std::string> required;
};
const ParameterSchema& parameter_schema(ExperimentKind kind);

struct ExperimentSpec {
  std::string name;
  ExperimentKind kind = ExperimentKind::kConstructVerify;
  nlohmann::json parameters = nlohmann::json::object();  // resolved
  std::vector<std::uint64_t> seeds{0};
  std::string output_path;  // stem, relative to the output directory
};

// Applies defaults and validates. Throws std::invalid_argument naming the
// offending key.
ExperimentSpec make_spec(ExperimentKind kind, std::string name, const nlohmann::json& parameters,
                         std::vector<std::uint64_t> seeds = {}, std::string output_path = "");

ExperimentSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentSpec& spec);

std::vector<ExperimentSpec> parse_config_text(std::string_view text);
std::vector<ExperimentSpec> parse_config_file(const std::filesystem::path& path);

// The default experiment set for a kind, at the sizes used by the
// acceptance suite.
std::vector<ExperimentSpec> preset_experiments(ExperimentKind kind);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  bool write_files = true;
  std::ostream* log = nullptr;  // one summary line per experiment
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentOutcome {
  std::string name;
  ExperimentKind kind = ExperimentKind::kConstructVerify;
  bool passed = false;
  std::vector<CheckResult> checks;
  nlohmann::json report;
  // CSV bodies by file name, in write order.
  std::vector<std::pair<std::string, std::string>> csv_files;
  std::vector<std::filesystem::path> written;
  std::string summary;
};

// Errors from the modules are rethrown as std::runtime_error prefixed with
// the experiment name.
ExperimentOutcome run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

}  // namespace paritylab
