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

// paritylab: run preset or configured experiments and the acceptance suite.
//
//   paritylab decay --seed 3 --out results
//   paritylab pgd --param T=200 --param S_size=10
//   paritylab all --config configs/smoke.json --out results --quiet
//   paritylab all                      # acceptance suite

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "paritylab/acceptance.hpp"
#include "paritylab/csv.hpp"
#include "paritylab/experiment.hpp"

namespace {

using paritylab::ExperimentKind;
using paritylab::ExperimentSpec;

const std::map<std::string, std::vector<ExperimentKind>>& subcommand_kinds() {
  static const std::map<std::string, std::vector<ExperimentKind>> m = {
      {"construct", {ExperimentKind::kConstructVerify}},
      {"decay", {ExperimentKind::kDecaySweep}},
      {"gradstats", {ExperimentKind::kGradStats}},
      {"pgd", {ExperimentKind::kPgdRun, ExperimentKind::kPgdSweep}},
      {"single", {ExperimentKind::kSingleNeuron}},
      {"hemisphere", {ExperimentKind::kHemisphereCheck}},
      {"alpha", {ExperimentKind::kAlphaCheck}},
      {"walk", {ExperimentKind::kWalkBaseline}},
      {"coupled", {ExperimentKind::kCoupled}},
  };
  return m;
}

// "key=value"; the value is JSON when it parses, a plain string otherwise.
std::pair<std::string, nlohmann::json> parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("--param expects key=value, got \"" + text + "\"");
  }
  const std::string value = text.substr(eq + 1);
  nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;
  return {text.substr(0, eq), parsed};
}

// A key is applied to the specs whose kind knows it; a key no selected
// spec knows is an error.
ExperimentSpec apply_overrides(const ExperimentSpec& spec, std::optional<std::uint64_t> seed,
                               const std::vector<std::string>& overrides) {
  nlohmann::json params = spec.parameters;
  for (const auto& o : overrides) {
    auto [key, value] = parse_override(o);
    if (params.contains(key)) params[key] = value;
  }
  std::vector<std::uint64_t> seeds = seed ? std::vector<std::uint64_t>{*seed} : spec.seeds;
  return paritylab::make_spec(spec.kind, spec.name, params, seeds, spec.output_path);
}

int run_specs(const std::vector<ExperimentSpec>& specs, const std::filesystem::path& out,
              bool quiet) {
  paritylab::RunOptions opts;
  opts.out_dir = out;
  opts.log = quiet ? nullptr : &std::cout;
  bool ok = true;
  for (const auto& spec : specs) {
    const auto outcome = paritylab::run_experiment(spec, opts);
    ok = ok && outcome.passed;
    if (!quiet) {
      for (const auto& c : outcome.checks) {
        if (!c.passed) std::cout << "  failed: " << c.name << ": " << c.detail << '\n';
      }
    }
  }
  return ok ? 0 : 1;
}

int run_acceptance_suite(bool quiet, const std::optional<std::filesystem::path>& out) {
  int failed = 0;
  nlohmann::json report = nlohmann::json::array();
  paritylab::run_acceptance({}, [&](const paritylab::CriterionResult& r) {
    failed += !r.passed;
    if (!quiet || !r.passed) std::cout << paritylab::format_criterion(r) << std::endl;
    report.push_back({{"criterion", r.id}, {"title", r.title}, {"passed", r.passed},
                      {"detail", r.detail}});
  });
  if (out) paritylab::write_text_file(*out / "acceptance.json", report.dump(2) + "\n");
  if (!quiet) std::cout << (failed ? "FAIL" : "PASS") << ": " << 12 - failed << "/12 criteria\n";
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parity learning experiments: Fourier decay, exact nets, perturbed GD"};
  app.name("paritylab");
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool quiet = false;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Replace every experiment's seed list by this seed");
  app.add_option("--out", out_dir, "Output directory for reports (default: current directory)");
  app.add_flag("--quiet", quiet, "Print only failures");
  app.add_option("--param", overrides, "Parameter override key=value (repeatable)");

  for (const auto& [name, kinds] : subcommand_kinds()) {
    std::string help = "Run";
    for (auto k : kinds) help += " " + paritylab::to_string(k);
    help += kinds.size() > 1 ? " experiments" : " experiment";
    app.add_subcommand(name, help);
  }
  app.add_subcommand("all", "Run every configured experiment, or the acceptance suite");

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    const std::filesystem::path out = out_dir.empty() ? "." : out_dir;
    if (cmd == "all" && config_path.empty()) {
      if (seed || !overrides.empty()) {
        throw std::invalid_argument("the acceptance suite takes no --seed or --param");
      }
      return run_acceptance_suite(quiet, out_dir.empty()
                                             ? std::nullopt
                                             : std::optional<std::filesystem::path>(out));
    }
    std::vector<ExperimentSpec> specs;
    if (!config_path.empty()) {
      for (auto& spec : paritylab::parse_config_file(config_path)) {
        if (cmd == "all") {
          specs.push_back(std::move(spec));
          continue;
        }
        const auto& kinds = subcommand_kinds().at(cmd);
        if (std::find(kinds.begin(), kinds.end(), spec.kind) != kinds.end()) {
          specs.push_back(std::move(spec));
        }
      }
      if (specs.empty()) throw std::invalid_argument("config has no experiments for " + cmd);
    } else {
      for (auto kind : subcommand_kinds().at(cmd)) {
        for (auto& spec : paritylab::preset_experiments(kind)) specs.push_back(std::move(spec));
      }
    }
    for (const auto& o : overrides) {
      const std::string key = parse_override(o).first;
      if (std::none_of(specs.begin(), specs.end(),
                       [&](const ExperimentSpec& s) { return s.parameters.contains(key); })) {
        throw std::invalid_argument("unknown parameter \"" + key + "\" for " + cmd);
      }
    }
    if (seed || !overrides.empty()) {
      for (auto& spec : specs) spec = apply_overrides(spec, seed, overrides);
    }
    return run_specs(specs, out, quiet);
  } catch (const std::exception& e) {
    std::cerr << "paritylab: error: " << e.what() << '\n';
    return 2;
  }
}
