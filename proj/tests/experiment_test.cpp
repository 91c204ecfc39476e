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

#include "paritylab/experiment.hpp"

#include <cstdlib>
#include <filesystem>

#include <unistd.h>

#include <gtest/gtest.h>

#include "paritylab/csv.hpp"
#include "paritylab/rng.hpp"

namespace paritylab {
namespace {

using json = nlohmann::json;

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::filesystem::path fresh_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("paritylab-test-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir;
}

TEST(ParseConfigTest, MinimalDecaySweep) {
  const auto specs = parse_config_text(R"([{"kind": "decay-sweep",
      "parameters": {"d": 16, "S_sizes": [4, 8], "sigma": 1.0, "samples": 100}}])");
  ASSERT_EQ(specs.size(), 1u);
  EXPECT_EQ(specs[0].kind, ExperimentKind::kDecaySweep);
  EXPECT_EQ(specs[0].name, "decay-sweep");
  EXPECT_EQ(specs[0].output_path, "decay-sweep");
  EXPECT_EQ(specs[0].seeds, (std::vector<std::uint64_t>{0}));
  EXPECT_EQ(specs[0].parameters.at("include_bias"), false);
}

TEST(ParseConfigTest, ExperimentsObjectAndSingleSpec) {
  EXPECT_EQ(parse_config_text(R"({"experiments": [{"kind": "alpha-check"},
                                                 {"kind": "single-neuron"}]})")
                .size(),
            2u);
  EXPECT_EQ(parse_config_text(R"({"kind": "alpha-check", "name": "a"})")[0].name, "a");
}

TEST(ParseConfigTest, UnknownParameterNamed) {
  try {
    parse_config_text(R"([{"kind": "decay-sweep", "name": "x",
        "parameters": {"d": 8, "S_sizes": [2], "learning_rate_decay": 0.5}}])");
    FAIL() << "accepted unknown key";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("learning_rate_decay"), std::string::npos) << e.what();
  }
}

TEST(ParseConfigTest, UnknownSpecKeyNamed) {
  try {
    parse_config_text(R"([{"kind": "alpha-check", "outputs": "x"}])");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("outputs"), std::string::npos);
  }
  EXPECT_THROW(parse_config_text(R"({"experiments": [], "extra": 1})"), std::invalid_argument);
}

TEST(ParseConfigTest, EmptySeedsDefaultToZero) {
  const auto specs = parse_config_text(R"([{"kind": "alpha-check", "seeds": []}])");
  EXPECT_EQ(specs[0].seeds, (std::vector<std::uint64_t>{0}));
  EXPECT_THROW(parse_config_text(R"([{"kind": "alpha-check", "seeds": [-1]}])"),
               std::invalid_argument);
}

TEST(ParseConfigTest, MissingRequiredAndBadValues) {
  auto message = [](const char* text) {
    try {
      parse_config_text(text);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message(R"([{"kind": "decay-sweep", "parameters": {"d": 8}}])").find("S_sizes"),
            std::string::npos);
  EXPECT_NE(message(R"([{"kind": "decay-sweep", "parameters": {"d": 8, "S_sizes": [9]}}])")
                .find("S_sizes"),
            std::string::npos);
  EXPECT_NE(message(R"([{"kind": "pgd-run", "parameters": {"S_size": 3, "eta": "fast"}}])")
                .find("eta"),
            std::string::npos);
  EXPECT_NE(message(R"([{"kind": "pgd-run", "parameters": {"S_size": 3, "S": [1]}}])")
                .find("exactly one"),
            std::string::npos);
  EXPECT_NE(message(R"([{"kind": "hopscotch"}])").find("hopscotch"), std::string::npos);
  EXPECT_NE(message("[{").find("JSON"), std::string::npos);
}

TEST(ParseConfigTest, MissingFile) {
  EXPECT_THROW(parse_config_file("/nonexistent/paritylab.json"), std::invalid_argument);
}

TEST(ParseConfigTest, SpecJsonRoundTrip) {
  const ExperimentSpec spec =
      make_spec(ExperimentKind::kCoupled, "c", {{"S_size", 4}, {"d", 6}, {"eps_trunc", "inf"}},
                {3, 4}, "out/c");
  const ExperimentSpec back = spec_from_json(json::parse(to_json(spec).dump()));
  EXPECT_EQ(to_json(back), to_json(spec));
}

TEST(PresetTest, EveryKindHasValidPresets) {
  for (ExperimentKind kind : all_experiment_kinds()) {
    const auto specs = preset_experiments(kind);
    EXPECT_FALSE(specs.empty()) << to_string(kind);
    for (const auto& s : specs) EXPECT_EQ(s.kind, kind);
    EXPECT_EQ(experiment_kind_from_string(to_string(kind)), kind);
  }
}

TEST(CsvTest, DoublesRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  CsvTable t({"a", "b"});
  EXPECT_THROW(t.add_row({"1"}), std::invalid_argument);
  t.add_row({"1", "2"});
  EXPECT_EQ(t.str(), "a,b\n1,2\n");
}

TEST(RunExperimentTest, DecaySweepCsv) {
  const ExperimentSpec spec = make_spec(ExperimentKind::kDecaySweep, "decay",
                                        {{"d", 10}, {"S_sizes", {2, 5, 8}}, {"samples", 50}});
  RunOptions opts;
  opts.write_files = false;
  const ExperimentOutcome out = run_experiment(spec, opts);
  EXPECT_TRUE(out.passed);
  ASSERT_EQ(out.csv_files.size(), 1u);
  EXPECT_EQ(out.csv_files[0].first, "decay_seed0.csv");
  const auto lines = lines_of(out.csv_files[0].second);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "S_size,estimate,std_error,bound_value,satisfied");
  EXPECT_EQ(lines[1].substr(0, 2), "2,");
  EXPECT_EQ(out.report.at("rng"), std::string(kRngMethod));
  EXPECT_EQ(out.report.at("parameters").at("sigma"), 1.0);
}

TEST(RunExperimentTest, ConstructVerifyUpToTen) {
  RunOptions opts;
  opts.write_files = false;
  const auto out = run_experiment(preset_experiments(ExperimentKind::kConstructVerify)[0], opts);
  EXPECT_TRUE(out.passed);
  EXPECT_EQ(out.report.at("results").at("subsets_checked"), 2035);  // sum of 2^d - 1 for d = 2..10
}

TEST(RunExperimentTest, WritesReportsAndReproducesBytes) {
  const ExperimentSpec spec =
      make_spec(ExperimentKind::kPgdRun, "traj",
                {{"d", 8}, {"n", 3}, {"S_size", 4}, {"T", 30}, {"record_every", 7}}, {1, 2},
                "nested/traj");
  const auto dir = fresh_dir("write");
  RunOptions opts;
  opts.out_dir = dir;
  const auto first = run_experiment(spec, opts);
  ASSERT_EQ(first.written.size(), 3u);
  const std::string csv = read_text_file(dir / "nested/traj_seed1.csv");
  const auto lines = lines_of(csv);
  EXPECT_EQ(lines.front(), "step,loss,grad_norm");
  EXPECT_EQ(lines.size(), 7u);  // 0, 7, 14, 21, 28, 30
  EXPECT_EQ(lines.back().substr(0, 3), "30,");
  const json report = json::parse(read_text_file(dir / "nested/traj.json"));
  EXPECT_EQ(report.at("parameters").at("T"), 30);
  EXPECT_EQ(report.at("results").size(), 2u);
  run_experiment(spec, opts);
  EXPECT_EQ(read_text_file(dir / "nested/traj_seed1.csv"), csv);
  std::filesystem::remove_all(dir);
}

TEST(RunExperimentTest, ErrorsCarryExperimentName) {
  ExperimentSpec spec = make_spec(ExperimentKind::kAlphaCheck, "broken", json::object());
  spec.parameters["j_max"] = "lots";
  try {
    run_experiment(spec, RunOptions{".", false, nullptr});
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("broken"), std::string::npos);
  }
}

TEST(RunExperimentTest, CoupledWithZeroTruncationAsserted) {
  const auto spec = make_spec(ExperimentKind::kCoupled, "c0",
                              {{"d", 6}, {"n", 2}, {"S_size", 3}, {"T", 20}, {"eps_trunc", 0}});
  const auto out = run_experiment(spec, RunOptions{".", false, nullptr});
  EXPECT_TRUE(out.passed);
  EXPECT_EQ(out.checks.size(), 2u);
  EXPECT_EQ(out.report.at("results")[0].at("max_param_dist"), 0.0);
}

TEST(RunExperimentTest, SweepComparesExtremeSizes) {
  const auto spec = make_spec(ExperimentKind::kPgdSweep, "sw",
                              {{"d", 6}, {"n", 2}, {"S_sizes", {1, 6}}, {"T", 20}}, {0, 1});
  const auto out = run_experiment(spec, RunOptions{".", false, nullptr});
  EXPECT_EQ(out.csv_files.size(), 4u);
  EXPECT_EQ(out.csv_files[0].first, "sw_S1_seed0.csv");
  EXPECT_EQ(out.report.at("results").size(), 2u);
}

TEST(RunExperimentTest, WalkVarianceSquaredIsDamped) {
  const auto spec = make_spec(ExperimentKind::kWalkBaseline, "w",
                              {{"loss", "squared-single"}, {"eta", 0.5}, {"T", 30}, {"runs", 400}});
  const auto out = run_experiment(spec, RunOptions{".", false, nullptr});
  EXPECT_TRUE(out.passed) << out.summary;
  const double expected = out.report.at("results")[0].at("expected_variance").get<double>();
  EXPECT_NEAR(expected, 0.09 / (1 - 0.25), 1e-9);
}

}  // namespace
}  // namespace paritylab
