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

#include "paritylab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace paritylab {
namespace {

std::string cell(std::int64_t v) { return std::to_string(v); }

std::int64_t subset_size_of(const EstimateReport& r) {
  return r.parameters.at("S_size").get<std::int64_t>();
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw std::invalid_argument("csv row has " + std::to_string(cells.size()) +
                                " cells, header has " + std::to_string(header_.size()));
  }
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

std::string decay_csv(const std::vector<EstimateReport>& reports) {
  CsvTable t({"S_size", "estimate", "std_error", "bound_value", "satisfied"});
  for (const auto& r : reports) {
    t.add_row({cell(subset_size_of(r)), format_double(r.estimate), format_double(r.std_error),
               format_double(r.bound_value), r.within_bound() ? "true" : "false"});
  }
  return t.str();
}

std::string trajectory_csv(const Trajectory& trajectory) {
  CsvTable t({"step", "loss", "grad_norm"});
  for (std::size_t i = 0; i < trajectory.steps.size(); ++i) {
    t.add_row({cell(trajectory.steps[i]), format_double(trajectory.losses[i]),
               format_double(trajectory.grad_norms[i])});
  }
  return t.str();
}

std::string grad_stats_csv(const std::vector<EstimateReport>& grad_norm_reports) {
  CsvTable t({"S_size", "mean_grad_norm", "std_error", "lemma_bound"});
  for (const auto& r : grad_norm_reports) {
    t.add_row({cell(subset_size_of(r)), format_double(r.estimate), format_double(r.std_error),
               format_double(r.bound_value)});
  }
  return t.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace paritylab
