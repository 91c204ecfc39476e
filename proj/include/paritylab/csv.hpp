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

// CSV emission. Comma separated, '.' decimal point, LF line endings, one
// header row, doubles with 17 significant digits so they round-trip.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "paritylab/estimate_report.hpp"
#include "paritylab/pgd.hpp"

namespace paritylab {

std::string format_double(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// S_size,estimate,std_error,bound_value,satisfied
std::string decay_csv(const std::vector<EstimateReport>& reports);
// step,loss,grad_norm
std::string trajectory_csv(const Trajectory& trajectory);
// S_size,mean_grad_norm,std_error,lemma_bound
std::string grad_stats_csv(const std::vector<EstimateReport>& grad_norm_reports);

// Writes bytes verbatim, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace paritylab
