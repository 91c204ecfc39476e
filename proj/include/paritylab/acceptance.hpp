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

// The twelve acceptance criteria, each reduced to one pass/fail line.

#include <functional>
#include <string>
#include <vector>

namespace paritylab {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

using CriterionCallback = std::function<void(const CriterionResult&)>;

// Runs the selected criteria (all when `only` is empty) in order, calling
// on_result after each one.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& only = {},
                                            const CriterionCallback& on_result = {});

std::string format_criterion(const CriterionResult& result);

}  // namespace paritylab
