//
// Copyright 2026 The urnflow Authors
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
//

#ifndef URNFLOW_VERIFY_HPP_
#define URNFLOW_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// The acceptance checks, runnable from the CLI and the test suite.
namespace urnflow::verify {

struct Check {
  std::string label;
  double measured = 0.0;
  double lower = 0.0;  // -inf when one-sided
  double upper = 0.0;  // +inf when one-sided
  bool passed = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  double seconds = 0.0;
  std::vector<Check> checks;
  std::vector<std::string> notes;
};

struct Options {
  bool quick = false;  // smaller ensembles; same thresholds
  std::uint64_t seed = 20260101;
  int threads = 0;
};

constexpr int kCriterionCount = 10;

// means: 1-3, estimators: 4-5, poisson: 6-7, tails: 8, identities: 9-10,
// all: 1-10. Throws ParseError for anything else.
std::vector<int> suite_criteria(std::string_view suite);

CriterionResult run_criterion(int id, const Options& options);

std::string report_json(std::string_view suite, const Options& options,
                        const std::vector<CriterionResult>& results);

}  // namespace urnflow::verify

#endif  // URNFLOW_VERIFY_HPP_
