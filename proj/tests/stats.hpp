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

#ifndef URNFLOW_TESTS_STATS_HPP_
#define URNFLOW_TESTS_STATS_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>

// Pearson chi-square of observed counts against an exact law, pooling cells
// with expected count below 5 into one.
struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  // Six standard deviations above the mean of the chi-square law.
  bool plausible() const { return statistic < dof + 6.0 * std::sqrt(2.0 * dof); }
};

inline ChiSquare chi_square(const std::map<std::int64_t, std::int64_t>& observed,
                            const std::function<double(std::int64_t)>& pmf, std::int64_t lo,
                            std::int64_t hi, double n) {
  ChiSquare c;
  double pool_obs = 0.0;
  double pool_exp = 0.0;
  double seen = 0.0;
  double covered = 0.0;
  int cells = 0;
  for (std::int64_t k = lo; k <= hi; ++k) {
    const auto it = observed.find(k);
    const double o = it == observed.end() ? 0.0 : static_cast<double>(it->second);
    const double e = n * pmf(k);
    seen += o;
    covered += e;
    if (e < 5.0) {
      pool_obs += o;
      pool_exp += e;
      continue;
    }
    c.statistic += (o - e) * (o - e) / e;
    ++cells;
  }
  pool_obs += n - seen;
  pool_exp += n - covered;
  if (pool_exp > 0.0) {
    c.statistic += (pool_obs - pool_exp) * (pool_obs - pool_exp) / pool_exp;
    ++cells;
  }
  c.dof = cells - 1;
  return c;
}

#endif  // URNFLOW_TESTS_STATS_HPP_
