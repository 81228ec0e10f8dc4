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

#ifndef URNFLOW_METRICS_HPP_
#define URNFLOW_METRICS_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace urnflow::metrics {

// Law on {offset, offset+1, ...}: explicit masses, then `remainder` for
// everything past the last explicit atom.
struct DiscreteDistribution {
  std::int64_t offset = 0;
  std::vector<double> masses;
  double remainder = 0.0;

  std::int64_t end() const { return offset + static_cast<std::int64_t>(masses.size()); }
  double mass_at(std::int64_t n) const;
  // Throws DomainError unless masses >= 0 and they sum with the remainder to
  // 1 within 1e-9.
  void validate() const;
};

struct TotalVariation {
  double value = 0.0;
  // The remainders are compared as one atom. The true distance can exceed
  // `value` by at most this much.
  double remainder_uncertainty = 0.0;
};

TotalVariation total_variation_detailed(const DiscreteDistribution& p,
                                        const DiscreteDistribution& q);
double total_variation(const DiscreteDistribution& p, const DiscreteDistribution& q);

DiscreteDistribution empirical_distribution(std::span<const std::int64_t> values);

// Poisson(lambda) up to lambda + 12 sqrt(lambda) + 20, tail in the remainder.
DiscreteDistribution poisson_reference(double lambda);

double tv_to_poisson(std::span<const std::int64_t> values, double lambda);

// sup_y |F_n(y) - Phi(y)|, at least 10 values.
double ks_to_standard_normal(std::span<const double> values);

}  // namespace urnflow::metrics

#endif  // URNFLOW_METRICS_HPP_
