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

#include "urnflow/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "urnflow/error.hpp"
#include "urnflow/specfun.hpp"

namespace urnflow::metrics {

double DiscreteDistribution::mass_at(std::int64_t n) const {
  if (n < offset || n >= end()) return 0.0;
  return masses[static_cast<std::size_t>(n - offset)];
}

void DiscreteDistribution::validate() const {
  double total = remainder;
  if (!(remainder >= 0.0)) throw DomainError("distribution remainder must be non-negative");
  for (double m : masses) {
    if (!(m >= 0.0)) throw DomainError("distribution masses must be non-negative");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("distribution is not normalized");
}

TotalVariation total_variation_detailed(const DiscreteDistribution& p,
                                        const DiscreteDistribution& q) {
  p.validate();
  q.validate();
  const std::int64_t lo = std::min(p.offset, q.offset);
  const std::int64_t hi = std::max(p.end(), q.end());
  double sum = 0.0;
  for (std::int64_t n = lo; n < hi; ++n) sum += std::abs(p.mass_at(n) - q.mass_at(n));
  TotalVariation tv;
  tv.value = std::min(1.0, 0.5 * sum + 0.5 * std::abs(p.remainder - q.remainder));
  tv.remainder_uncertainty = std::min(p.remainder, q.remainder);
  return tv;
}

double total_variation(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  return total_variation_detailed(p, q).value;
}

DiscreteDistribution empirical_distribution(std::span<const std::int64_t> values) {
  if (values.empty()) throw DomainError("empirical_distribution: no values");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  if (*mn < 0) throw DomainError("empirical_distribution: values must be non-negative");
  DiscreteDistribution d;
  d.offset = *mn;
  d.masses.assign(static_cast<std::size_t>(*mx - *mn + 1), 0.0);
  for (auto v : values) d.masses[static_cast<std::size_t>(v - *mn)] += 1.0;
  const double n = static_cast<double>(values.size());
  for (double& m : d.masses) m /= n;
  return d;
}

DiscreteDistribution poisson_reference(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("poisson_reference: lambda must be positive");
  }
  const auto top = static_cast<std::int64_t>(std::ceil(lambda + 12.0 * std::sqrt(lambda) + 20.0));
  DiscreteDistribution d;
  d.masses.reserve(static_cast<std::size_t>(top) + 1);
  for (std::int64_t n = 0; n <= top; ++n) d.masses.push_back(specfun::poisson_pmf(lambda, n));
  d.remainder = specfun::poisson_tail(lambda, top + 1);
  return d;
}

double tv_to_poisson(std::span<const std::int64_t> values, double lambda) {
  return total_variation(empirical_distribution(values), poisson_reference(lambda));
}

double ks_to_standard_normal(std::span<const double> values) {
  if (values.size() < 10) throw DomainError("ks_to_standard_normal: need at least 10 values");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  // Ties: the empirical CDF jumps once per distinct value.
  for (std::size_t i = 0; i < x.size();) {
    std::size_t k = i;
    while (k + 1 < x.size() && x[k + 1] == x[i]) ++k;
    const double phi = specfun::normal_cdf(x[i]);
    d = std::max({d, static_cast<double>(k + 1) / n - phi, phi - static_cast<double>(i) / n});
    i = k + 1;
  }
  return d;
}

}  // namespace urnflow::metrics
