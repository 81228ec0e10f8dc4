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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "urnflow/error.hpp"
#include "urnflow/random.hpp"
#include "urnflow/specfun.hpp"

namespace urnflow::metrics {
namespace {

DiscreteDistribution random_law(Rng& rng, int atoms) {
  DiscreteDistribution d;
  double total = 0.0;
  for (int i = 0; i < atoms; ++i) {
    const double w = uniform01(rng) < 0.3 ? 0.0 : uniform01(rng);
    d.masses.push_back(w);
    total += w;
  }
  if (total == 0.0) {
    d.masses[0] = 1.0;
    total = 1.0;
  }
  for (auto& m : d.masses) m /= total;
  return d;
}

TEST(TotalVariation, Basics) {
  const DiscreteDistribution a{0, {0.5, 0.5}, 0.0};
  const DiscreteDistribution b{2, {1.0}, 0.0};
  EXPECT_EQ(total_variation(a, a), 0.0);
  EXPECT_EQ(total_variation(a, b), 1.0);
  EXPECT_NEAR(total_variation(poisson_reference(1.0), poisson_reference(2.0)),
              0.32975303263304656751, 1e-12);
}

TEST(TotalVariation, RejectsUnnormalized) {
  const DiscreteDistribution bad{0, {0.5, 0.4}, 0.0};
  const DiscreteDistribution negative{0, {1.5, -0.5}, 0.0};
  EXPECT_THROW(total_variation(bad, bad), DomainError);
  EXPECT_THROW(total_variation(negative, negative), DomainError);
}

TEST(TotalVariation, RemainderUncertainty) {
  const DiscreteDistribution p{0, {0.5}, 0.5};
  const DiscreteDistribution q{0, {0.7}, 0.3};
  const auto tv = total_variation_detailed(p, q);
  EXPECT_NEAR(tv.value, 0.2, 1e-15);
  EXPECT_NEAR(tv.remainder_uncertainty, 0.3, 1e-15);
}

TEST(TotalVariation, SymmetricTriangleAndSupremum) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 10);
    auto p = random_law(rng, n);
    auto q = random_law(rng, n);
    auto r = random_law(rng, n);
    q.offset = static_cast<std::int64_t>(rng() % 3);
    const double pq = total_variation(p, q);
    EXPECT_NEAR(pq, total_variation(q, p), 1e-15);
    EXPECT_LE(pq, total_variation(p, r) + total_variation(r, q) + 1e-9);
    // sup_A |P(A) - Q(A)| by enumerating every subset of the joint support.
    const std::int64_t lo = std::min(p.offset, q.offset);
    const std::int64_t hi = std::max(p.end(), q.end());
    const int atoms = static_cast<int>(hi - lo);
    ASSERT_LE(atoms, 20);
    double sup = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << atoms); ++mask) {
      double diff = 0.0;
      for (int i = 0; i < atoms; ++i) {
        if (mask & (1u << i)) diff += p.mass_at(lo + i) - q.mass_at(lo + i);
      }
      sup = std::max(sup, std::fabs(diff));
    }
    EXPECT_NEAR(pq, sup, 1e-12);
  }
}

TEST(Empirical, Histogram) {
  const std::vector<std::int64_t> v{0, 0, 1};
  const auto d = empirical_distribution(v);
  EXPECT_EQ(d.offset, 0);
  ASSERT_EQ(d.masses.size(), 2u);
  EXPECT_NEAR(d.masses[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(d.masses[1], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(d.remainder, 0.0);
  const std::vector<std::int64_t> constant(5, 4);
  const auto point = empirical_distribution(constant);
  EXPECT_EQ(point.mass_at(4), 1.0);
  EXPECT_THROW(empirical_distribution(std::vector<std::int64_t>{}), DomainError);
}

std::vector<std::int64_t> poisson_sample(double lambda, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::poisson_distribution<std::int64_t> dist(lambda);
  std::vector<std::int64_t> out(n);
  for (auto& x : out) x = dist(rng);
  return out;
}

TEST(TvToPoisson, SelfConsistency) {
  const auto v = poisson_sample(3.0, 1000000, 21);
  EXPECT_LE(tv_to_poisson(v, 3.0), 0.005);
  const auto w = poisson_sample(1.0, 100000, 22);
  EXPECT_LE(tv_to_poisson(w, 1.0), 0.01);
  EXPECT_GE(tv_to_poisson(w, 2.0), 0.3);
}

TEST(TvToPoisson, SingleTrial) {
  const std::vector<std::int64_t> v{2};
  EXPECT_NEAR(tv_to_poisson(v, 1.5), 1.0 - specfun::poisson_pmf(1.5, 2), 1e-12);
  EXPECT_THROW(tv_to_poisson(v, 0.0), DomainError);
}

TEST(Kolmogorov, NormalQuantiles) {
  const int n = 200;
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    // Invert the normal CDF by bisection.
    const double target = (i + 0.5) / n;
    double lo = -10.0, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (specfun::normal_cdf(mid) < target ? lo : hi) = mid;
    }
    v[i] = 0.5 * (lo + hi);
  }
  EXPECT_LE(ks_to_standard_normal(v), 0.5 / n + 1e-10);
}

TEST(Kolmogorov, AllZeros) {
  const std::vector<double> v(10, 0.0);
  EXPECT_NEAR(ks_to_standard_normal(v), 0.5, 1e-12);
  EXPECT_THROW(ks_to_standard_normal(std::vector<double>(9, 0.0)), DomainError);
}

TEST(Kolmogorov, StandardizedPoisson) {
  const auto w = poisson_sample(100.0, 10000, 23);
  std::vector<double> z(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) z[i] = (static_cast<double>(w[i]) - 100.0) / 10.0;
  EXPECT_LE(ks_to_standard_normal(z), 0.03);
}

}  // namespace
}  // namespace urnflow::metrics
