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

#include "urnflow/distributions.hpp"

#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "stats.hpp"
#include "urnflow/error.hpp"

namespace urnflow {
namespace {

TEST(Parse, RoundTrip) {
  for (const char* spec : {"pareto:a=1.5,b=1", "weibull:beta=0.5,eta=2.25", "degenerate:c=100",
                           "pareto:a=3,b=0.1"}) {
    EXPECT_EQ(FlowSizeDistribution::parse(spec).to_string(), spec);
  }
  EXPECT_EQ(FlowSizeDistribution::parse("pareto:b=1,a=1.5").to_string(), "pareto:a=1.5,b=1");
}

TEST(Parse, Malformed) {
  EXPECT_THROW(FlowSizeDistribution::parse("pareto"), ParseError);
  EXPECT_THROW(FlowSizeDistribution::parse("pareto:a=1.5"), ParseError);
  EXPECT_THROW(FlowSizeDistribution::parse("pareto:a=x,b=1"), ParseError);
  EXPECT_THROW(FlowSizeDistribution::parse("pareto:a=1.5,b=1,c=2"), ParseError);
  EXPECT_THROW(FlowSizeDistribution::parse("lognormal:mu=1"), ParseError);
  EXPECT_THROW(FlowSizeDistribution::parse("pareto:a=1.5,a=2,b=1"), ParseError);
}

TEST(Parse, ParameterDomains) {
  EXPECT_THROW(FlowSizeDistribution::parse("pareto:a=1,b=1"), DomainError);
  EXPECT_THROW(FlowSizeDistribution::parse("pareto:a=2,b=0"), DomainError);
  EXPECT_THROW(FlowSizeDistribution::parse("weibull:beta=1.5,eta=1"), DomainError);
  EXPECT_THROW(FlowSizeDistribution::parse("degenerate:c=0"), DomainError);
  EXPECT_THROW(FlowSizeDistribution::parse("degenerate:c=2.5"), DomainError);
}

TEST(Tail, ClosedForms) {
  const auto p = FlowSizeDistribution::pareto(2.0, 1.0);
  EXPECT_DOUBLE_EQ(p.tail(0.5), 1.0);
  EXPECT_DOUBLE_EQ(p.tail(2000.0), 2.5e-7);
  const auto w = FlowSizeDistribution::weibull(0.5, 1.0);
  EXPECT_DOUBLE_EQ(w.tail(100.0), std::exp(-10.0));
  const auto d = FlowSizeDistribution::degenerate(100);
  EXPECT_EQ(d.tail(99.9), 1.0);
  EXPECT_EQ(d.tail(100.0), 0.0);
}

TEST(Quantile, InvertsTail) {
  for (const auto& dist : {FlowSizeDistribution::pareto(1.5, 2.0),
                           FlowSizeDistribution::weibull(0.4, 3.0)}) {
    for (double u : {1.0, 0.9, 0.5, 1e-3, 1e-12}) {
      EXPECT_NEAR(dist.tail(dist.quantile(u)), u, 1e-12 * u + 1e-15);
    }
  }
  EXPECT_THROW(FlowSizeDistribution::pareto(2, 1).quantile(0.0), DomainError);
}

TEST(Moments, Means) {
  EXPECT_DOUBLE_EQ(FlowSizeDistribution::pareto(1.5, 1.0).mean(), 3.0);
  // eta Gamma(1 + 1/beta) = 2 for beta = 1/2.
  EXPECT_NEAR(FlowSizeDistribution::weibull(0.5, 1.0).mean(), 2.0, 1e-14);
}

TEST(Moments, TruncatedAgainstHighPrecision) {
  const auto w = FlowSizeDistribution::weibull(0.5, 1.0);
  EXPECT_NEAR(w.truncated_moment(2, 10.0), 5.1048386943813631315, 1e-10);
  const auto p = FlowSizeDistribution::pareto(1.5, 1.0);
  EXPECT_NEAR(p.truncated_moment(1, 50.0), 2.5757359312880714854, 1e-10);
  EXPECT_NEAR(p.truncated_moment(1), 3.0, 1e-10);
  // E(v^2) = eta^2 Gamma(1 + 2/beta) = 24.
  EXPECT_NEAR(w.truncated_moment(2), 24.0, 1e-9);
  EXPECT_THROW(p.truncated_moment(2), DomainError);
  EXPECT_DOUBLE_EQ(FlowSizeDistribution::degenerate(7).truncated_moment(2, 10.0), 49.0);
  EXPECT_DOUBLE_EQ(FlowSizeDistribution::degenerate(7).truncated_moment(2, 6.0), 0.0);
}

TEST(Discrete, PmfAndTail) {
  const auto p = FlowSizeDistribution::pareto(2.0, 1.0);
  EXPECT_NEAR(p.discrete_pmf(1), 1.0 - 1.0 / 2.25, 1e-15);
  EXPECT_NEAR(p.discrete_pmf(2), 1.0 / 2.25 - 1.0 / 6.25, 1e-15);
  EXPECT_EQ(p.discrete_pmf(0), 0.0);
  double total = 0.0;
  for (int n = 1; n <= 100000; ++n) total += p.discrete_pmf(n);
  EXPECT_NEAR(total + p.discrete_tail(100000), 1.0, 1e-12);
}

TEST(Discrete, MeanOfRoundedLaw) {
  const auto d = FlowSizeDistribution::degenerate(9);
  EXPECT_EQ(d.discrete_mean(), 9.0);
  // Rounding to the nearest integer keeps the mean close to the continuous one.
  const auto p = FlowSizeDistribution::pareto(1.5, 1.0);
  double direct = 0.0;
  for (int n = 0; n < 2000000; ++n) direct += p.discrete_tail(n);
  // Remainder of sum_{n >= N} (N + 1/2)^-1.5 by the integral.
  direct += 2.0 / std::sqrt(2000000.0);
  EXPECT_NEAR(p.discrete_mean(), direct, 1e-5);
  EXPECT_NEAR(p.discrete_mean(), p.mean(), 0.1);
}

TEST(Draw, FollowsDiscreteLaw) {
  const auto p = FlowSizeDistribution::pareto(2.0, 1.0);
  Rng rng(3);
  constexpr int kDraws = 300000;
  std::map<std::int64_t, std::int64_t> hist;
  for (int i = 0; i < kDraws; ++i) ++hist[p.draw(rng)];
  const auto c =
      chi_square(hist, [&](std::int64_t n) { return p.discrete_pmf(n); }, 1, 200, kDraws);
  EXPECT_TRUE(c.plausible()) << "chi2 " << c.statistic << " dof " << c.dof;
}

TEST(Draw, MinimumIsOne) {
  const auto w = FlowSizeDistribution::weibull(0.3, 0.01);
  Rng rng(4);
  for (int i = 0; i < 10000; ++i) ASSERT_GE(w.draw(rng), 1);
  EXPECT_EQ(FlowSizeDistribution::degenerate(5).draw(rng), 5);
}

}  // namespace
}  // namespace urnflow
