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

#include "urnflow/theory.hpp"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "urnflow/error.hpp"
#include "urnflow/specfun.hpp"

namespace urnflow::theory {
namespace {

// Reference values computed with mpmath at 40 digits.
constexpr double kParetoQ[] = {0.97339507411883437916, 0.024982139445500511627,
                               0.0011798388917436324951, 0.00022139106113433461719,
                               8.3083526039984804449e-5, 4.154188677622162087e-5};

const auto kPareto = FlowSizeDistribution::pareto(1.5, 1.0);
const auto kWeibull = FlowSizeDistribution::weibull(0.5, 1.0);

void expect_rel(double got, double want, double rel) {
  EXPECT_NEAR(got, want, rel * std::fabs(want)) << "want " << want;
}

TEST(Qj, Degenerate) {
  expect_rel(q_j(FlowSizeDistribution::degenerate(100), 0.01, 1), std::exp(-1.0), 1e-14);
}

TEST(Qj, ParetoClosedFormAgainstReference) {
  for (int j = 0; j <= 5; ++j) expect_rel(q_j(kPareto, 0.01, j), kParetoQ[j], 1e-10);
}

TEST(Qj, ParetoClosedFormMatchesQuadrature) {
  for (int j : {0, 1, 3, 7, 15}) {
    for (double p : {0.001, 0.05, 0.3}) {
      expect_rel(q_j_quadrature(kPareto, p, j), q_j(kPareto, p, j), 1e-8);
    }
  }
}

TEST(Qj, WeibullAgainstReference) {
  expect_rel(q_j(kWeibull, 0.1, 0), 0.8653925865151022959, 1e-9);
  expect_rel(q_j(kWeibull, 0.1, 1), 0.09617775954530688769, 1e-9);
  expect_rel(q_j(kWeibull, 0.1, 2), 0.02409625223449164525, 1e-9);
  expect_rel(q_j(kWeibull, 0.1, 5), 0.001444415469172333505, 1e-9);
  // Two independent quadratures.
  EXPECT_NEAR(q_j(kWeibull, 0.01, 0), 1.0 - one_minus_q0(kWeibull, 0.01), 1e-8);
}

TEST(Qj, SumsToOne) {
  for (const auto& dist : {kPareto, kWeibull, FlowSizeDistribution::degenerate(30)}) {
    const auto table = q_table(dist, 0.05, 400);
    double total = 0.0;
    for (double q : table.values) total += q;
    EXPECT_NEAR(total + q_tail(dist, 0.05, 401), 1.0, 1e-8) << dist.to_string();
  }
}

TEST(Qj, SampledLawUsesDiscreteSum) {
  const auto table = q_table(kPareto, 0.01, 3, Law::kSampled);
  EXPECT_EQ(table.method, QjMethod::kDiscreteSum);
  EXPECT_EQ(q_table(kPareto, 0.01, 3).method, QjMethod::kClosedForm);
  EXPECT_EQ(q_table(kWeibull, 0.01, 3).method, QjMethod::kQuadrature);
  // Degenerate draws are exact, so both laws coincide.
  const auto d = FlowSizeDistribution::degenerate(40);
  EXPECT_NEAR(q_j(d, 0.05, 2, Law::kSampled), q_j(d, 0.05, 2), 1e-14);
  double total = 0.0;
  for (int j = 0; j <= 200; ++j) total += q_j(kPareto, 0.1, j, Law::kSampled);
  EXPECT_NEAR(total + q_tail(kPareto, 0.1, 201, Law::kSampled), 1.0, 1e-9);
}

TEST(QTail, Identities) {
  EXPECT_EQ(q_tail(kPareto, 0.01, 0), 1.0);
  EXPECT_NEAR(q_tail(FlowSizeDistribution::degenerate(100), 0.01, 1), 1.0 - std::exp(-1.0),
              1e-14);
  for (const auto& dist : {kPareto, kWeibull}) {
    for (int j : {0, 1, 4, 11}) {
      for (double p : {0.003, 0.07}) {
        EXPECT_NEAR(q_tail(dist, p, j) - q_tail(dist, p, j + 1), q_j(dist, p, j), 1e-8);
      }
    }
  }
  expect_rel(q_tail(kPareto, 0.1, 20), 0.00038957815822675552723, 1e-8);
}

TEST(OneMinusQ0, ParetoClosedForm) {
  const auto dist = FlowSizeDistribution::pareto(2.0, 1.0);
  const double bp = 0.001;
  const double exact = -std::expm1(-bp) + bp * bp * specfun::upper_incomplete_gamma(-1.0, bp);
  expect_rel(one_minus_q0(dist, 0.001), exact, 1e-12);
  expect_rel(one_minus_q0_pareto(2.0, 1.0, 0.001), exact, 1e-12);
  expect_rel(exact, 1.0 - q_j_quadrature(dist, 0.001, 0), 1e-8);
  expect_rel(one_minus_q0(kPareto, 0.01), 0.026604925881165620844, 1e-10);
}

TEST(OneMinusQ0, SmallPLimit) {
  double prev_gap = 1.0;
  for (double p : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const double gap = std::fabs(one_minus_q0(kPareto, p) / p - kPareto.mean());
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap / kPareto.mean(), 0.01);
}

TEST(OneMinusQ0, Degenerate) {
  EXPECT_NEAR(one_minus_q0(FlowSizeDistribution::degenerate(7), 0.3), -std::expm1(-2.1), 1e-15);
}

TEST(LeCam, Bounds) {
  EXPECT_NEAR(lecam_uniform_bound(FlowSizeDistribution::degenerate(50), 0.01, 1000), 0.5 / 1000,
              1e-15);
  const double k1 = lecam_uniform_bound(kPareto, 0.01, 100000);
  const double k2 = lecam_uniform_bound(kPareto, 0.01, 200000);
  EXPECT_NEAR(k1 / k2, 2.0, 1e-12);
  EXPECT_NEAR(k1, 1.9e-6, 0.05e-6);
  EXPECT_EQ(lecam_probabilistic_bound(0.01), 0.01);
  EXPECT_EQ(lecam_probabilistic_bound(0.5), 0.5);
}

TEST(ParetoAsymptotics, LeadingTerms) {
  const auto r = pareto_asymptotics(1.5, 1.0, 0.01, 3);
  expect_rel(r.wj_over_k, 1.5 * 1e-3 * specfun::gamma(1.5) / 6.0, 1e-13);
  EXPECT_NEAR(r.wj_over_k, 2.2156e-4, 1e-8);
  EXPECT_NEAR(std::fabs(r.wj_over_k - q_j(kPareto, 0.01, 3)), 0.0, 1e-6);
  EXPECT_DOUBLE_EQ(r.ratio_next, 1.0 - 2.5 / 4.0);
  for (int j = 2; j < 20; ++j) {
    const auto lo = pareto_asymptotics(1.5, 1.0, 0.01, j);
    const auto hi = pareto_asymptotics(1.5, 1.0, 0.01, j + 1);
    EXPECT_NEAR(j * (1.0 - hi.wjplus_over_k / lo.wjplus_over_k), 1.5, 1e-12);
  }
  EXPECT_THROW(pareto_asymptotics(1.5, 1.0, 0.01, 1), DomainError);
  EXPECT_THROW(pareto_asymptotics(1.5, 200.0, 0.01, 3), DomainError);
}

TEST(ParetoAsymptotics, WithinRemainderOfExact) {
  for (double p : {0.1, 0.01, 0.001}) {
    for (int j = 3; j <= 8; ++j) {
      const auto r = pareto_asymptotics(1.5, 1.0, p, j);
      // Remainder plus double rounding of the two evaluations.
      EXPECT_LE(std::fabs(r.wj_over_k - q_j(kPareto, p, j)),
                2.0 * r.remainder_wj + 1e-14 * r.wj_over_k)
          << "p=" << p << " j=" << j;
    }
  }
}

TEST(WeibullSeries, AgreesWithQuadrature) {
  const auto s = weibull_series(0.5, 1.0, 0.1, 2, 1e-6);
  EXPECT_LE(s.declared_error, 1e-6);
  EXPECT_NEAR(s.value, 0.02409625223449164525, s.declared_error);
}

TEST(WeibullSeries, ExponentialBranch) {
  // beta = 1 is the exponential law: Q_j = (p eta)^j / (1 + p eta)^(j+1).
  const auto s = weibull_series(1.0, 2.0, 0.1, 2, 1e-12);
  EXPECT_NEAR(s.value, 0.04 / std::pow(1.2, 3), std::max(s.declared_error, 1e-14));
  // The beta >= 1 branch is continuous in beta at the exponential law.
  const auto near = weibull_series(1.0 + 1e-7, 2.0, 0.1, 2, 1e-12);
  EXPECT_NEAR(near.value, s.value, 1e-7);
}

TEST(WeibullSeries, LooseToleranceStopsEarly) {
  const auto s = weibull_series(0.5, 1.0, 0.1, 2, 10.0);
  EXPECT_EQ(s.terms, 1);
  EXPECT_GT(s.declared_error, 0.0);
}

TEST(WeibullSeries, UnusableParametersReportAccuracy) {
  try {
    weibull_series(0.5, 1.0, 0.001, 2, 1e-12);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("attainable accuracy"), std::string::npos);
  }
}

TEST(Moments, ParetoAgainstReference) {
  const auto m = occupancy_moments(kPareto, 0.01, 2);
  expect_rel(m.m, 0.0016227864356651092171, 1e-8);
  expect_rel(m.m2, 0.00041162087272960915958, 1e-8);
  expect_rel(m.mprime, 0.23596777834872649902, 1e-8);
}

TEST(Moments, DegenerateIsPoissonTail) {
  const auto m = occupancy_moments(FlowSizeDistribution::degenerate(100), 0.02, 3);
  EXPECT_NEAR(m.m, specfun::poisson_tail(2.0, 3), 1e-14);
  EXPECT_NEAR(m.m2, m.m * m.m, 1e-14);
}

TEST(Moments, DerivativeMatchesFiniteDifference) {
  for (const auto& dist : {kPareto, kWeibull, FlowSizeDistribution::pareto(3.0, 2.0)}) {
    for (double p : {0.005, 0.05}) {
      for (int j : {1, 2, 4}) {
        const double h = 1e-5 * p;
        const double fd = (occupancy_moments(dist, p + h, j).m -
                           occupancy_moments(dist, p - h, j).m) /
                          (2.0 * h);
        const auto m = occupancy_moments(dist, p, j);
        expect_rel(m.mprime, fd, 1e-4);
        EXPECT_LE(m.m2, m.m);
        EXPECT_LE(m.m, 1.0);
        EXPECT_GE(m.mprime, 0.0);
      }
    }
  }
}

TEST(Moments, SmallPLimits) {
  // Degenerate{c}: E(v^j) = c^j.
  const auto d = FlowSizeDistribution::degenerate(10);
  const int j = 2;
  const auto m = occupancy_moments(d, 1e-5, j);
  expect_rel(m.m / 1e-10, 100.0 / 2.0, 1e-3);
  expect_rel(m.m2 / 1e-20, 1e4 / 4.0, 1e-3);
  expect_rel(m.mprime / 1e-5, 100.0, 1e-3);
}

TEST(ChenStein, Values) {
  expect_rel(chen_stein_bound(kPareto, 0.01, 2), 0.36802348171030018759, 1e-8);
  expect_rel(chen_stein_bound(FlowSizeDistribution::degenerate(100), 0.01, 2),
             0.7764069926600606032, 1e-8);
}

TEST(ChenStein, SmallPBehaviour) {
  const auto d = FlowSizeDistribution::degenerate(10);
  // j p^(j-1) E(v^j) / ((j-1)! E(v)) with j = 2 is 2 p c.
  for (double p : {1e-4, 1e-5}) {
    expect_rel(chen_stein_bound(d, p, 2) / (2.0 * p * 10.0), 1.0, 20.0 * p * 10.0);
  }
  EXPECT_LT(chen_stein_bound(d, 1e-6, 2), 1e-4);
}

TEST(TailScaling, Predictions) {
  EXPECT_NEAR(tail_scaling_prediction(FlowSizeDistribution::pareto(2, 1), 0.01, 20), 2.5e-7,
              1e-20);
  EXPECT_NEAR(tail_scaling_prediction(kWeibull, 0.01, 1), std::exp(-10.0), 1e-18);
  EXPECT_EQ(tail_scaling_prediction(FlowSizeDistribution::degenerate(100), 0.01, 1), 1.0);
  EXPECT_EQ(tail_scaling_prediction(FlowSizeDistribution::degenerate(100), 0.01, 2), 0.0);
}

TEST(TailScaling, RatioApproachesOne) {
  double prev = INFINITY;
  for (int j = 20; j <= 60; j += 5) {
    const double r = q_tail(kPareto, 0.1, j) / tail_scaling_prediction(kPareto, 0.1, j);
    EXPECT_LT(std::fabs(r - 1.0), prev) << "j=" << j;
    prev = std::fabs(r - 1.0);
  }
  EXPECT_LT(prev, 0.1);
}

TEST(Siegel, Quadratic) {
  EXPECT_NEAR(siegel_concentration(0.0, 0.2), 2 * 0.2 * 0.8, 1e-15);
  EXPECT_NEAR(siegel_concentration(0.0, 0.5), 0.5, 1e-15);
  EXPECT_THROW(siegel_concentration(-0.1, 0.2), DomainError);
  EXPECT_THROW(siegel_concentration(0.81, 0.2), DomainError);
  // v A(j/v - p) increases on [j, j/p] and stays below 2j(1-p).
  const double p = 0.05;
  const int j = 3;
  double prev = -1.0;
  for (double v = j; v <= j / p; v += 0.25) {
    const double value = v * siegel_concentration(std::clamp(j / v - p, 0.0, 1.0 - p), p);
    EXPECT_GE(value, prev - 1e-12);
    EXPECT_LE(value, 2.0 * j * (1.0 - p) + 1e-12);
    prev = value;
  }
}

TEST(RatioBounds, ParetoExample) {
  const auto r = ratio_bounds(FlowSizeDistribution::pareto(2, 1), 0.01, 10, 0.6);
  EXPECT_NEAR(r.a2, std::pow(1000.0 / 937.0, 2), 1e-12);
  expect_rel(r.b_upper, std::exp(-(0.01 / 1.98) * std::pow(1000.0, 0.2)) * 1e4, 1e-12);
  EXPECT_NEAR(r.b_upper, 9801.0, 1.0);
  EXPECT_LE(r.a1, r.a2);
  EXPECT_GE(r.a1, 0.0);
}

TEST(RatioBounds, ConvergeForParetoAndHeavyWeibull) {
  // B vanishes once exp(-c (j/p)^(2 alpha - 1)) beats P(v >= j)/P(v >= j/p);
  // for Weibull the A bounds tighten only when alpha + beta < 1.
  struct Case {
    FlowSizeDistribution dist;
    double alpha;
  };
  for (const auto& c : {Case{FlowSizeDistribution::pareto(2, 1), 0.8},
                        Case{FlowSizeDistribution::weibull(0.1, 1), 0.75}}) {
    const auto small = ratio_bounds(c.dist, 0.1, 10, c.alpha);
    const auto large = ratio_bounds(c.dist, 0.1, 100000, c.alpha);
    EXPECT_LE(small.a1, small.a2);
    EXPECT_LE(large.a1, large.a2);
    EXPECT_LT(std::fabs(large.a1 - 1.0), std::fabs(small.a1 - 1.0));
    EXPECT_LT(std::fabs(large.a2 - 1.0), std::fabs(small.a2 - 1.0));
    EXPECT_LT(std::fabs(large.a2 - 1.0), 0.2);
    EXPECT_LT(large.b_upper, 1e-20);
  }
}

TEST(RatioBounds, Preconditions) {
  EXPECT_THROW(ratio_bounds(kPareto, 0.01, 10, 0.5), DomainError);
  EXPECT_THROW(ratio_bounds(kPareto, 0.01, 10, 1.0), DomainError);
  EXPECT_THROW(ratio_bounds(kPareto, 0.01, 0, 0.6), DomainError);
}

}  // namespace
}  // namespace urnflow::theory
