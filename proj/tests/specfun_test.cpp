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

#include "urnflow/specfun.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "urnflow/error.hpp"

namespace urnflow::specfun {
namespace {

// Reference values from mpmath at 40 digits.
struct Ref {
  double a, b, value;
};

void expect_rel(double got, double want, double tol) {
  EXPECT_LE(std::abs(got - want), tol * std::abs(want)) << "got " << got << " want " << want;
}

TEST(Gamma, KnownValues) {
  const Ref refs[] = {{0.5, 0, 1.7724538509055160273},
                      {5, 0, 24.0},
                      {-1.5, 0, 2.3632718012073547031},
                      {-0.3, 0, -4.3268511088251927205},
                      {20.25, 0, 256040133328476465.59},
                      {170.5, 0, 5.5620924145599996107e+305},
                      {1e-5, 0, 99999.422794225559493}};
  for (const auto& r : refs) expect_rel(gamma(r.a), r.value, 1e-13);
}

TEST(Gamma, PolesThrow) {
  EXPECT_THROW(gamma(0.0), DomainError);
  EXPECT_THROW(gamma(-3.0), DomainError);
}

TEST(Gamma, Recurrence) {
  for (double x = -9.93; x < 150.0; x += 0.173) {
    expect_rel(gamma(x + 1.0), x * gamma(x), 1e-12);
  }
}

TEST(LogGamma, KnownValues) {
  expect_rel(log_gamma(1000.0), 5905.2204232091812118, 1e-15);
  expect_rel(log_gamma(0.1), 2.252712651734205902, 1e-14);
  expect_rel(log_gamma(7.5), 7.5343642367587329552, 1e-14);
}

TEST(UpperIncompleteGamma, AgainstHighPrecision) {
  const Ref refs[] = {{-2.5, 0.1, 107.73076554032768788},
                      {-1.5, 2, 0.011832994103345997091},
                      {-0.5, 1, 0.17814771178156069019},
                      {0, 0.5, 0.55977359477616081175},
                      {0, 3, 0.013048381094197037413},
                      {0.5, 0.01, 1.5731185223248433247},
                      {2.5, 10, 0.0016613173117794600556},
                      {7.2, 3, 1021.4449356742501798},
                      {-3.7, 0.05, 16443.870420634874156},
                      {30, 25, 7.2316425105390712973e+30},
                      {1e-3, 0.2, 1.2218433737692059291},
                      {-0.25, 40, 4.0981407719552347253e-20},
                      {3, 0.001, 1.9999999996669165667}};
  for (const auto& r : refs) {
    SCOPED_TRACE(testing::Message() << "s=" << r.a << " x=" << r.b);
    expect_rel(upper_incomplete_gamma(r.a, r.b), r.value, 1e-12);
  }
}

TEST(UpperIncompleteGamma, DownwardRecurrence) {
  for (double s : {-2.7, -1.2, -0.4, 0.3, 1.7}) {
    for (double x : {0.02, 0.7, 4.0}) {
      const double lhs = upper_incomplete_gamma(s + 1.0, x);
      const double rhs = s * upper_incomplete_gamma(s, x) + std::pow(x, s) * std::exp(-x);
      expect_rel(lhs, rhs, 1e-12);
    }
  }
}

TEST(UpperIncompleteGamma, ContinuousAcrossBranchBoundaries) {
  // The evaluation switches method near s = 0, s = 1 and x = 1.
  for (double s : {-1e-9, 1e-9, 1.0 - 1e-9, 1.0 + 1e-9}) {
    for (double x : {1.0 - 1e-12, 1.0 + 1e-12}) {
      const double a = upper_incomplete_gamma(s, x);
      const double b = upper_incomplete_gamma(s, 1.0);
      expect_rel(a, b, 1e-8);
    }
  }
}

TEST(UpperIncompleteGamma, RejectsNonPositiveX) {
  EXPECT_THROW(upper_incomplete_gamma(0.5, 0.0), DomainError);
  EXPECT_THROW(upper_incomplete_gamma(-0.5, -1.0), DomainError);
}

TEST(RegularizedUpperGamma, KnownValues) {
  const Ref refs[] = {{5.5, 3, 0.87336425322738456579},
                      {0.5, 0.2, 0.52708925686553807367},
                      {40, 35, 0.78019044517468203442},
                      {2.5, 60, 3.1385797727552960242e-24}};
  for (const auto& r : refs) expect_rel(regularized_upper_gamma(r.a, r.b), r.value, 1e-11);
  EXPECT_DOUBLE_EQ(regularized_upper_gamma(3.0, 0.0), 1.0);
}

TEST(Poisson, PmfKnownValues) {
  expect_rel(poisson_pmf(1000.0, 1000), 0.012614611348721499718, 1e-12);
  expect_rel(poisson_pmf(0.01, 3), 1.6500830562486135253e-7, 1e-13);
  expect_rel(poisson_pmf(2.5, 0), 0.08208499862389879517, 1e-14);
  expect_rel(poisson_pmf(50.0, 70), 0.0013638643347878114088, 1e-12);
  EXPECT_EQ(poisson_pmf(3.0, -1), 0.0);
}

TEST(Poisson, PmfCloseToStirlingAtLargeMean) {
  // At n = lambda the mass is about 1/sqrt(2 pi lambda).
  const double stirling = 1.0 / std::sqrt(2.0 * std::numbers::pi * 1000.0);
  expect_rel(poisson_pmf(1000.0, 1000), stirling, 1e-4);
}

TEST(Poisson, TailKnownValues) {
  expect_rel(poisson_tail(5.0, 10), 0.031828057306204811737, 1e-12);
  expect_rel(poisson_tail(0.01, 3), 1.6542165280748768657e-7, 1e-12);
  expect_rel(poisson_tail(50.0, 30), 0.99908317113854392013, 1e-13);
  expect_rel(poisson_tail(1000.0, 1100), 0.00096263040586655716094, 1e-10);
  EXPECT_EQ(poisson_tail(3.0, 0), 1.0);
}

TEST(Poisson, TailTelescopes) {
  for (double lambda : {0.3, 4.0, 80.0}) {
    for (int j = 1; j < 40; ++j) {
      const double diff = poisson_tail(lambda, j) - poisson_tail(lambda, j + 1);
      EXPECT_NEAR(diff, poisson_pmf(lambda, j), 1e-14);
    }
  }
}

TEST(NormalCdf, KnownValues) {
  expect_rel(normal_cdf(-3.0), 0.0013498980316300945267, 1e-13);
  expect_rel(normal_cdf(-0.5), 0.30853753872598689636, 1e-14);
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  expect_rel(normal_cdf(1.2), 0.88493032977829172335, 1e-14);
  expect_rel(normal_cdf(8.0), 0.9999999999999993779, 1e-15);
}

}  // namespace
}  // namespace urnflow::specfun
