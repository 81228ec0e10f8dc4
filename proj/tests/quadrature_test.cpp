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

#include "urnflow/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

namespace urnflow {
namespace {

TEST(Quadrature, Polynomial) {
  const double bps[] = {0.0, 2.0};
  const auto r = integrate([](double x) { return x * x * x - x; }, bps);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 2.0, 1e-14);
}

TEST(Quadrature, OscillatoryNeedsSubdivision) {
  const double bps[] = {0.0, 40.0 * std::numbers::pi};
  const auto r = integrate([](double x) { return std::sin(x) * std::sin(x); }, bps);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 20.0 * std::numbers::pi, 1e-9);
  EXPECT_GT(r.intervals, 1);
}

TEST(Quadrature, IntegrableEndpointSingularity) {
  const double bps[] = {0.0, 1.0};
  const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, bps,
                           {.abs_tol = 0.0, .rel_tol = 1e-10, .max_intervals = 5000});
  EXPECT_NEAR(r.value, 2.0, 1e-8);
}

TEST(Quadrature, BreakpointsAtKinks) {
  const double bps[] = {-1.0, 0.0, 1.0};
  const auto r = integrate([](double x) { return std::abs(x); }, bps);
  EXPECT_NEAR(r.value, 1.0, 1e-15);
  EXPECT_EQ(r.intervals, 2);
}

TEST(Quadrature, ReportsNonConvergence) {
  const double bps[] = {0.0, 1.0};
  const auto r = integrate([](double x) { return std::sin(1.0 / (x + 1e-6)); }, bps,
                           {.abs_tol = 0.0, .rel_tol = 1e-14, .max_intervals = 5});
  EXPECT_FALSE(r.converged);
}

}  // namespace
}  // namespace urnflow
