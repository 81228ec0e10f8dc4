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

#ifndef URNFLOW_SPECFUN_HPP_
#define URNFLOW_SPECFUN_HPP_

#include <cstdint>

// Special functions used by the occupancy closed forms. Everything here is
// pure and reentrant.
namespace urnflow::specfun {

// Euler gamma. Throws DomainError at the poles 0, -1, -2, ...
double gamma(double x);

// log|Gamma(x)| for x > 0.
double log_gamma(double x);

// Upper incomplete gamma Gamma(s, x) = int_x^inf t^(s-1) e^-t dt for any real
// s and x > 0. Negative s is reduced with the downward recurrence
// Gamma(s, x) = (Gamma(s+1, x) - x^s e^-x) / s.
double upper_incomplete_gamma(double s, double x);

// Regularized Q(s, x) = Gamma(s, x) / Gamma(s) for s > 0, x >= 0. Unlike the
// unregularized function it does not overflow for large s.
double regularized_upper_gamma(double s, double x);

// Poisson probabilities, evaluated in log space.
double log_poisson_pmf(double lambda, std::int64_t n);
double poisson_pmf(double lambda, std::int64_t n);

// P(Q_lambda >= j), summed from whichever side of the mode is smaller.
double poisson_tail(double lambda, std::int64_t j);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace urnflow::specfun

#endif  // URNFLOW_SPECFUN_HPP_
