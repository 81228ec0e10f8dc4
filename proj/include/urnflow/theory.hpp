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

#ifndef URNFLOW_THEORY_HPP_
#define URNFLOW_THEORY_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "urnflow/distributions.hpp"

// Closed forms, limits and bounds for the sampled occupancy counts.
//
// Q_j = E((pv)^j e^{-pv} / j!) is the per-color probability that a color
// ends up with exactly j sampled balls when K is large; most functions below
// are expectations over v of a Poisson functional at rate pv.
namespace urnflow::theory {

// Which law of v the expectation is taken over.
enum class Law {
  kContinuous,  // the Pareto/Weibull law itself
  kSampled,     // the integer law produced by FlowSizeDistribution::draw
};

enum class QjMethod { kClosedForm, kQuadrature, kDiscreteSum };

const char* to_string(QjMethod method);

struct QjTable {
  double p = 0.0;
  std::vector<double> values;  // Q_0 .. Q_jmax
  QjMethod method = QjMethod::kQuadrature;
};

// E(f(v)) over the chosen law. `peak` is where f varies fastest (used for
// breakpoints), `limit` is lim_{x->inf} f(x) and `settled` a point beyond
// which f equals `limit` to double precision.
struct ExpectationHints {
  double peak = 1.0;
  double relative_width = 1.0;
  double settled = 1e6;
  double limit = 0.0;
};
double expect(const FlowSizeDistribution& dist, const std::function<double(double)>& f,
              const ExpectationHints& hints, Law law = Law::kContinuous);

// Q_j. Pareto uses a(pb)^a Gamma(j-a, pb)/j!, Weibull quadrature, Degenerate
// the Poisson mass; kSampled sums over the integer law.
double q_j(const FlowSizeDistribution& dist, double p, int j, Law law = Law::kContinuous);
// Q_j by quadrature of the defining expectation, whatever the family.
double q_j_quadrature(const FlowSizeDistribution& dist, double p, int j);
QjTable q_table(const FlowSizeDistribution& dist, double p, int j_max,
                Law law = Law::kContinuous);

// sum_{l>=j} Q_l = E(P(Poisson(pv) >= j)), one integral.
double q_tail(const FlowSizeDistribution& dist, double p, int j, Law law = Law::kContinuous);

// 1 - Q_0 = 1 - E(e^{-pv}): the probability that a color is seen.
// Pareto: 1 - e^{-bp} + (bp)^a Gamma(1-a, bp).
double one_minus_q0(const FlowSizeDistribution& dist, double p, Law law = Law::kContinuous);
double one_minus_q0_pareto(double a, double b, double p);

// E(min(pv, 1) v / V) with V ~ K E(v): bound on |E(W_j)/K - Q_j| under the
// uniform model.
double lecam_uniform_bound(const FlowSizeDistribution& dist, double p, std::int64_t colors);
// The same bound under Bernoulli thinning is p.
double lecam_probabilistic_bound(double p);

struct ParetoAsymptotics {
  double wj_over_k = 0.0;      // a (pb)^a Gamma(j-a) / j!
  double wjplus_over_k = 0.0;  // (pb)^a Gamma(j-a) / (j-1)!
  double ratio_next = 0.0;     // 1 - (a+1)/(j+1)
  // Magnitudes of the neglected remainders.
  double remainder_ratio = 0.0;   // (pb)^(j-a)
  double remainder_wj = 0.0;      // (pb)^j
  double remainder_wjplus = 0.0;  // (pb)^j / (1 - pb)
};
ParetoAsymptotics pareto_asymptotics(double a, double b, double p, int j);

struct SeriesResult {
  double value = 0.0;
  double declared_error = 0.0;
  int terms = 0;
};
// Per-color Q_j of a Weibull law from its power series: the expansion of
// exp(-(x/eta)^beta) for beta < 1, the expansion of exp(-px) for beta >= 1.
// The sum stops before the first term below `tol` (so a loose `tol` returns
// the first term alone); the declared error adds that omitted term to an
// estimate of cancellation roundoff.
// Throws DomainError carrying the attainable accuracy when it exceeds `tol`.
SeriesResult weibull_series(double beta, double eta, double p, int j, double tol);

struct MomentTriple {
  int j = 0;
  double p = 0.0;
  double m = 0.0;       // E(X_j(p))
  double m2 = 0.0;      // E(X_j(p)^2)
  double mprime = 0.0;  // d/dp E(X_j(p)) = E(v (pv)^(j-1) e^{-pv} / (j-1)!)
};
// Moments of X_j(p) = P(Poisson(pv) >= j), j >= 1.
MomentTriple occupancy_moments(const FlowSizeDistribution& dist, double p, int j);

// m2/m + p/E(v) * m'^2/m: limit of the total variation bound between W_j^+
// and a Poisson law with the same conditional mean.
double chen_stein_bound(const FlowSizeDistribution& dist, double p, int j);

// P(v >= j/p) on the continuous law. For the degenerate law the boundary
// counts as inside: P(v >= x) = 1{c >= x}.
double tail_scaling_prediction(const FlowSizeDistribution& dist, double p, int j);

// Siegel's concentration quadratic 2p(1-p) + (2/3)x(1-2p) - (2/9)x^2, for
// x in [0, 1-p].
double siegel_concentration(double x, double p);

struct RatioBounds {
  int j = 0;
  double p = 0.0;
  double alpha = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double b_upper = 0.0;
};
// Explicit bounds on P(v~ >= j) / P(v >= j/p) under Bernoulli thinning:
// the ratio is A + B with a1 <= A <= a2 and 0 <= B <= b_upper.
RatioBounds ratio_bounds(const FlowSizeDistribution& dist, double p, int j, double alpha);

}  // namespace urnflow::theory

#endif  // URNFLOW_THEORY_HPP_
