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
#include <cstdio>
#include <limits>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "urnflow/error.hpp"
#include "urnflow/quadrature.hpp"
#include "urnflow/specfun.hpp"

namespace urnflow::theory {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// e^-700 is below any tolerance we use; stop the hazard integral there.
constexpr double kMaxHazard = 700.0;
// Beyond this many integer terms the discrete sum is refused.
constexpr std::int64_t kMaxDiscreteTerms = 20'000'000;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

void check_p(double p, const char* what) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError(std::string(what) + ": p must lie in (0, 1]");
  }
}

void check_j(int j, int min, const char* what) {
  if (j < min) {
    throw DomainError(std::string(what) + ": j must be at least " + std::to_string(min));
  }
}

// Hints for E(g(Poisson(pv))) with g depending on the count near j.
ExpectationHints poisson_hints(double p, int j, double limit) {
  const double jj = static_cast<double>(j);
  ExpectationHints h;
  h.peak = std::max(jj, 1.0) / p;
  h.relative_width = 1.0 / std::sqrt(std::max(jj, 1.0));
  h.settled = (jj + 15.0 * std::sqrt(jj + 1.0) + 50.0) / p;
  h.limit = limit;
  return h;
}

double expect_continuous(const FlowSizeDistribution& dist,
                         const std::function<double(double)>& f, const ExpectationHints& h) {
  const double lo = dist.support_min();
  if (h.settled <= lo) return h.limit;
  const double s_hi = std::min(dist.cumulative_hazard(h.settled), kMaxHazard);

  std::vector<double> bps{0.0, s_hi};
  for (double k : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0}) {
    const double x = h.peak * std::exp(k * h.relative_width);
    if (x > lo && x < h.settled) {
      const double s = dist.cumulative_hazard(x);
      if (s > 0.0 && s < s_hi) bps.push_back(s);
    }
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  auto integrand = [&](double s) { return f(dist.hazard_quantile(s)) * std::exp(-s); };
  const auto r = integrate(integrand, bps,
                           {.abs_tol = 1e-300, .rel_tol = 1e-12, .max_intervals = 20000});
  return r.value + h.limit * std::exp(-s_hi);
}

double expect_sampled(const FlowSizeDistribution& dist, const std::function<double(double)>& f,
                      const ExpectationHints& h) {
  const double top = std::ceil(std::max(h.settled, 1.0));
  if (top > static_cast<double>(kMaxDiscreteTerms)) {
    throw DomainError("expectation over the integer law needs more than " +
                      std::to_string(kMaxDiscreteTerms) + " terms");
  }
  const auto n_max = static_cast<std::int64_t>(top);
  // Neumaier summation, largest n first so the small tail terms are not lost.
  double sum = 0.0;
  double comp = 0.0;
  double upper = dist.discrete_tail(n_max);
  const double remainder = h.limit * upper;
  for (std::int64_t n = n_max; n >= 1; --n) {
    const double lower = dist.discrete_tail(n - 1);
    const double term = (lower - upper) * f(static_cast<double>(n));
    upper = lower;
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + comp + remainder;
}

const Pareto* as_pareto(const FlowSizeDistribution& d) { return std::get_if<Pareto>(&d.law()); }
const Degenerate* as_degenerate(const FlowSizeDistribution& d) {
  return std::get_if<Degenerate>(&d.law());
}

// P(v >= x) on the continuous law.
double tail_ge(const FlowSizeDistribution& dist, double x) {
  if (const auto* d = as_degenerate(dist)) return static_cast<double>(d->c) >= x ? 1.0 : 0.0;
  return dist.tail(x);
}

// E(v; v > x) of the continuous law.
double upper_partial_mean(const FlowSizeDistribution& dist, double x) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Pareto>) {
          if (x <= d.b) return d.a * d.b / (d.a - 1.0);
          return d.a * std::pow(d.b, d.a) * std::pow(x, 1.0 - d.a) / (d.a - 1.0);
        } else if constexpr (std::is_same_v<T, Weibull>) {
          return d.eta *
                 specfun::upper_incomplete_gamma(1.0 + 1.0 / d.beta, std::pow(x / d.eta, d.beta));
        } else {
          const double c = static_cast<double>(d.c);
          return c > x ? c : 0.0;
        }
      },
      dist.law());
}

double pareto_q_j(double a, double b, double p, int j) {
  const double x = p * b;
  const double s = j - a;
  if (s > 0.0) {
    const double log_scale =
        a * std::log(x) + specfun::log_gamma(s) - specfun::log_gamma(j + 1.0);
    return a * std::exp(log_scale) * specfun::regularized_upper_gamma(s, x);
  }
  return a * std::pow(x, a) * specfun::upper_incomplete_gamma(s, x) /
         std::exp(specfun::log_gamma(j + 1.0));
}

}  // namespace

const char* to_string(QjMethod method) {
  switch (method) {
    case QjMethod::kClosedForm:
      return "closed_form";
    case QjMethod::kQuadrature:
      return "quadrature";
    case QjMethod::kDiscreteSum:
      return "discrete_sum";
  }
  return "unknown";
}

double expect(const FlowSizeDistribution& dist, const std::function<double(double)>& f,
              const ExpectationHints& hints, Law law) {
  if (const auto* d = as_degenerate(dist)) return f(static_cast<double>(d->c));
  if (law == Law::kSampled) return expect_sampled(dist, f, hints);
  return expect_continuous(dist, f, hints);
}

double q_j_quadrature(const FlowSizeDistribution& dist, double p, int j) {
  check_p(p, "q_j");
  check_j(j, 0, "q_j");
  auto f = [p, j](double x) { return specfun::poisson_pmf(p * x, j); };
  return expect(dist, f, poisson_hints(p, j, 0.0));
}

double q_j(const FlowSizeDistribution& dist, double p, int j, Law law) {
  check_p(p, "q_j");
  check_j(j, 0, "q_j");
  if (const auto* d = as_degenerate(dist)) {
    return specfun::poisson_pmf(p * static_cast<double>(d->c), j);
  }
  if (law == Law::kSampled) {
    auto f = [p, j](double x) { return specfun::poisson_pmf(p * x, j); };
    return expect_sampled(dist, f, poisson_hints(p, j, 0.0));
  }
  if (const auto* d = as_pareto(dist)) return pareto_q_j(d->a, d->b, p, j);
  return q_j_quadrature(dist, p, j);
}

QjTable q_table(const FlowSizeDistribution& dist, double p, int j_max, Law law) {
  check_j(j_max, 0, "q_table");
  QjTable table;
  table.p = p;
  if (law == Law::kSampled && !dist.is_degenerate()) {
    table.method = QjMethod::kDiscreteSum;
  } else if (dist.is_weibull()) {
    table.method = QjMethod::kQuadrature;
  } else {
    table.method = QjMethod::kClosedForm;
  }
  table.values.reserve(static_cast<std::size_t>(j_max) + 1);
  for (int j = 0; j <= j_max; ++j) table.values.push_back(q_j(dist, p, j, law));
  return table;
}

double q_tail(const FlowSizeDistribution& dist, double p, int j, Law law) {
  check_p(p, "q_tail");
  check_j(j, 0, "q_tail");
  if (j == 0) return 1.0;
  auto f = [p, j](double x) { return specfun::poisson_tail(p * x, j); };
  return expect(dist, f, poisson_hints(p, j, 1.0), law);
}

double one_minus_q0_pareto(double a, double b, double p) {
  const double x = b * p;
  return -std::expm1(-x) + std::pow(x, a) * specfun::upper_incomplete_gamma(1.0 - a, x);
}

double one_minus_q0(const FlowSizeDistribution& dist, double p, Law law) {
  check_p(p, "one_minus_q0");
  if (law == Law::kContinuous) {
    if (const auto* d = as_pareto(dist)) return one_minus_q0_pareto(d->a, d->b, p);
  }
  auto f = [p](double x) { return -std::expm1(-p * x); };
  return expect(dist, f, poisson_hints(p, 0, 1.0), law);
}

double lecam_uniform_bound(const FlowSizeDistribution& dist, double p, std::int64_t colors) {
  check_p(p, "lecam_uniform_bound");
  if (colors < 1) throw DomainError("lecam_uniform_bound: K must be at least 1");
  const double cut = 1.0 / p;
  const double inner = dist.support_min() < cut ? dist.truncated_moment(2, cut) : 0.0;
  const double value = p * inner + upper_partial_mean(dist, cut);
  return value / (static_cast<double>(colors) * dist.mean());
}

double lecam_probabilistic_bound(double p) { return p; }

ParetoAsymptotics pareto_asymptotics(double a, double b, double p, int j) {
  check_p(p, "pareto_asymptotics");
  if (!(a > 0.0 && b > 0.0)) throw DomainError("pareto_asymptotics: a and b must be positive");
  if (!(j > a)) throw DomainError("asymptotic valid only for j > a");
  const double x = p * b;
  if (!(x < 1.0)) throw DomainError("pareto_asymptotics: requires pb < 1");
  ParetoAsymptotics r;
  const double lead = std::exp(a * std::log(x) + specfun::log_gamma(j - a));
  r.wjplus_over_k = lead / std::exp(specfun::log_gamma(static_cast<double>(j)));
  r.wj_over_k = a * lead / std::exp(specfun::log_gamma(j + 1.0));
  r.ratio_next = 1.0 - (a + 1.0) / (j + 1.0);
  r.remainder_ratio = std::pow(x, j - a);
  r.remainder_wj = std::pow(x, j);
  r.remainder_wjplus = std::pow(x, j) / (1.0 - x);
  return r;
}

SeriesResult weibull_series(double beta, double eta, double p, int j, double tol) {
  if (!(beta > 0.0 && eta > 0.0)) throw DomainError("weibull_series: beta and eta must be positive");
  check_p(p, "weibull_series");
  check_j(j, 0, "weibull_series");
  if (!(tol > 0.0)) throw DomainError("weibull_series: tol must be positive");

  const double lpe = std::log(p * eta);
  const double lj = specfun::log_gamma(j + 1.0);
  // log|t_n| and sign of t_n for each branch.
  auto log_term = [&](int n) {
    if (beta < 1.0) {
      const double k = (n + 1.0) * beta;
      return std::log(beta) - lj - specfun::log_gamma(n + 1.0) - k * lpe +
             specfun::log_gamma(k + j);
    }
    return (j + n) * lpe - lj - specfun::log_gamma(n + 1.0) +
           specfun::log_gamma((n + j) / beta + 1.0);
  };

  constexpr int kMaxTerms = 200000;
  SeriesResult r;
  double sum = 0.0;
  double abs_sum = 0.0;
  double cur = std::exp(log_term(0));
  for (int n = 0; n < kMaxTerms; ++n) {
    const double signed_term = (n % 2 == 0) ? cur : -cur;
    sum += signed_term;
    abs_sum += cur;
    const double next = std::exp(log_term(n + 1));
    if (next <= tol) {
      const double roundoff = 4.0 * kEps * abs_sum * std::sqrt(n + 1.0);
      const double declared = next + roundoff;
      // While terms still shrink, more of them can only lower the truncation
      // part; the roundoff part never shrinks.
      if (declared > tol && (roundoff > tol || !(next < cur))) {
        throw DomainError("weibull_series: attainable accuracy " + sci(declared) +
                          " exceeds tol " + sci(tol));
      }
      if (declared <= tol) {
        r.value = sum;
        r.terms = n + 1;
        r.declared_error = declared;
        return r;
      }
    }
    cur = next;
  }
  throw DomainError("weibull_series: terms do not fall below tol within " +
                    std::to_string(kMaxTerms) + " terms");
}

MomentTriple occupancy_moments(const FlowSizeDistribution& dist, double p, int j) {
  check_p(p, "occupancy_moments");
  check_j(j, 1, "occupancy_moments");
  MomentTriple t;
  t.j = j;
  t.p = p;
  const auto hints = poisson_hints(p, j, 1.0);
  t.m = expect(dist, [&](double x) { return specfun::poisson_tail(p * x, j); }, hints);
  t.m2 = expect(
      dist,
      [&](double x) {
        const double y = specfun::poisson_tail(p * x, j);
        return y * y;
      },
      hints);
  auto dh = poisson_hints(p, j, 0.0);
  t.mprime = expect(dist, [&](double x) { return x * specfun::poisson_pmf(p * x, j - 1); }, dh);
  return t;
}

double chen_stein_bound(const FlowSizeDistribution& dist, double p, int j) {
  const auto t = occupancy_moments(dist, p, j);
  if (t.m <= 0.0) return 0.0;
  return t.m2 / t.m + p / dist.mean() * t.mprime * t.mprime / t.m;
}

double tail_scaling_prediction(const FlowSizeDistribution& dist, double p, int j) {
  check_p(p, "tail_scaling_prediction");
  check_j(j, 1, "tail_scaling_prediction");
  return tail_ge(dist, j / p);
}

double siegel_concentration(double x, double p) {
  check_p(p, "siegel_concentration");
  if (!(x >= 0.0 && x <= 1.0 - p)) {
    throw DomainError("siegel_concentration: x must lie in [0, 1 - p]");
  }
  return 2.0 * p * (1.0 - p) + (2.0 / 3.0) * x * (1.0 - 2.0 * p) - (2.0 / 9.0) * x * x;
}

RatioBounds ratio_bounds(const FlowSizeDistribution& dist, double p, int j, double alpha) {
  check_p(p, "ratio_bounds");
  check_j(j, 1, "ratio_bounds");
  if (!(alpha > 0.5 && alpha < 1.0)) throw DomainError("ratio_bounds: alpha must lie in (1/2, 1)");
  if (!(p < 1.0)) throw DomainError("ratio_bounds: p must be below 1");
  const double x = j / p;
  const double shift = std::floor(std::pow(x, alpha));
  if (!(x - shift > 0.0)) throw DomainError("ratio_bounds: j/p - floor((j/p)^alpha) must be positive");

  const double base = tail_ge(dist, x);
  if (!(base > 0.0)) throw DomainError("ratio_bounds: P(v >= j/p) is zero");
  const double spread = std::pow(x, 2.0 * alpha - 1.0);
  RatioBounds r;
  r.j = j;
  r.p = p;
  r.alpha = alpha;
  r.a1 = -std::expm1(-p / (2.0 * (1.0 + std::pow(x, alpha - 1.0))) * spread) *
         tail_ge(dist, x + shift + 1.0) / base;
  r.a2 = tail_ge(dist, x - shift) / base;
  r.b_upper = std::exp(-p / (2.0 * (1.0 - p)) * spread) * tail_ge(dist, j) / base;
  return r;
}

}  // namespace urnflow::theory
