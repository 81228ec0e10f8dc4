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

#include "urnflow/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "urnflow/error.hpp"
#include "urnflow/specfun.hpp"
#include "urnflow/theory.hpp"

namespace urnflow::inference {
namespace {

// Median (p b_hat)^(j - a_hat) above which the report carries a misfit
// warning.
constexpr double kRemainderWarning = 0.1;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// log of (pb)^a Gamma(j-a)/(j-1)!
double log_wplus_per_color(double a, double b, double p, int j) {
  return a * std::log(p * b) + specfun::log_gamma(j - a) - specfun::log_gamma(j);
}

}  // namespace

ShapeEstimate estimate_shape(std::span<const double> wplus, int j_lo, int j_hi) {
  if (j_lo < 1 || j_hi < j_lo) throw DomainError("estimate_shape: invalid j range");
  if (static_cast<std::size_t>(j_hi) + 1 >= wplus.size()) {
    throw DomainError("estimate_shape: W+ must extend to j_hi + 1");
  }
  ShapeEstimate est;
  est.j_lo = j_lo;
  est.j_hi = j_hi;
  for (int j = j_lo; j <= j_hi; ++j) {
    if (!(wplus[j] > 0.0)) throw DomainError("insufficient tail mass at j=" + std::to_string(j));
    ShapeEstimate::PerJ e;
    e.j = j;
    e.a_hat = j * (1.0 - wplus[j + 1] / wplus[j]);
    e.used = e.a_hat > 0.0;
    if (!e.used) est.warnings.push_back("j=" + std::to_string(j) + ": estimate " + fmt(e.a_hat) +
                                        " <= 0 dropped");
    est.per_j.push_back(e);
  }
  auto aggregate = [&] {
    std::vector<double> kept;
    for (const auto& e : est.per_j) {
      if (e.used) kept.push_back(e.a_hat);
    }
    return median(kept);
  };
  est.a_hat = aggregate();
  bool dropped = false;
  bool any_left = false;
  for (const auto& e : est.per_j) any_left |= e.used && e.j > est.a_hat;
  if (any_left) {
    for (auto& e : est.per_j) {
      if (e.used && e.j <= est.a_hat) {
        e.used = false;
        dropped = true;
        est.warnings.push_back("j=" + std::to_string(e.j) + " <= a_hat dropped");
      }
    }
    if (dropped) est.a_hat = aggregate();
  }
  est.valid = est.a_hat > 1.0;
  if (!est.valid) est.warnings.push_back("a_hat " + fmt(est.a_hat) + " <= 1: not a Pareto tail");
  return est;
}

ScaleEstimate estimate_scale_and_colors(double a_hat, double wplus_j, int j, double k_tilde,
                                        double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("estimate_scale_and_colors: p must lie in (0, 1)");
  if (!(a_hat > 0.0)) throw DomainError("estimate_scale_and_colors: a_hat must be positive");
  if (!(j > a_hat)) throw DomainError("estimate_scale_and_colors: requires j > a_hat");
  if (!(wplus_j > 0.0)) throw DomainError("insufficient tail mass at j=" + std::to_string(j));
  if (!(k_tilde > 0.0)) throw DomainError("estimate_scale_and_colors: no observed colors");

  // With K eliminated: log(K~/W) + log c(b) - log(1 - Q_0(b)) = 0.
  const double target = std::log(k_tilde / wplus_j);
  auto f = [&](double log_b) {
    const double b = std::exp(log_b);
    return target + log_wplus_per_color(a_hat, b, p, j) -
           std::log(theory::one_minus_q0_pareto(a_hat, b, p));
  };
  double lo = std::log(1e-9);
  double hi = std::log((1.0 - 1e-9) / p);
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (!(std::isfinite(f_lo) && std::isfinite(f_hi)) || (f_lo > 0.0) == (f_hi > 0.0)) {
    throw ModelError("system inconsistent with Pareto model at this j (j=" + std::to_string(j) +
                     ")");
  }
  for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) <= 1e-12) {
      lo = hi = mid;
      break;
    }
    if ((fm > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  ScaleEstimate s;
  s.j = j;
  s.b_hat = std::exp(0.5 * (lo + hi));
  const double per_color = std::exp(log_wplus_per_color(a_hat, s.b_hat, p, j));
  s.k_hat = wplus_j / per_color;
  s.residual_wplus = (s.k_hat * per_color - wplus_j) / wplus_j;
  s.residual_k_tilde =
      (s.k_hat * theory::one_minus_q0_pareto(a_hat, s.b_hat, p) - k_tilde) / k_tilde;
  s.remainder_magnitude = std::pow(p * s.b_hat, j - a_hat);
  return s;
}

EstimationReport estimate_pareto(std::span<const double> wplus, double k_tilde, double p,
                                 int j_lo, int j_hi) {
  EstimationReport r;
  r.shape = estimate_shape(wplus, j_lo, j_hi);
  r.warnings = r.shape.warnings;
  if (!r.shape.valid) return r;
  std::vector<double> bs;
  std::vector<double> ks;
  for (int j = j_lo; j <= j_hi; ++j) {
    if (!(j > r.shape.a_hat)) continue;
    try {
      auto s = estimate_scale_and_colors(r.shape.a_hat, wplus[j], j, k_tilde, p);
      bs.push_back(s.b_hat);
      ks.push_back(s.k_hat);
      r.per_j.push_back(s);
    } catch (const ModelError& e) {
      r.warnings.push_back(e.what());
    }
  }
  if (r.per_j.empty()) {
    throw ModelError("system inconsistent with Pareto model at every j in range");
  }
  r.b_hat = median(bs);
  r.k_hat = median(ks);
  // The equations keep only leading terms, so they can be solved exactly even
  // for data from another law. Large neglected terms are the misfit signal.
  std::vector<double> rem;
  for (const auto& s : r.per_j) rem.push_back(s.remainder_magnitude);
  const double typical = median(rem);
  if (typical > kRemainderWarning) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "median neglected term (p b_hat)^(j - a_hat) = %.3g: outside the "
                  "Pareto asymptotic regime, estimates unreliable",
                  typical);
    r.warnings.push_back(buf);
  }
  return r;
}

EstimationReport estimate_pareto(const TrialEnsemble& ensemble, int j_lo, int j_hi) {
  if (j_hi + 1 > ensemble.j_max()) {
    throw DomainError("estimate: j range exceeds the ensemble's j_max");
  }
  std::vector<double> wplus(static_cast<std::size_t>(ensemble.j_max()) + 1);
  for (int j = 0; j <= ensemble.j_max(); ++j) wplus[j] = ensemble.mean_wplus(j);
  return estimate_pareto(wplus, ensemble.k_tilde_mean(), ensemble.config().p, j_lo, j_hi);
}

std::vector<TailPoint> rescaled_tail(std::span<const std::int64_t> sampled_counts, double p,
                                     double colors) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("rescaled_tail: p must lie in (0, 1]");
  if (!(colors > 0.0)) throw DomainError("rescaled_tail: colors must be positive");
  std::int64_t top = 0;
  for (auto c : sampled_counts) top = std::max(top, c);
  // counts_at_least[j] = number of colors with at least j sampled balls.
  std::vector<double> at(static_cast<std::size_t>(top) + 2, 0.0);
  for (auto c : sampled_counts) {
    if (c > 0) at[static_cast<std::size_t>(c)] += 1.0;
  }
  for (std::int64_t j = top - 1; j >= 1; --j) at[j] += at[j + 1];
  std::vector<TailPoint> out;
  for (std::int64_t j = 1; j <= top + 1; ++j) {
    out.push_back({static_cast<int>(j), j / p, at[static_cast<std::size_t>(j)] / colors});
  }
  return out;
}

std::vector<TailPoint> rescaled_tail_from_wplus(std::span<const double> wplus, double p,
                                                double colors) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("rescaled_tail: p must lie in (0, 1]");
  if (!(colors > 0.0)) throw DomainError("rescaled_tail: colors must be positive");
  std::vector<TailPoint> out;
  for (std::size_t j = 1; j < wplus.size(); ++j) {
    out.push_back({static_cast<int>(j), static_cast<double>(j) / p, wplus[j] / colors});
    if (wplus[j] <= 0.0) break;
  }
  return out;
}

WeibullFit fit_weibull_tail(std::span<const TailPoint> points, double beta_min,
                            double beta_max, double beta_step) {
  if (!(beta_min > 0.0 && beta_max >= beta_min && beta_step > 0.0)) {
    throw DomainError("fit_weibull_tail: invalid beta grid");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& pt : points) {
    if (pt.p_hat > 0.0 && pt.p_hat < 1.0 && pt.x > 0.0) {
      xs.push_back(pt.x);
      ys.push_back(-std::log(pt.p_hat));
    }
  }
  if (xs.size() < 2) throw DomainError("fit_weibull_tail: need at least two tail points");
  WeibullFit best;
  best.rss = std::numeric_limits<double>::infinity();
  best.points = static_cast<int>(xs.size());
  const int steps = static_cast<int>(std::floor((beta_max - beta_min) / beta_step + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const double beta = beta_min + i * beta_step;
    double szz = 0.0;
    double syz = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double z = std::pow(xs[k], beta);
      szz += z * z;
      syz += ys[k] * z;
    }
    const double slope = syz / szz;
    if (!(slope > 0.0)) continue;
    double rss = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double r = ys[k] - slope * std::pow(xs[k], beta);
      rss += r * r;
    }
    if (rss < best.rss) {
      best.rss = rss;
      best.beta = beta;
      best.eta = std::pow(slope, -1.0 / beta);
    }
  }
  if (!std::isfinite(best.rss)) throw DomainError("fit_weibull_tail: no admissible fit");
  return best;
}

}  // namespace urnflow::inference
