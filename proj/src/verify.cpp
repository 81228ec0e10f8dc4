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

#include "urnflow/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"
#include "urnflow/error.hpp"
#include "urnflow/inference.hpp"
#include "urnflow/metrics.hpp"
#include "urnflow/quadrature.hpp"
#include "urnflow/simulator.hpp"
#include "urnflow/specfun.hpp"
#include "urnflow/theory.hpp"

namespace urnflow::verify {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

void add(CriterionResult& r, std::string label, double measured, double lower, double upper) {
  const bool ok = std::isfinite(measured) && measured >= lower && measured <= upper;
  r.checks.push_back({std::move(label), measured, lower, upper, ok});
}

SamplingConfig config(const Options& opt, int criterion, double p, SamplingModel model,
                      std::int64_t trials, PopulationMode population = PopulationMode::kRedrawn) {
  SamplingConfig c;
  c.p = p;
  c.model = model;
  c.seed = derive_seed(opt.seed, Stream::kAux,
                       static_cast<std::uint64_t>(criterion));
  c.trials = trials;
  c.population = population;
  c.threads = opt.threads;
  return c;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Pareto{1.5,1}, p = 0.01, K = 1e5, uniform model; shared by 1 and 3.
TrialEnsemble mean_value_ensemble(const Options& opt) {
  const auto dist = FlowSizeDistribution::pareto(1.5, 1.0);
  return run_trials(dist, 100000,
                    config(opt, 1, 0.01, SamplingModel::kUniform, opt.quick ? 50 : 200), 12);
}

void means_against_q(CriterionResult& r, const TrialEnsemble& ens, double allowance) {
  const auto& dist = ens.distribution();
  const double p = ens.config().p;
  const double k = static_cast<double>(ens.colors());
  const double t = static_cast<double>(ens.trials());
  for (int j = 1; j <= 10; ++j) {
    const double q = theory::q_j(dist, p, j, theory::Law::kSampled);
    const double mean = ens.mean_w(j) / k;
    const double se = std::sqrt(ens.var_w(j) / t) / k;
    add(r, "j=" + std::to_string(j) + " |mean(W_j)/K - Q_j|", std::abs(mean - q), -kInf,
        allowance + 4.0 * se);
    r.notes.push_back(fmt("j=%.0f: mean W_j/K = %.6e, Q_j(integer law) = %.6e", j, mean, q) +
                      fmt(", Q_j(continuous law) = %.6e", theory::q_j(dist, p, j)));
  }
}

CriterionResult c1(const Options& opt) {
  CriterionResult r;
  r.title = "mean occupancy converges to Q_j (uniform model)";
  const auto ens = mean_value_ensemble(opt);
  const double lecam = theory::lecam_uniform_bound(ens.distribution(), 0.01, ens.colors());
  r.notes.push_back(fmt("Le Cam bound %.6e", lecam));
  means_against_q(r, ens, lecam);
  return r;
}

CriterionResult c2(const Options& opt) {
  CriterionResult r;
  r.title = "mean occupancy within p of Q_j (probabilistic model)";
  const auto dist = FlowSizeDistribution::pareto(1.5, 1.0);
  const auto ens = run_trials(
      dist, 10000, config(opt, 2, 0.01, SamplingModel::kProbabilistic, opt.quick ? 50 : 200), 12);
  means_against_q(r, ens, theory::lecam_probabilistic_bound(0.01));
  return r;
}

CriterionResult c3(const Options& opt) {
  CriterionResult r;
  r.title = "Pareto ratio law E(W_{j+1})/E(W_j) = 1 - (a+1)/(j+1)";
  const auto ens = mean_value_ensemble(opt);
  const double a = 1.5;
  const double pb = 0.01;
  const double t = static_cast<double>(ens.trials());
  for (int j = 3; j <= 8; ++j) {
    const double x = ens.mean_w(j);
    const double y = ens.mean_w(j + 1);
    const double ratio = y / x;
    // Delta method, covariance ignored.
    const double se = ratio * std::sqrt(ens.var_w(j) / (t * x * x) + ens.var_w(j + 1) / (t * y * y));
    const double target = 1.0 - (a + 1.0) / (j + 1.0);
    const double tol = std::max(std::pow(pb, j - a), 4.0 * se);
    add(r, "j=" + std::to_string(j) + " |ratio - (1-(a+1)/(j+1))|", std::abs(ratio - target),
        -kInf, tol);
    r.notes.push_back(fmt("j=%.0f: ratio %.5f, leading term %.5f", j, ratio, target));
  }
  return r;
}

// Pareto{1.5,1}, K = 1e6, p = 0.01, uniform, 20 trials; shared by 4 and 5.
TrialEnsemble estimator_ensemble(const Options& opt) {
  const auto dist = FlowSizeDistribution::pareto(1.5, 1.0);
  auto cfg = config(opt, 4, 0.01, SamplingModel::kUniform, 20);
  cfg.keep_trials = true;
  return run_trials(dist, 1000000, cfg, 16);
}

std::vector<double> pooled_wplus(const TrialEnsemble& ens) {
  std::vector<double> w(static_cast<std::size_t>(ens.j_max()) + 1);
  for (int j = 0; j <= ens.j_max(); ++j) w[j] = ens.mean_wplus(j);
  return w;
}

CriterionResult c4(const Options& opt) {
  CriterionResult r;
  r.title = "shape estimator on pooled W_j^+";
  const auto ens = estimator_ensemble(opt);
  const auto w = pooled_wplus(ens);
  const auto shape = inference::estimate_shape(w, 3, 10);
  add(r, "median a_hat over j=3..10", shape.a_hat, 1.35, 1.65);
  for (const auto& e : shape.per_j) {
    r.notes.push_back(fmt("j=%.0f: a_hat %.4f", e.j, e.a_hat) + (e.used ? "" : " (dropped)"));
  }
  return r;
}

CriterionResult c5(const Options& opt) {
  CriterionResult r;
  r.title = "scale and color-count estimators";
  // Noiseless round trip through the two generating equations.
  {
    const double a = 1.5, b = 1.0, k = 1e5, p = 0.01;
    const int j = 4;
    const double wplus =
        k * std::exp(a * std::log(p * b) + specfun::log_gamma(j - a) - specfun::log_gamma(j));
    const double k_tilde = k * theory::one_minus_q0_pareto(a, b, p);
    const auto s = inference::estimate_scale_and_colors(a, wplus, j, k_tilde, p);
    add(r, "round trip |b_hat/b - 1|", std::abs(s.b_hat / b - 1.0), -kInf, 1e-6);
    add(r, "round trip |K_hat/K - 1|", std::abs(s.k_hat / k - 1.0), -kInf, 1e-6);
  }
  // Pooled statistics, medians over j as for the shape.
  const auto ens = estimator_ensemble(opt);
  const auto pooled = inference::estimate_pareto(pooled_wplus(ens), ens.k_tilde_mean(), 0.01, 3, 10);
  add(r, "median over j of b_hat", pooled.b_hat, 0.85, 1.15);
  add(r, "median over j of K_hat", pooled.k_hat, 0.85e6, 1.15e6);
  for (const auto& s : pooled.per_j) {
    r.notes.push_back(fmt("j=%.0f: b_hat %.4f, K_hat %.0f", s.j, s.b_hat, s.k_hat));
  }
  // Trial by trial, for the spread.
  std::vector<double> bs;
  std::vector<double> ks;
  for (const auto& st : ens.per_trial()) {
    std::vector<double> w(st.w_plus.begin(), st.w_plus.end());
    try {
      const auto rep = inference::estimate_pareto(w, static_cast<double>(st.k_tilde), 0.01, 3, 10);
      if (!rep.shape.valid) continue;
      bs.push_back(rep.b_hat);
      ks.push_back(rep.k_hat);
    } catch (const std::exception&) {
    }
  }
  if (!bs.empty()) {
    r.notes.push_back(fmt("per-trial estimates (%.0f trials): median b_hat %.4f, median K_hat %.0f",
                          static_cast<double>(bs.size()), median(bs), median(ks)));
  }
  return r;
}

CriterionResult c6(const Options& opt) {
  CriterionResult r;
  r.title = "Poisson approximation of W_2^+ (fixed population)";
  const std::int64_t trials = opt.quick ? 20000 : 100000;
  int index = 0;
  for (const auto& dist : {FlowSizeDistribution::degenerate(100), FlowSizeDistribution::pareto(3.0, 1.0)}) {
    const auto ens = run_trials(dist, 10000,
                                config(opt, 60 + index++, 0.01, SamplingModel::kUniform, trials,
                                       PopulationMode::kFixed),
                                4);
    const auto values = ens.wplus_values(2);
    const double lambda = ens.mean_wplus(2);
    const double tv = metrics::tv_to_poisson(values, lambda);
    const double bound = theory::chen_stein_bound(dist, 0.01, 2);
    add(r, dist.to_string() + " TV(W_2^+, Poisson(mean))", tv, -kInf, bound + 0.02);
    r.notes.push_back(dist.to_string() + fmt(": mean W_2^+ %.4f, Chen-Stein bound %.6f", lambda, bound));
  }
  return r;
}

CriterionResult c7(const Options& opt) {
  CriterionResult r;
  r.title = "normal approximation of standardized W_2^+";
  const auto dist = FlowSizeDistribution::pareto(3.0, 1.0);
  const auto ens = run_trials(dist, 100000,
                              config(opt, 7, 0.05, SamplingModel::kUniform, opt.quick ? 2000 : 10000,
                                     PopulationMode::kFixed),
                              4);
  const auto values = ens.wplus_values(2);
  const double mean = ens.mean_wplus(2);
  std::vector<double> z;
  z.reserve(values.size());
  for (auto v : values) z.push_back((static_cast<double>(v) - mean) / std::sqrt(mean));
  add(r, "KS distance to N(0,1)", metrics::ks_to_standard_normal(z), -kInf, 0.05);
  r.notes.push_back(fmt("mean W_2^+ %.3f, variance %.3f", mean, ens.var_wplus(2)));
  return r;
}

CriterionResult c8(const Options& opt) {
  CriterionResult r;
  r.title = "tail scaling P(v~ >= j) against P(v >= j/p)";
  const auto dist = FlowSizeDistribution::pareto(2.0, 1.0);
  const double p = 0.01;
  const double k = 1e6;
  const auto ens = run_trials(
      dist, 1000000, config(opt, 8, p, SamplingModel::kProbabilistic, opt.quick ? 20 : 200), 20);
  const double t = static_cast<double>(ens.trials());
  for (int j = 5; j <= 15; ++j) {
    const double pred = theory::tail_scaling_prediction(dist, p, j);
    const double ratio = ens.mean_wplus(j) / k / pred;
    const double se = std::sqrt(ens.var_wplus(j) / t) / k / pred;
    add(r, "j=" + std::to_string(j) + " |ratio - 1|", std::abs(ratio - 1.0), -kInf, 0.15);
    const auto rb = theory::ratio_bounds(dist, p, j, 0.6);
    add(r, "j=" + std::to_string(j) + " ratio within [a1, a2 + b_upper]", ratio, rb.a1 - 4.0 * se,
        rb.a2 + rb.b_upper + 4.0 * se);
    // Large-K limit of the ratio for this law, for comparison.
    const double limit = theory::q_tail(dist, p, j) / pred;
    r.notes.push_back(fmt("j=%.0f: measured ratio %.4f, large-K limit %.4f", j, ratio, limit) +
                      fmt(", a1 %.4g, a2 %.4g", rb.a1, rb.a2));
  }
  return r;
}

// Gamma(s, x) by direct quadrature of t^(s-1) e^-t on [x, x + 745].
double incomplete_gamma_quadrature(double s, double x) {
  auto f = [s, x](double u) { return std::pow(x + u, s - 1.0) * std::exp(-u); };
  std::vector<double> bps{0.0};
  for (double b : {0.01 * x, 0.1 * x, x, 1.0, 4.0, 16.0, 64.0, 256.0}) {
    if (b > 0.0 && b < 745.0) bps.push_back(b);
  }
  bps.push_back(745.0);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  const auto q = integrate(f, bps, {.abs_tol = 0.0, .rel_tol = 1e-14, .max_intervals = 20000});
  return q.value * std::exp(-x);
}

// p * int_b^inf e^{-px} (b/x)^a dx with x = b e^t.
double pareto_tail_integral(double a, double b, double p) {
  const double pb = p * b;
  auto f = [a, pb](double t) { return pb * std::exp((1.0 - a) * t - pb * std::exp(t)); };
  const double top = std::log(745.0 / pb);
  std::vector<double> bps{0.0, top};
  const double peak = std::log(1.0 / pb);
  if (peak > 0.0 && peak < top) bps.insert(bps.begin() + 1, peak);
  return integrate(f, bps, {.abs_tol = 0.0, .rel_tol = 1e-14, .max_intervals = 20000}).value;
}

CriterionResult c9(const Options&) {
  CriterionResult r;
  r.title = "special-function identities";
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double x = -9.95 + 0.16 * k;
    const double lhs = specfun::gamma(x + 1.0);
    worst = std::max(worst, std::abs(lhs - x * specfun::gamma(x)) / std::abs(lhs));
  }
  add(r, "max relative |Gamma(x+1) - x Gamma(x)|, 1000 points", worst, -kInf, 1e-12);

  worst = 0.0;
  for (double s : {-2.5, -1.5, -0.75, -0.5, -0.25, 0.0, 0.3, 0.5, 1.0, 2.5, 7.2}) {
    for (double x : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 30.0}) {
      const double ref = incomplete_gamma_quadrature(s, x);
      worst = std::max(worst, std::abs(specfun::upper_incomplete_gamma(s, x) - ref) / ref);
    }
  }
  add(r, "max relative error of Gamma(s,x) against quadrature", worst, -kInf, 1e-10);

  double worst_exact = 0.0;
  double worst_bp_form = 0.0;
  for (double a : {1.1, 1.5, 2.0, 3.0, 4.5}) {
    for (const auto& [b, p] : {std::pair{1.0, 0.01}, {2.0, 0.05}, {0.5, 0.2}, {10.0, 0.001}}) {
      const double bp = b * p;
      const double ref = -std::expm1(-bp) + pareto_tail_integral(a, b, p);
      const double exact = theory::one_minus_q0(FlowSizeDistribution::pareto(a, b), p);
      worst_exact = std::max(worst_exact, std::abs(exact - ref) / ref);
      // The form bp + (bp)^a Gamma(1-a, bp) exceeds it by bp - (1 - e^{-bp}).
      const double bp_form = bp + std::pow(bp, a) * specfun::upper_incomplete_gamma(1.0 - a, bp);
      const double gap = bp + std::expm1(-bp);
      worst_bp_form = std::max(worst_bp_form, std::abs((bp_form - exact) - gap) / ref);
    }
  }
  add(r, "max relative error of 1 - Q_0 closed form, 20 triples", worst_exact, -kInf, 1e-8);
  add(r, "bp-form minus exact form equals bp - (1 - e^{-bp})", worst_bp_form, -kInf, 1e-12);
  return r;
}

CriterionResult c10(const Options&) {
  CriterionResult r;
  r.title = "derivative identity and small-p limits";
  double worst = 0.0;
  int points = 0;
  const FlowSizeDistribution dists[] = {
      FlowSizeDistribution::pareto(1.5, 1.0), FlowSizeDistribution::pareto(3.0, 2.0),
      FlowSizeDistribution::weibull(0.5, 1.0), FlowSizeDistribution::weibull(0.8, 10.0),
      FlowSizeDistribution::degenerate(100)};
  const double h = 1e-5;
  for (const auto& dist : dists) {
    for (double p : {0.005, 0.02, 0.1}) {
      for (int j : {1, 2, 3}) {
        const auto m = theory::occupancy_moments(dist, p, j);
        const double up = theory::occupancy_moments(dist, p + h, j).m;
        const double down = theory::occupancy_moments(dist, p - h, j).m;
        const double fd = (up - down) / (2.0 * h);
        worst = std::max(worst, std::abs(m.mprime - fd) / std::abs(m.mprime));
        ++points;
      }
    }
  }
  add(r, "max relative |m'_j - finite difference| over " + std::to_string(points) + " points",
      worst, -kInf, 1e-4);

  // Degenerate{10}: m_j/p^j -> c^j/j!, m2_j/p^2j -> c^2j/j!^2, m'_j/p^(j-1) -> c^j/(j-1)!.
  const auto deg = FlowSizeDistribution::degenerate(10);
  const double c = 10.0;
  int monotone = 0;
  int cases = 0;
  for (int j : {1, 2, 3}) {
    const double fj = std::exp(specfun::log_gamma(j + 1.0));
    double prev[3] = {kInf, kInf, kInf};
    bool ok[3] = {true, true, true};
    for (double p : {1e-2, 1e-3, 1e-4}) {
      const auto m = theory::occupancy_moments(deg, p, j);
      const double err[3] = {
          std::abs(m.m / std::pow(p * c, j) * fj - 1.0),
          std::abs(m.m2 / std::pow(p * c, 2 * j) * fj * fj - 1.0),
          std::abs(m.mprime / (std::pow(p, j - 1) * std::pow(c, j)) * (fj / j) - 1.0)};
      for (int i = 0; i < 3; ++i) {
        ok[i] = ok[i] && err[i] < prev[i];
        prev[i] = err[i];
      }
    }
    for (bool b : ok) {
      monotone += b ? 1 : 0;
      ++cases;
    }
  }
  add(r, "small-p limits approached monotonically (cases)", monotone, cases, cases);
  return r;
}

}  // namespace

std::vector<int> suite_criteria(std::string_view suite) {
  if (suite == "means") return {1, 2, 3};
  if (suite == "estimators") return {4, 5};
  if (suite == "poisson") return {6, 7};
  if (suite == "tails") return {8};
  if (suite == "identities") return {9, 10};
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  throw ParseError("unknown suite '" + std::string(suite) +
                   "' (means, estimators, poisson, tails, identities, all)");
}

CriterionResult run_criterion(int id, const Options& options) {
  using Fn = CriterionResult (*)(const Options&);
  static constexpr Fn kTable[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
  if (id < 1 || id > kCriterionCount) {
    throw DomainError("criterion id must lie in 1.." + std::to_string(kCriterionCount));
  }
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r = kTable[id - 1](options);
  r.id = id;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = !r.checks.empty() &&
             std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.passed; });
  return r;
}

std::string report_json(std::string_view suite, const Options& options,
                        const std::vector<CriterionResult>& results) {
  using nlohmann::json;
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  json out;
  out["suite"] = suite;
  out["quick"] = options.quick;
  out["seed"] = options.seed;
  bool all = true;
  json list = json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    json checks = json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"label", c.label},
                        {"measured", num(c.measured)},
                        {"lower", num(c.lower)},
                        {"upper", num(c.upper)},
                        {"passed", c.passed}});
    }
    list.push_back({{"id", r.id},
                    {"title", r.title},
                    {"passed", r.passed},
                    {"checks", std::move(checks)},
                    {"notes", r.notes}});
  }
  out["passed"] = all;
  out["criteria"] = std::move(list);
  return out.dump(1) + "\n";
}

}  // namespace urnflow::verify
