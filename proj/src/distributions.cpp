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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "urnflow/error.hpp"
#include "urnflow/quadrature.hpp"
#include "urnflow/specfun.hpp"

namespace urnflow {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();
// Beyond this cumulative hazard the remaining mass is integrated analytically.
constexpr double kHazardSplit = 60.0;
// Largest count `sample_at` returns; keeps downstream sums inside int64.
constexpr double kMaxCount = 0x1.0p62;

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("distribution spec: cannot parse " + std::string(what) +
                     " value '" + std::string(text) + "'");
  }
  return value;
}

std::map<std::string, std::string, std::less<>> parse_params(std::string_view body) {
  std::map<std::string, std::string, std::less<>> params;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const std::string_view item = body.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ParseError("distribution spec: expected key=value, got '" +
                       std::string(item) + "'");
    }
    auto [it, inserted] =
        params.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    if (!inserted) throw ParseError("distribution spec: duplicate key '" + it->first + "'");
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return params;
}

}  // namespace

FlowSizeDistribution FlowSizeDistribution::pareto(double a, double b) {
  if (!(a > 1.0) || !std::isfinite(a)) {
    throw DomainError("pareto: shape a must be > 1 (finite mean)");
  }
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("pareto: scale b must be > 0");
  return FlowSizeDistribution(Pareto{a, b});
}

FlowSizeDistribution FlowSizeDistribution::weibull(double beta, double eta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("weibull: skew beta must lie in (0, 1)");
  }
  if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("weibull: scale eta must be > 0");
  return FlowSizeDistribution(Weibull{beta, eta});
}

FlowSizeDistribution FlowSizeDistribution::degenerate(std::int64_t c) {
  if (c < 1) throw DomainError("degenerate: c must be a positive integer");
  return FlowSizeDistribution(Degenerate{c});
}

FlowSizeDistribution FlowSizeDistribution::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError("distribution spec '" + std::string(spec) +
                     "': expected family:key=value,...");
  }
  const std::string_view family = spec.substr(0, colon);
  auto params = parse_params(spec.substr(colon + 1));
  auto take = [&](std::string_view key) {
    auto it = params.find(key);
    if (it == params.end()) {
      throw ParseError("distribution spec '" + std::string(spec) + "': missing '" +
                       std::string(key) + "'");
    }
    const double value = parse_number(it->second, key);
    params.erase(it);
    return value;
  };
  auto finish = [&](FlowSizeDistribution d) {
    if (!params.empty()) {
      throw ParseError("distribution spec '" + std::string(spec) + "': unknown key '" +
                       params.begin()->first + "'");
    }
    return d;
  };

  if (family == "pareto") {
    const double a = take("a");
    const double b = take("b");
    return finish(pareto(a, b));
  }
  if (family == "weibull") {
    const double beta = take("beta");
    const double eta = take("eta");
    return finish(weibull(beta, eta));
  }
  if (family == "degenerate") {
    const double c = take("c");
    if (std::floor(c) != c) throw DomainError("degenerate: c must be an integer");
    return finish(degenerate(static_cast<std::int64_t>(c)));
  }
  throw ParseError("unknown distribution family '" + std::string(family) + "'");
}

std::string FlowSizeDistribution::to_string() const {
  return std::visit(
      Overloaded{
          [](const Pareto& d) {
            return "pareto:a=" + format_number(d.a) + ",b=" + format_number(d.b);
          },
          [](const Weibull& d) {
            return "weibull:beta=" + format_number(d.beta) + ",eta=" + format_number(d.eta);
          },
          [](const Degenerate& d) { return "degenerate:c=" + std::to_string(d.c); },
      },
      law_);
}

double FlowSizeDistribution::tail(double x) const {
  return std::visit(
      Overloaded{
          [x](const Pareto& d) { return x <= d.b ? 1.0 : std::pow(d.b / x, d.a); },
          [x](const Weibull& d) {
            return x <= 0.0 ? 1.0 : std::exp(-std::pow(x / d.eta, d.beta));
          },
          [x](const Degenerate& d) { return x < static_cast<double>(d.c) ? 1.0 : 0.0; },
      },
      law_);
}

double FlowSizeDistribution::cumulative_hazard(double x) const {
  return std::visit(
      Overloaded{
          [x](const Pareto& d) { return x <= d.b ? 0.0 : d.a * std::log(x / d.b); },
          [x](const Weibull& d) { return x <= 0.0 ? 0.0 : std::pow(x / d.eta, d.beta); },
          [x](const Degenerate& d) { return x < static_cast<double>(d.c) ? 0.0 : kInf; },
      },
      law_);
}

double FlowSizeDistribution::hazard_quantile(double h) const {
  if (!(h >= 0.0)) throw DomainError("hazard_quantile: h must be non-negative");
  return std::visit(
      Overloaded{
          [h](const Pareto& d) { return d.b * std::exp(h / d.a); },
          [h](const Weibull& d) { return d.eta * std::pow(h, 1.0 / d.beta); },
          [](const Degenerate& d) { return static_cast<double>(d.c); },
      },
      law_);
}

double FlowSizeDistribution::quantile(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("quantile: u must lie in (0, 1]");
  return hazard_quantile(-std::log(u));
}

double FlowSizeDistribution::mean() const {
  return std::visit(
      Overloaded{
          [](const Pareto& d) { return d.a * d.b / (d.a - 1.0); },
          [](const Weibull& d) { return d.eta / d.beta * specfun::gamma(1.0 / d.beta); },
          [](const Degenerate& d) { return static_cast<double>(d.c); },
      },
      law_);
}

double FlowSizeDistribution::support_min() const {
  return std::visit(Overloaded{
                        [](const Pareto& d) { return d.b; },
                        [](const Weibull&) { return 0.0; },
                        [](const Degenerate& d) { return static_cast<double>(d.c); },
                    },
                    law_);
}

double FlowSizeDistribution::truncated_moment(int k, double cutoff) const {
  if (k < 1) throw DomainError("truncated_moment: k must be a positive integer");
  if (!(cutoff > 0.0)) throw DomainError("truncated_moment: cutoff must be positive");
  if (const auto* d = std::get_if<Degenerate>(&law_)) {
    const double c = static_cast<double>(d->c);
    return c <= cutoff ? std::pow(c, k) : 0.0;
  }
  if (const auto* d = std::get_if<Pareto>(&law_);
      d != nullptr && std::isinf(cutoff) && k >= d->a) {
    throw DomainError("truncated_moment: E(v^" + std::to_string(k) +
                      ") diverges for a Pareto law with shape " + format_number(d->a));
  }

  // E(v^k; v <= c) = int_0^H(c) x(s)^k e^-s ds with s the cumulative hazard.
  const double h_cut = std::isinf(cutoff) ? kInf : cumulative_hazard(cutoff);
  if (h_cut <= 0.0) return 0.0;
  const double h_quad = std::min(h_cut, kHazardSplit);
  auto integrand = [&](double s) { return std::pow(hazard_quantile(s), k) * std::exp(-s); };
  const double bps[] = {0.0, std::min(1.0, h_quad), h_quad};
  double total = integrate(integrand, bps, {.abs_tol = 0.0, .rel_tol = 1e-12}).value;
  if (h_cut <= kHazardSplit) return total;

  // Remaining mass on (kHazardSplit, h_cut] in closed form.
  const double s0 = kHazardSplit;
  total += std::visit(
      Overloaded{
          [&](const Pareto& d) {
            // b^k int e^{-s (1 - k/a)} ds
            const double rate = 1.0 - k / d.a;
            const double bk = std::pow(d.b, k);
            if (std::isinf(h_cut)) return bk * std::exp(-rate * s0) / rate;
            if (rate == 0.0) return bk * (h_cut - s0);
            return bk * (std::exp(-rate * s0) - std::exp(-rate * h_cut)) / rate;
          },
          [&](const Weibull& d) {
            // eta^k int s^{k/beta} e^-s ds
            const double shape = 1.0 + k / d.beta;
            const double ek = std::pow(d.eta, k);
            const double upper =
                std::isinf(h_cut) ? 0.0 : specfun::upper_incomplete_gamma(shape, h_cut);
            return ek * (specfun::upper_incomplete_gamma(shape, s0) - upper);
          },
          [](const Degenerate&) { return 0.0; },
      },
      law_);
  return total;
}

std::int64_t FlowSizeDistribution::sample_at(double u) const {
  if (const auto* d = std::get_if<Degenerate>(&law_)) return d->c;
  const double x = std::floor(quantile(u) + 0.5);
  if (x < 1.0) return 1;
  return static_cast<std::int64_t>(std::min(x, kMaxCount));
}

double FlowSizeDistribution::discrete_tail(std::int64_t n) const {
  if (const auto* d = std::get_if<Degenerate>(&law_)) return d->c > n ? 1.0 : 0.0;
  if (n < 1) return 1.0;
  return tail(static_cast<double>(n) + 0.5);
}

double FlowSizeDistribution::discrete_pmf(std::int64_t n) const {
  if (const auto* d = std::get_if<Degenerate>(&law_)) return d->c == n ? 1.0 : 0.0;
  if (n < 1) return 0.0;
  return discrete_tail(n - 1) - discrete_tail(n);
}

double FlowSizeDistribution::discrete_mean() const {
  if (const auto* d = std::get_if<Degenerate>(&law_)) return static_cast<double>(d->c);
  // E(v) = sum_{n>=0} P(v > n). Direct sum, then Euler-Maclaurin for the
  // smooth remainder f(n) = tail(n + 1/2).
  constexpr std::int64_t kDirect = 200000;
  double sum = 0.0;
  double comp = 0.0;
  for (std::int64_t n = kDirect - 1; n >= 0; --n) {
    const double y = discrete_tail(n) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  const double x0 = static_cast<double>(kDirect) + 0.5;
  const double f0 = tail(x0);
  const double remainder = std::visit(
      Overloaded{
          [&](const Pareto& d) {
            const double integral = x0 * f0 / (d.a - 1.0);
            const double derivative = -d.a * f0 / x0;
            return integral + 0.5 * f0 - derivative / 12.0;
          },
          [&](const Weibull& d) {
            // int_x0^inf e^{-(x/eta)^beta} dx = eta/beta Gamma(1/beta, (x0/eta)^beta)
            const double integral =
                d.eta / d.beta *
                specfun::upper_incomplete_gamma(1.0 / d.beta, std::pow(x0 / d.eta, d.beta));
            return integral + 0.5 * f0;
          },
          [](const Degenerate&) { return 0.0; },
      },
      law_);
  return sum + remainder;
}

}  // namespace urnflow
