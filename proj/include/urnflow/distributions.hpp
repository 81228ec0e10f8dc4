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

#ifndef URNFLOW_DISTRIBUTIONS_HPP_
#define URNFLOW_DISTRIBUTIONS_HPP_

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <variant>

#include "urnflow/random.hpp"

namespace urnflow {

// P(v > x) = (b/x)^a for x >= b. Requires a > 1 so that the mean is finite.
struct Pareto {
  double a;
  double b;
};

// P(v > x) = exp(-(x/eta)^beta), 0 < beta < 1.
struct Weibull {
  double beta;
  double eta;
};

// v == c with probability one. Not a flow-size model; under this law the
// per-color occupancy probabilities are exact Poisson masses, which makes it
// a closed-form oracle for the simulator and the theory module.
struct Degenerate {
  std::int64_t c;
};

// The law of the number of balls v carried by one color.
//
// The continuous families describe v through their tails. The simulator
// needs integer counts, so `draw` maps a continuous variate x to
// max(1, floor(x + 1/2)); `discrete_pmf` is the law of that integer.
class FlowSizeDistribution {
 public:
  using Law = std::variant<Pareto, Weibull, Degenerate>;

  static FlowSizeDistribution pareto(double a, double b);
  static FlowSizeDistribution weibull(double beta, double eta);
  static FlowSizeDistribution degenerate(std::int64_t c);

  // Parses `pareto:a=1.5,b=1`, `weibull:beta=0.5,eta=1`, `degenerate:c=100`.
  static FlowSizeDistribution parse(std::string_view spec);
  std::string to_string() const;

  const Law& law() const { return law_; }
  bool is_pareto() const { return std::holds_alternative<Pareto>(law_); }
  bool is_weibull() const { return std::holds_alternative<Weibull>(law_); }
  bool is_degenerate() const { return std::holds_alternative<Degenerate>(law_); }

  // P(v > x) of the continuous law.
  double tail(double x) const;
  // -log P(v > x); finite on the support, used as an integration variable.
  double cumulative_hazard(double x) const;
  // Inverse of cumulative_hazard.
  double hazard_quantile(double h) const;
  // x with P(v > x) = u, for u in (0, 1].
  double quantile(double u) const;

  double mean() const;

  // E(v^k 1{v <= cutoff}) of the continuous law. Throws DomainError when the
  // moment diverges (Pareto with k >= a and an infinite cutoff).
  double truncated_moment(int k,
                          double cutoff = std::numeric_limits<double>::infinity()) const;

  // Lower end of the support of the continuous law.
  double support_min() const;

  // Integer count for a given uniform u in (0, 1].
  std::int64_t sample_at(double u) const;

  template <class Engine>
  std::int64_t draw(Engine& engine) const {
    if (const auto* d = std::get_if<Degenerate>(&law_)) return d->c;
    return sample_at(uniform_open_closed(engine));
  }

  // Law of the integer produced by `draw`.
  double discrete_pmf(std::int64_t n) const;
  // P(draw > n).
  double discrete_tail(std::int64_t n) const;
  double discrete_mean() const;

 private:
  explicit FlowSizeDistribution(Law law) : law_(law) {}
  Law law_;
};

}  // namespace urnflow

#endif  // URNFLOW_DISTRIBUTIONS_HPP_
