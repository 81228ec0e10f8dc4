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

#ifndef URNFLOW_RANDOM_HPP_
#define URNFLOW_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "urnflow/specfun.hpp"

namespace urnflow {

// All randomness flows through this engine. std::mt19937_64 has a fully
// specified output sequence, and every variate below is built from raw 64-bit
// words, so results are identical across platforms and standard libraries.
using Rng = std::mt19937_64;

// SplitMix64 finalizer (Steele, Lea & Flood). Increment 0x9E3779B97F4A7C15,
// multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Independent sub-streams of one user seed.
enum class Stream : std::uint64_t { kPopulation = 1, kSampling = 2, kAux = 3 };

constexpr std::uint64_t derive_seed(std::uint64_t seed, Stream stream,
                                    std::uint64_t index) {
  return mix64(seed ^ mix64(static_cast<std::uint64_t>(stream) ^ mix64(index)));
}

// Uniform on [0, 1) with 53 random bits.
template <class Engine>
double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// Uniform on (0, 1].
template <class Engine>
double uniform_open_closed(Engine& engine) {
  return static_cast<double>((engine() >> 11) + 1) * 0x1.0p-53;
}

namespace detail {

template <class Engine>
std::int64_t binomial_inversion(Engine& engine, std::int64_t n, double p) {
  const double q = 1.0 - p;
  const double ratio = p / q;
  double pmf = std::exp(static_cast<double>(n) * std::log1p(-p));
  double u = uniform01(engine);
  std::int64_t k = 0;
  while (u > pmf && k < n) {
    u -= pmf;
    pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
    ++k;
  }
  return k;
}

// BTRS transformed rejection with squeeze (Hormann 1993), for n p >= 10.
template <class Engine>
std::int64_t binomial_btrs(Engine& engine, std::int64_t n, double p) {
  const double dn = static_cast<double>(n);
  const double q = 1.0 - p;
  const double spq = std::sqrt(dn * p * q);
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = dn * p + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double lpq = std::log(p / q);
  const double m = std::floor((dn + 1.0) * p);
  const double h = specfun::log_gamma(m + 1.0) + specfun::log_gamma(dn - m + 1.0);
  for (;;) {
    const double u = uniform01(engine) - 0.5;
    double v = uniform01(engine);
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + c);
    if (k < 0.0 || k > dn) continue;
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(k);
    if (v <= 0.0) continue;
    v = std::log(v * alpha / (a / (us * us) + b));
    const double bound = h - specfun::log_gamma(k + 1.0) -
                         specfun::log_gamma(dn - k + 1.0) + (k - m) * lpq;
    if (v <= bound) return static_cast<std::int64_t>(k);
  }
}

}  // namespace detail

// Binomial(n, p) variate. Inversion when the mean of the smaller side is below
// 10, BTRS rejection otherwise.
template <class Engine>
std::int64_t binomial(Engine& engine, std::int64_t n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  if (p > 0.5) return n - binomial(engine, n, 1.0 - p);
  if (static_cast<double>(n) * p < 10.0) return detail::binomial_inversion(engine, n, p);
  return detail::binomial_btrs(engine, n, p);
}

// Walker/Vose alias table for repeated categorical draws.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> weights);

  template <class Engine>
  std::size_t sample(Engine& engine) const {
    const double u = uniform01(engine) * static_cast<double>(prob_.size());
    auto i = static_cast<std::size_t>(u);
    if (i >= prob_.size()) i = prob_.size() - 1;
    return (u - static_cast<double>(i)) < prob_[i] ? i : alias_[i];
  }

  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

}  // namespace urnflow

#endif  // URNFLOW_RANDOM_HPP_
