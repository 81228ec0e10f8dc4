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

#ifndef URNFLOW_INFERENCE_HPP_
#define URNFLOW_INFERENCE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "urnflow/simulator.hpp"

// Estimators that invert sampled occupancy statistics.
namespace urnflow::inference {

struct ShapeEstimate {
  struct PerJ {
    int j = 0;
    double a_hat = 0.0;
    bool used = false;
  };
  double a_hat = 0.0;
  std::vector<PerJ> per_j;
  int j_lo = 0;
  int j_hi = 0;
  bool valid = false;  // a_hat > 1
  std::vector<std::string> warnings;
};

// a_j = j (1 - W_{j+1}^+ / W_j^+) for j in [j_lo, j_hi], aggregated by the
// median. `wplus[j]` is W_j^+ and must extend to j_hi + 1. Estimates <= 0 are
// dropped with a warning; after a first pass, j <= a_hat are dropped and the
// median taken once more.
ShapeEstimate estimate_shape(std::span<const double> wplus, int j_lo, int j_hi);

struct ScaleEstimate {
  int j = 0;
  double b_hat = 0.0;
  double k_hat = 0.0;
  // Relative residuals of the two equations at (b_hat, k_hat).
  double residual_wplus = 0.0;
  double residual_k_tilde = 0.0;
  // (p b_hat)^(j - a_hat), the order of the neglected terms.
  double remainder_magnitude = 0.0;
};

// Solves W_j^+ / K = (pb)^a Gamma(j-a)/(j-1)! and K~ / K = 1 - Q_0(b) for
// (b, K), bisecting in log b over (1e-9, (1 - 1e-9)/p). Throws ModelError
// when the bracket has no sign change.
ScaleEstimate estimate_scale_and_colors(double a_hat, double wplus_j, int j, double k_tilde,
                                        double p);

struct EstimationReport {
  ShapeEstimate shape;
  std::vector<ScaleEstimate> per_j;  // j in range with j > a_hat
  double b_hat = 0.0;                // medians over per_j
  double k_hat = 0.0;
  std::vector<std::string> warnings;
};

// Pareto pipeline on averaged statistics: shape over [j_lo, j_hi], then
// scale and color count at every usable j.
EstimationReport estimate_pareto(std::span<const double> wplus, double k_tilde, double p,
                                 int j_lo, int j_hi);
EstimationReport estimate_pareto(const TrialEnsemble& ensemble, int j_lo, int j_hi);

struct TailPoint {
  int j = 0;
  double x = 0.0;       // j / p
  double p_hat = 0.0;   // estimate of P(v >= j/p)
};

// Empirical tail of the sampled counts on the x = j/p axis, P(v >= j/p)
// estimated by W_j^+ / colors. Runs until the first j with no mass.
std::vector<TailPoint> rescaled_tail(std::span<const std::int64_t> sampled_counts, double p,
                                     double colors);
// Same from mean W_j^+ values, j = 1 .. wplus.size() - 1.
std::vector<TailPoint> rescaled_tail_from_wplus(std::span<const double> wplus, double p,
                                                double colors);

struct WeibullFit {
  double beta = 0.0;
  double eta = 0.0;
  double rss = 0.0;
  int points = 0;
};

// Grid search over beta; for each, -log P is regressed on x^beta through the
// origin and eta = slope^(-1/beta). Points with P outside (0, 1) are ignored.
WeibullFit fit_weibull_tail(std::span<const TailPoint> points, double beta_min = 0.05,
                            double beta_max = 3.0, double beta_step = 0.005);

}  // namespace urnflow::inference

#endif  // URNFLOW_INFERENCE_HPP_
