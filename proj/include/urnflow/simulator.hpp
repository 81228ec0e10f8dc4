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

#ifndef URNFLOW_SIMULATOR_HPP_
#define URNFLOW_SIMULATOR_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "urnflow/distributions.hpp"
#include "urnflow/random.hpp"

namespace urnflow {

// Colors i = 1..K with v_i >= 1 balls each.
struct UrnPopulation {
  std::vector<std::int64_t> counts;
  std::int64_t total = 0;

  std::int64_t colors() const { return static_cast<std::int64_t>(counts.size()); }
  static UrnPopulation from_counts(std::vector<std::int64_t> counts);
};

enum class SamplingModel {
  kUniform,        // floor(pV) draws with replacement, color i w.p. v_i / V
  kProbabilistic,  // every ball kept independently with probability p
};

enum class PopulationMode {
  kRedrawn,  // fresh population per trial
  kFixed,    // one population, many sampling trials
};

std::string to_string(SamplingModel model);
std::string to_string(PopulationMode mode);
SamplingModel parse_sampling_model(std::string_view text);
PopulationMode parse_population_mode(std::string_view text);

struct SamplingConfig {
  double p = 0.01;
  SamplingModel model = SamplingModel::kUniform;
  std::uint64_t seed = 0;
  std::int64_t trials = 1;
  PopulationMode population = PopulationMode::kRedrawn;
  // 0 selects URNFLOW_THREADS, then the hardware concurrency.
  int threads = 0;
  // Keep every trial's occupancy statistics (needed for CSV export and
  // per-trial estimation).
  bool keep_trials = false;

  void validate() const;
};

struct SampleCounts {
  std::vector<std::int64_t> counts;
  std::int64_t draws_performed = 0;
};

// W_j and W_j^+ for j = 0..j_max. Colors with more than j_max sampled balls
// land in `overflow`, so W_j^+ stays exact for every j <= j_max.
struct OccupancyStats {
  std::vector<std::int64_t> w;
  std::vector<std::int64_t> w_plus;
  std::int64_t k_tilde = 0;
  std::int64_t overflow = 0;

  int j_max() const { return static_cast<int>(w.size()) - 1; }
};

UrnPopulation generate_population(const FlowSizeDistribution& dist, std::int64_t colors,
                                  std::uint64_t seed);

// Uniform model as one multinomial allocation of floor(pV) draws.
class UniformSampler {
 public:
  UniformSampler(const UrnPopulation& population, double p);

  std::int64_t draws() const { return draws_; }
  SampleCounts sample(Rng& rng) const;

 private:
  const UrnPopulation* population_;
  std::int64_t draws_;
  std::optional<AliasTable> alias_;
};

SampleCounts sample_uniform(const UrnPopulation& population, double p, std::uint64_t seed);

// Reference implementation: floor(pV) sequential categorical draws by binary
// search over cumulative counts. O(pV log K); for tests on small urns.
SampleCounts sample_uniform_sequential(const UrnPopulation& population, double p,
                                       std::uint64_t seed);

template <class Engine>
SampleCounts sample_probabilistic(const UrnPopulation& population, double p,
                                  Engine& engine) {
  SampleCounts out;
  out.counts.resize(population.counts.size());
  for (std::size_t i = 0; i < population.counts.size(); ++i) {
    out.counts[i] = binomial(engine, population.counts[i], p);
    out.draws_performed += out.counts[i];
  }
  return out;
}

SampleCounts sample_probabilistic(const UrnPopulation& population, double p,
                                  std::uint64_t seed);

OccupancyStats occupancy(std::span<const std::int64_t> counts, int j_max);

struct TrialSummary {
  std::int64_t total_balls = 0;
  std::int64_t draws = 0;
  std::int64_t k_tilde = 0;
};

// Seeds used for trial t. Trials are reproducible individually.
std::uint64_t population_seed(const SamplingConfig& config, std::int64_t trial);
std::uint64_t sampling_seed(const SamplingConfig& config, std::int64_t trial);

// Aggregated result of run_trials. Moments are accumulated as exact integer
// sums, so the ensemble does not depend on how trials were scheduled.
class TrialEnsemble {
 public:
  TrialEnsemble(FlowSizeDistribution dist, std::int64_t colors, SamplingConfig config,
                int j_max);

  const FlowSizeDistribution& distribution() const { return dist_; }
  std::int64_t colors() const { return colors_; }
  const SamplingConfig& config() const { return config_; }
  int j_max() const { return j_max_; }
  std::int64_t trials() const { return trials_; }

  double mean_w(int j) const;
  double var_w(int j) const;
  double mean_wplus(int j) const;
  double var_wplus(int j) const;
  double k_tilde_mean() const;
  double k_tilde_var() const;

  // Pooled empirical law of W_j^+ across trials: value -> number of trials.
  const std::map<std::int64_t, std::int64_t>& wplus_histogram(int j) const;
  // Expanded W_j^+ sample, one entry per trial, ascending.
  std::vector<std::int64_t> wplus_values(int j) const;

  const std::vector<TrialSummary>& summaries() const { return summaries_; }
  // Empty unless the run kept per-trial statistics.
  const std::vector<OccupancyStats>& per_trial() const { return per_trial_; }

  // Adds one trial to the aggregate sums and histograms.
  void add_trial(const OccupancyStats& stats);
  void merge(const TrialEnsemble& other);

  // Raw sums for serialization.
  struct Sums {
    std::vector<std::uint64_t> w, w2, wplus, wplus2;
    std::uint64_t k_tilde = 0, k_tilde2 = 0;
  };
  const Sums& sums() const { return sums_; }
  void restore(std::int64_t trials, Sums sums,
               std::vector<std::map<std::int64_t, std::int64_t>> histograms,
               std::vector<TrialSummary> summaries, std::vector<OccupancyStats> per_trial);

 private:
  FlowSizeDistribution dist_;
  std::int64_t colors_;
  SamplingConfig config_;
  int j_max_;
  std::int64_t trials_ = 0;
  Sums sums_;
  std::vector<std::map<std::int64_t, std::int64_t>> hist_;
  std::vector<TrialSummary> summaries_;
  std::vector<OccupancyStats> per_trial_;
};

// Worker count: explicit request, else URNFLOW_THREADS, else all cores.
int resolve_threads(int requested);

TrialEnsemble run_trials(const FlowSizeDistribution& dist, std::int64_t colors,
                         const SamplingConfig& config, int j_max = 64);

}  // namespace urnflow

#endif  // URNFLOW_SIMULATOR_HPP_
