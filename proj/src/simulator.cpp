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

#include "urnflow/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "urnflow/error.hpp"

namespace urnflow {
namespace {

std::int64_t uniform_draw_count(const UrnPopulation& population, double p) {
  const double draws = std::floor(p * static_cast<double>(population.total));
  if (draws < 1.0) throw DomainError("sampling fraction too small for population");
  return static_cast<std::int64_t>(draws);
}

double sample_variance(std::uint64_t sum, std::uint64_t sum_sq, std::int64_t n) {
  if (n < 2) return 0.0;
  __extension__ typedef __int128 i128;
  const i128 num = static_cast<i128>(n) * static_cast<i128>(sum_sq) -
                   static_cast<i128>(sum) * static_cast<i128>(sum);
  return static_cast<double>(static_cast<long double>(num) /
                             (static_cast<long double>(n) * static_cast<long double>(n - 1)));
}

}  // namespace

UrnPopulation UrnPopulation::from_counts(std::vector<std::int64_t> counts) {
  if (counts.empty()) throw DomainError("population needs at least one color");
  UrnPopulation pop;
  for (auto c : counts) {
    if (c < 1) throw DomainError("every color needs at least one ball");
    pop.total += c;
  }
  pop.counts = std::move(counts);
  return pop;
}

std::string to_string(SamplingModel model) {
  return model == SamplingModel::kUniform ? "uniform" : "probabilistic";
}

std::string to_string(PopulationMode mode) {
  return mode == PopulationMode::kFixed ? "fixed" : "redrawn";
}

SamplingModel parse_sampling_model(std::string_view text) {
  if (text == "uniform") return SamplingModel::kUniform;
  if (text == "probabilistic") return SamplingModel::kProbabilistic;
  throw ParseError("unknown sampling model '" + std::string(text) + "'");
}

PopulationMode parse_population_mode(std::string_view text) {
  if (text == "fixed") return PopulationMode::kFixed;
  if (text == "redrawn") return PopulationMode::kRedrawn;
  throw ParseError("unknown population mode '" + std::string(text) + "'");
}

void SamplingConfig::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("sampling fraction p must lie in (0, 1)");
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (threads < 0) throw DomainError("threads must be >= 0");
}

UrnPopulation generate_population(const FlowSizeDistribution& dist, std::int64_t colors,
                                  std::uint64_t seed) {
  if (colors < 1) throw DomainError("number of colors K must be >= 1");
  Rng rng(seed);
  UrnPopulation pop;
  pop.counts.resize(static_cast<std::size_t>(colors));
  for (auto& c : pop.counts) {
    c = dist.draw(rng);
    pop.total += c;
  }
  return pop;
}

UniformSampler::UniformSampler(const UrnPopulation& population, double p)
    : population_(&population), draws_(uniform_draw_count(population, p)) {
  // Few draws per color: individual categorical draws from an alias table
  // beat K conditional binomials. Both realize the same multinomial law.
  if (draws_ <= 4 * population.colors()) {
    std::vector<double> weights(population.counts.begin(), population.counts.end());
    alias_.emplace(weights);
  }
}

SampleCounts UniformSampler::sample(Rng& rng) const {
  const auto& counts = population_->counts;
  SampleCounts out;
  out.counts.assign(counts.size(), 0);
  out.draws_performed = draws_;
  if (alias_) {
    for (std::int64_t n = 0; n < draws_; ++n) ++out.counts[alias_->sample(rng)];
    return out;
  }
  // Conditional binomial decomposition of the multinomial.
  std::int64_t remaining_draws = draws_;
  std::int64_t remaining_balls = population_->total;
  for (std::size_t i = 0; i < counts.size() && remaining_draws > 0; ++i) {
    const double share = static_cast<double>(counts[i]) / static_cast<double>(remaining_balls);
    const std::int64_t k = binomial(rng, remaining_draws, share);
    out.counts[i] = k;
    remaining_draws -= k;
    remaining_balls -= counts[i];
  }
  return out;
}

SampleCounts sample_uniform(const UrnPopulation& population, double p, std::uint64_t seed) {
  Rng rng(seed);
  return UniformSampler(population, p).sample(rng);
}

SampleCounts sample_uniform_sequential(const UrnPopulation& population, double p,
                                       std::uint64_t seed) {
  const std::int64_t draws = uniform_draw_count(population, p);
  std::vector<std::int64_t> cumulative(population.counts.size());
  std::partial_sum(population.counts.begin(), population.counts.end(), cumulative.begin());
  std::uniform_int_distribution<std::int64_t> ball(0, population.total - 1);
  Rng rng(seed);
  SampleCounts out;
  out.counts.assign(population.counts.size(), 0);
  out.draws_performed = draws;
  for (std::int64_t n = 0; n < draws; ++n) {
    const std::int64_t b = ball(rng);
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), b);
    ++out.counts[static_cast<std::size_t>(it - cumulative.begin())];
  }
  return out;
}

SampleCounts sample_probabilistic(const UrnPopulation& population, double p,
                                  std::uint64_t seed) {
  Rng rng(seed);
  return sample_probabilistic(population, p, rng);
}

OccupancyStats occupancy(std::span<const std::int64_t> counts, int j_max) {
  if (j_max < 1) throw DomainError("j_max must be >= 1");
  OccupancyStats s;
  s.w.assign(static_cast<std::size_t>(j_max) + 1, 0);
  s.w_plus.assign(static_cast<std::size_t>(j_max) + 1, 0);
  for (const auto c : counts) {
    if (c < 0) throw DomainError("occupancy: negative sampled count");
    if (c > j_max) {
      ++s.overflow;
    } else {
      ++s.w[static_cast<std::size_t>(c)];
    }
  }
  std::int64_t suffix = s.overflow;
  for (int j = j_max; j >= 0; --j) {
    suffix += s.w[static_cast<std::size_t>(j)];
    s.w_plus[static_cast<std::size_t>(j)] = suffix;
  }
  s.k_tilde = static_cast<std::int64_t>(counts.size()) - s.w[0];
  return s;
}

std::uint64_t population_seed(const SamplingConfig& config, std::int64_t trial) {
  const auto index =
      config.population == PopulationMode::kFixed ? 0 : static_cast<std::uint64_t>(trial);
  return derive_seed(config.seed, Stream::kPopulation, index);
}

std::uint64_t sampling_seed(const SamplingConfig& config, std::int64_t trial) {
  return derive_seed(config.seed, Stream::kSampling, static_cast<std::uint64_t>(trial));
}

TrialEnsemble::TrialEnsemble(FlowSizeDistribution dist, std::int64_t colors,
                             SamplingConfig config, int j_max)
    : dist_(dist), colors_(colors), config_(config), j_max_(j_max) {
  const auto n = static_cast<std::size_t>(j_max) + 1;
  sums_.w.assign(n, 0);
  sums_.w2.assign(n, 0);
  sums_.wplus.assign(n, 0);
  sums_.wplus2.assign(n, 0);
  hist_.resize(n);
}

void TrialEnsemble::add_trial(const OccupancyStats& stats) {
  ++trials_;
  for (int j = 0; j <= j_max_; ++j) {
    const auto w = static_cast<std::uint64_t>(stats.w[static_cast<std::size_t>(j)]);
    const auto wp = static_cast<std::uint64_t>(stats.w_plus[static_cast<std::size_t>(j)]);
    sums_.w[static_cast<std::size_t>(j)] += w;
    sums_.w2[static_cast<std::size_t>(j)] += w * w;
    sums_.wplus[static_cast<std::size_t>(j)] += wp;
    sums_.wplus2[static_cast<std::size_t>(j)] += wp * wp;
    ++hist_[static_cast<std::size_t>(j)][static_cast<std::int64_t>(wp)];
  }
  const auto kt = static_cast<std::uint64_t>(stats.k_tilde);
  sums_.k_tilde += kt;
  sums_.k_tilde2 += kt * kt;
}

void TrialEnsemble::merge(const TrialEnsemble& other) {
  trials_ += other.trials_;
  for (std::size_t j = 0; j < sums_.w.size(); ++j) {
    sums_.w[j] += other.sums_.w[j];
    sums_.w2[j] += other.sums_.w2[j];
    sums_.wplus[j] += other.sums_.wplus[j];
    sums_.wplus2[j] += other.sums_.wplus2[j];
    for (const auto& [value, count] : other.hist_[j]) hist_[j][value] += count;
  }
  sums_.k_tilde += other.sums_.k_tilde;
  sums_.k_tilde2 += other.sums_.k_tilde2;
}

void TrialEnsemble::restore(std::int64_t trials, Sums sums,
                            std::vector<std::map<std::int64_t, std::int64_t>> histograms,
                            std::vector<TrialSummary> summaries,
                            std::vector<OccupancyStats> per_trial) {
  trials_ = trials;
  sums_ = std::move(sums);
  hist_ = std::move(histograms);
  summaries_ = std::move(summaries);
  per_trial_ = std::move(per_trial);
}

double TrialEnsemble::mean_w(int j) const {
  return static_cast<double>(sums_.w.at(static_cast<std::size_t>(j))) /
         static_cast<double>(trials_);
}
double TrialEnsemble::var_w(int j) const {
  return sample_variance(sums_.w.at(static_cast<std::size_t>(j)),
                         sums_.w2.at(static_cast<std::size_t>(j)), trials_);
}
double TrialEnsemble::mean_wplus(int j) const {
  return static_cast<double>(sums_.wplus.at(static_cast<std::size_t>(j))) /
         static_cast<double>(trials_);
}
double TrialEnsemble::var_wplus(int j) const {
  return sample_variance(sums_.wplus.at(static_cast<std::size_t>(j)),
                         sums_.wplus2.at(static_cast<std::size_t>(j)), trials_);
}
double TrialEnsemble::k_tilde_mean() const {
  return static_cast<double>(sums_.k_tilde) / static_cast<double>(trials_);
}
double TrialEnsemble::k_tilde_var() const {
  return sample_variance(sums_.k_tilde, sums_.k_tilde2, trials_);
}

const std::map<std::int64_t, std::int64_t>& TrialEnsemble::wplus_histogram(int j) const {
  return hist_.at(static_cast<std::size_t>(j));
}

std::vector<std::int64_t> TrialEnsemble::wplus_values(int j) const {
  std::vector<std::int64_t> values;
  values.reserve(static_cast<std::size_t>(trials_));
  for (const auto& [value, count] : wplus_histogram(j)) values.insert(values.end(), count, value);
  return values;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("URNFLOW_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

TrialEnsemble run_trials(const FlowSizeDistribution& dist, std::int64_t colors,
                         const SamplingConfig& config, int j_max) {
  config.validate();
  if (colors < 1) throw DomainError("number of colors K must be >= 1");
  if (j_max < 1) throw DomainError("j_max must be >= 1");

  TrialEnsemble result(dist, colors, config, j_max);

  std::optional<UrnPopulation> fixed;
  std::optional<UniformSampler> fixed_sampler;
  if (config.population == PopulationMode::kFixed) {
    fixed = generate_population(dist, colors, population_seed(config, 0));
    if (config.model == SamplingModel::kUniform) fixed_sampler.emplace(*fixed, config.p);
  }

  const int workers =
      static_cast<int>(std::min<std::int64_t>(resolve_threads(config.threads), config.trials));
  std::atomic<std::int64_t> next{0};
  std::vector<TrialEnsemble> partial(static_cast<std::size_t>(workers),
                                     TrialEnsemble(dist, colors, config, j_max));
  std::mutex error_mutex;
  std::int64_t error_trial = -1;
  std::string error_message;

  // Per-slot outputs are written by index; aggregates go to thread-local
  // ensembles merged afterwards.
  std::vector<TrialSummary> summaries(static_cast<std::size_t>(config.trials));
  std::vector<OccupancyStats> per_trial(config.keep_trials ? summaries.size() : 0);
  auto run_worker = [&](TrialEnsemble& local) {
    for (;;) {
      const std::int64_t t = next.fetch_add(1);
      if (t >= config.trials) return;
      try {
        std::optional<UrnPopulation> drawn;
        if (!fixed) drawn = generate_population(dist, colors, population_seed(config, t));
        const UrnPopulation& pop = fixed ? *fixed : *drawn;
        Rng rng(sampling_seed(config, t));
        SampleCounts sample;
        if (config.model == SamplingModel::kUniform) {
          sample = fixed_sampler ? fixed_sampler->sample(rng)
                                 : UniformSampler(pop, config.p).sample(rng);
        } else {
          sample = sample_probabilistic(pop, config.p, rng);
        }
        OccupancyStats stats = occupancy(sample.counts, j_max);
        const auto slot = static_cast<std::size_t>(t);
        summaries[slot] = {pop.total, sample.draws_performed, stats.k_tilde};
        local.add_trial(stats);
        if (config.keep_trials) per_trial[slot] = std::move(stats);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (error_trial < 0 || t < error_trial) {
          error_trial = t;
          error_message = e.what();
        }
      }
    }
  };

  if (workers <= 1) {
    run_worker(partial[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back(run_worker, std::ref(partial[static_cast<std::size_t>(w)]));
    }
    for (auto& th : pool) th.join();
  }

  if (error_trial >= 0) {
    throw std::runtime_error("trial " + std::to_string(error_trial) + ": " + error_message);
  }

  TrialEnsemble merged(dist, colors, config, j_max);
  for (const auto& local : partial) merged.merge(local);
  std::vector<std::map<std::int64_t, std::int64_t>> hist(static_cast<std::size_t>(j_max) + 1);
  for (int j = 0; j <= j_max; ++j) hist[static_cast<std::size_t>(j)] = merged.wplus_histogram(j);
  result.restore(merged.trials(), merged.sums(), std::move(hist), std::move(summaries),
                 std::move(per_trial));
  return result;
}

}  // namespace urnflow
