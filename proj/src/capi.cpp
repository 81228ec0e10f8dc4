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

#include "urnflow/urnflow.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "urnflow/distributions.hpp"
#include "urnflow/error.hpp"
#include "urnflow/inference.hpp"
#include "urnflow/metrics.hpp"
#include "urnflow/serialize.hpp"
#include "urnflow/simulator.hpp"
#include "urnflow/specfun.hpp"
#include "urnflow/theory.hpp"
#include "urnflow/verify.hpp"

struct urnflow_distribution {
  urnflow::FlowSizeDistribution dist;
};

struct urnflow_ensemble {
  urnflow::TrialEnsemble ensemble;
};

namespace {

thread_local std::string g_last_error;

urnflow_status fail(urnflow_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs f, mapping exceptions to status codes.
template <class F>
urnflow_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const urnflow::ParseError& e) {
    return fail(URNFLOW_ERR_PARSE, e.what());
  } catch (const urnflow::DomainError& e) {
    return fail(URNFLOW_ERR_DOMAIN, e.what());
  } catch (const urnflow::ModelError& e) {
    return fail(URNFLOW_ERR_MODEL, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(URNFLOW_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(URNFLOW_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(URNFLOW_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(URNFLOW_ERR_RUNTIME, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define URNFLOW_REQUIRE(ptr)                                                          \
  do {                                                                                \
    if ((ptr) == nullptr) return fail(URNFLOW_ERR_INVALID_ARGUMENT, #ptr " is null"); \
  } while (0)

template <class F>
urnflow_status scalar(double* out, F&& f) {
  URNFLOW_REQUIRE(out);
  return guarded([&] {
    *out = f();
    return URNFLOW_OK;
  });
}

urnflow::theory::Law to_law(urnflow_law law) {
  switch (law) {
    case URNFLOW_LAW_CONTINUOUS:
      return urnflow::theory::Law::kContinuous;
    case URNFLOW_LAW_SAMPLED:
      return urnflow::theory::Law::kSampled;
  }
  throw std::invalid_argument("unknown law");
}

template <class F>
urnflow_status per_j(const urnflow_ensemble* e, int j, double* out, F&& f) {
  URNFLOW_REQUIRE(e);
  if (j < 0 || j > e->ensemble.j_max()) {
    return fail(URNFLOW_ERR_DOMAIN, "j outside 0..j_max");
  }
  return scalar(out, [&] { return f(e->ensemble, j); });
}


}  // namespace

extern "C" {

const char* urnflow_version(void) { return "0.1.0"; }

const char* urnflow_last_error(void) { return g_last_error.c_str(); }

const char* urnflow_status_string(urnflow_status status) {
  switch (status) {
    case URNFLOW_OK:
      return "ok";
    case URNFLOW_ERR_DOMAIN:
      return "domain error";
    case URNFLOW_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case URNFLOW_ERR_PARSE:
      return "parse error";
    case URNFLOW_ERR_MODEL:
      return "model error";
    case URNFLOW_ERR_IO:
      return "i/o error";
    case URNFLOW_ERR_RUNTIME:
      return "runtime error";
    case URNFLOW_ERR_CRITERION:
      return "criterion failed";
  }
  return "unknown status";
}

void urnflow_string_free(char* s) { std::free(s); }

urnflow_status urnflow_distribution_parse(const char* spec, urnflow_distribution** out) {
  URNFLOW_REQUIRE(spec);
  URNFLOW_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new urnflow_distribution{urnflow::FlowSizeDistribution::parse(spec)};
    return URNFLOW_OK;
  });
}

void urnflow_distribution_free(urnflow_distribution* dist) { delete dist; }

urnflow_status urnflow_distribution_to_string(const urnflow_distribution* dist, char** out) {
  URNFLOW_REQUIRE(dist);
  URNFLOW_REQUIRE(out);
  return guarded([&] {
    *out = copy_string(dist->dist.to_string());
    return URNFLOW_OK;
  });
}

urnflow_status urnflow_distribution_tail(const urnflow_distribution* dist, double x,
                                         double* out) {
  URNFLOW_REQUIRE(dist);
  return scalar(out, [&] { return dist->dist.tail(x); });
}

urnflow_status urnflow_distribution_mean(const urnflow_distribution* dist, double* out) {
  URNFLOW_REQUIRE(dist);
  return scalar(out, [&] { return dist->dist.mean(); });
}

urnflow_status urnflow_gamma(double x, double* out) {
  return scalar(out, [&] { return urnflow::specfun::gamma(x); });
}

urnflow_status urnflow_upper_incomplete_gamma(double s, double x, double* out) {
  return scalar(out, [&] { return urnflow::specfun::upper_incomplete_gamma(s, x); });
}

urnflow_status urnflow_poisson_pmf(double lambda, int64_t n, double* out) {
  return scalar(out, [&] { return urnflow::specfun::poisson_pmf(lambda, n); });
}

urnflow_status urnflow_poisson_tail(double lambda, int64_t j, double* out) {
  return scalar(out, [&] { return urnflow::specfun::poisson_tail(lambda, j); });
}

urnflow_status urnflow_q_j(const urnflow_distribution* dist, double p, int j, urnflow_law law,
                           double* out) {
  URNFLOW_REQUIRE(dist);
  return scalar(out, [&] { return urnflow::theory::q_j(dist->dist, p, j, to_law(law)); });
}

urnflow_status urnflow_q_tail(const urnflow_distribution* dist, double p, int j, double* out) {
  URNFLOW_REQUIRE(dist);
  return scalar(out, [&] { return urnflow::theory::q_tail(dist->dist, p, j); });
}

urnflow_status urnflow_one_minus_q0(const urnflow_distribution* dist, double p, double* out) {
  URNFLOW_REQUIRE(dist);
  return scalar(out, [&] { return urnflow::theory::one_minus_q0(dist->dist, p); });
}

urnflow_status urnflow_lecam_uniform_bound(const urnflow_distribution* dist, double p,
                                           int64_t colors, double* out) {
  URNFLOW_REQUIRE(dist);
  return scalar(out, [&] { return urnflow::theory::lecam_uniform_bound(dist->dist, p, colors); });
}

urnflow_status urnflow_occupancy_moments(const urnflow_distribution* dist, double p, int j,
                                         urnflow_moments* out) {
  URNFLOW_REQUIRE(dist);
  URNFLOW_REQUIRE(out);
  return guarded([&] {
    const auto m = urnflow::theory::occupancy_moments(dist->dist, p, j);
    *out = {m.m, m.m2, m.mprime};
    return URNFLOW_OK;
  });
}

urnflow_status urnflow_chen_stein_bound(const urnflow_distribution* dist, double p, int j,
                                        double* out) {
  URNFLOW_REQUIRE(dist);
  return scalar(out, [&] { return urnflow::theory::chen_stein_bound(dist->dist, p, j); });
}

urnflow_status urnflow_ratio_bounds(const urnflow_distribution* dist, double p, int j,
                                    double alpha, urnflow_tail_bounds* out) {
  URNFLOW_REQUIRE(dist);
  URNFLOW_REQUIRE(out);
  return guarded([&] {
    const auto r = urnflow::theory::ratio_bounds(dist->dist, p, j, alpha);
    *out = {r.a1, r.a2, r.b_upper};
    return URNFLOW_OK;
  });
}

urnflow_status urnflow_weibull_series(double beta, double eta, double p, int j, double tol,
                                      double* value, double* declared_error) {
  URNFLOW_REQUIRE(value);
  URNFLOW_REQUIRE(declared_error);
  return guarded([&] {
    const auto r = urnflow::theory::weibull_series(beta, eta, p, j, tol);
    *value = r.value;
    *declared_error = r.declared_error;
    return URNFLOW_OK;
  });
}

urnflow_status urnflow_theory_table_json(const urnflow_distribution* dist, double p, int j_max,
                                         double alpha, char** out) {
  URNFLOW_REQUIRE(dist);
  URNFLOW_REQUIRE(out);
  return guarded([&] {
    *out = copy_string(urnflow::io::theory_table_json(dist->dist, p, j_max, alpha));
    return URNFLOW_OK;
  });
}

void urnflow_sampling_config_init(urnflow_sampling_config* config) {
  if (config == nullptr) return;
  const urnflow::SamplingConfig d;
  config->p = d.p;
  config->model = URNFLOW_MODEL_UNIFORM;
  config->seed = d.seed;
  config->trials = d.trials;
  config->population = URNFLOW_POPULATION_REDRAWN;
  config->threads = 0;
  config->keep_trials = 0;
  config->j_max = 64;
}

urnflow_status urnflow_simulate(const urnflow_distribution* dist, int64_t colors,
                                const urnflow_sampling_config* config, urnflow_ensemble** out) {
  URNFLOW_REQUIRE(dist);
  URNFLOW_REQUIRE(config);
  URNFLOW_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    urnflow::SamplingConfig c;
    c.p = config->p;
    switch (config->model) {
      case URNFLOW_MODEL_UNIFORM:
        c.model = urnflow::SamplingModel::kUniform;
        break;
      case URNFLOW_MODEL_PROBABILISTIC:
        c.model = urnflow::SamplingModel::kProbabilistic;
        break;
      default:
        throw std::invalid_argument("unknown sampling model");
    }
    switch (config->population) {
      case URNFLOW_POPULATION_REDRAWN:
        c.population = urnflow::PopulationMode::kRedrawn;
        break;
      case URNFLOW_POPULATION_FIXED:
        c.population = urnflow::PopulationMode::kFixed;
        break;
      default:
        throw std::invalid_argument("unknown population mode");
    }
    c.seed = config->seed;
    c.trials = config->trials;
    c.threads = config->threads;
    c.keep_trials = config->keep_trials != 0;
    if (config->j_max < 1) throw urnflow::DomainError("j_max must be at least 1");
    *out = new urnflow_ensemble{urnflow::run_trials(dist->dist, colors, c, config->j_max)};
    return URNFLOW_OK;
  });
}

void urnflow_ensemble_free(urnflow_ensemble* ensemble) { delete ensemble; }

int64_t urnflow_ensemble_trials(const urnflow_ensemble* ensemble) {
  return ensemble == nullptr ? 0 : ensemble->ensemble.trials();
}

int urnflow_ensemble_j_max(const urnflow_ensemble* ensemble) {
  return ensemble == nullptr ? -1 : ensemble->ensemble.j_max();
}


urnflow_status urnflow_ensemble_mean_w(const urnflow_ensemble* e, int j, double* out) {
  return per_j(e, j, out, [](const auto& x, int k) { return x.mean_w(k); });
}

urnflow_status urnflow_ensemble_mean_wplus(const urnflow_ensemble* e, int j, double* out) {
  return per_j(e, j, out, [](const auto& x, int k) { return x.mean_wplus(k); });
}

urnflow_status urnflow_ensemble_var_wplus(const urnflow_ensemble* e, int j, double* out) {
  return per_j(e, j, out, [](const auto& x, int k) { return x.var_wplus(k); });
}

urnflow_status urnflow_ensemble_k_tilde_mean(const urnflow_ensemble* e, double* out) {
  URNFLOW_REQUIRE(e);
  return scalar(out, [&] { return e->ensemble.k_tilde_mean(); });
}

urnflow_status urnflow_ensemble_to_json(const urnflow_ensemble* e, char** out) {
  URNFLOW_REQUIRE(e);
  URNFLOW_REQUIRE(out);
  return guarded([&] {
    *out = copy_string(urnflow::io::ensemble_to_json(e->ensemble));
    return URNFLOW_OK;
  });
}

urnflow_status urnflow_ensemble_to_csv(const urnflow_ensemble* e, char** out) {
  URNFLOW_REQUIRE(e);
  URNFLOW_REQUIRE(out);
  return guarded([&] {
    *out = copy_string(urnflow::io::ensemble_to_csv(e->ensemble));
    return URNFLOW_OK;
  });
}

urnflow_status urnflow_ensemble_from_json(const char* text, urnflow_ensemble** out) {
  URNFLOW_REQUIRE(text);
  URNFLOW_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new urnflow_ensemble{urnflow::io::ensemble_from_json(text)};
    return URNFLOW_OK;
  });
}

urnflow_status urnflow_estimate_json(const urnflow_ensemble* e, int j_lo, int j_hi,
                                     const char* model, char** out, int* valid) {
  URNFLOW_REQUIRE(e);
  URNFLOW_REQUIRE(model);
  URNFLOW_REQUIRE(out);
  URNFLOW_REQUIRE(valid);
  *out = nullptr;
  *valid = 0;
  return guarded([&] {
    const auto& ens = e->ensemble;
    const std::string m = model;
    if (m == "pareto") {
      const auto report = urnflow::inference::estimate_pareto(ens, j_lo, j_hi);
      *valid = report.shape.valid ? 1 : 0;
      *out = copy_string(urnflow::io::estimation_report_json(report, ens));
      return URNFLOW_OK;
    }
    if (m == "weibull-tail") {
      std::vector<double> wplus;
      for (int j = 0; j <= ens.j_max(); ++j) wplus.push_back(ens.mean_wplus(j));
      auto points = urnflow::inference::rescaled_tail_from_wplus(
          wplus, ens.config().p, static_cast<double>(ens.colors()));
      if (j_lo > 0 || j_hi > 0) {
        std::erase_if(points, [&](const auto& pt) {
          return (j_lo > 0 && pt.j < j_lo) || (j_hi > 0 && pt.j > j_hi);
        });
      }
      const auto fit = urnflow::inference::fit_weibull_tail(points);
      *valid = 1;
      *out = copy_string(urnflow::io::weibull_fit_json(fit, points, ens));
      return URNFLOW_OK;
    }
    throw std::invalid_argument("unknown model '" + m + "' (pareto, weibull-tail)");
  });
}

urnflow_status urnflow_tv_to_poisson(const int64_t* values, size_t n, double lambda,
                                     double* out) {
  URNFLOW_REQUIRE(values);
  return scalar(out, [&] {
    return urnflow::metrics::tv_to_poisson(std::span<const std::int64_t>(values, n), lambda);
  });
}

urnflow_status urnflow_ks_to_standard_normal(const double* values, size_t n, double* out) {
  URNFLOW_REQUIRE(values);
  return scalar(out, [&] {
    return urnflow::metrics::ks_to_standard_normal(std::span<const double>(values, n));
  });
}

urnflow_status urnflow_verify_json(const char* suite, int quick, uint64_t seed, int threads,
                                   char** out) {
  URNFLOW_REQUIRE(suite);
  URNFLOW_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    urnflow::verify::Options opt;
    opt.quick = quick != 0;
    opt.seed = seed;
    opt.threads = threads;
    const auto ids = urnflow::verify::suite_criteria(suite);
    std::vector<urnflow::verify::CriterionResult> results;
    bool passed = true;
    for (int id : ids) {
      results.push_back(urnflow::verify::run_criterion(id, opt));
      passed = passed && results.back().passed;
    }
    *out = copy_string(urnflow::verify::report_json(suite, opt, results));
    if (!passed) {
      g_last_error = "one or more criteria failed";
      return URNFLOW_ERR_CRITERION;
    }
    return URNFLOW_OK;
  });
}

}  // extern "C"
