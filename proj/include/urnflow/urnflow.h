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

/* C interface to urnflow. All functions return a status code; on failure
 * urnflow_last_error() describes the problem (per thread). Strings returned
 * through char** are owned by the caller and released with
 * urnflow_string_free(). */
#ifndef URNFLOW_URNFLOW_H_
#define URNFLOW_URNFLOW_H_

#include <stddef.h>
#include <stdint.h>

#if defined(URNFLOW_BUILDING_LIBRARY)
#define URNFLOW_API __attribute__((visibility("default")))
#else
#define URNFLOW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum urnflow_status {
  URNFLOW_OK = 0,
  URNFLOW_ERR_DOMAIN = 1,           /* argument outside a function's domain */
  URNFLOW_ERR_INVALID_ARGUMENT = 2, /* null pointers, bad enum values */
  URNFLOW_ERR_PARSE = 3,            /* malformed spec, config or file */
  URNFLOW_ERR_MODEL = 4,            /* data inconsistent with the model */
  URNFLOW_ERR_IO = 5,
  URNFLOW_ERR_RUNTIME = 6,
  URNFLOW_ERR_CRITERION = 7 /* a verification criterion failed */
} urnflow_status;

typedef enum urnflow_model {
  URNFLOW_MODEL_UNIFORM = 0,
  URNFLOW_MODEL_PROBABILISTIC = 1
} urnflow_model;

typedef enum urnflow_population {
  URNFLOW_POPULATION_REDRAWN = 0,
  URNFLOW_POPULATION_FIXED = 1
} urnflow_population;

typedef enum urnflow_law {
  URNFLOW_LAW_CONTINUOUS = 0,
  URNFLOW_LAW_SAMPLED = 1 /* the integer law the simulator draws from */
} urnflow_law;

typedef struct urnflow_distribution urnflow_distribution;
typedef struct urnflow_ensemble urnflow_ensemble;

typedef struct urnflow_sampling_config {
  double p;
  urnflow_model model;
  uint64_t seed;
  int64_t trials;
  urnflow_population population;
  int threads;     /* 0: URNFLOW_THREADS, else all cores */
  int keep_trials; /* nonzero keeps per-trial statistics */
  int j_max;
} urnflow_sampling_config;

typedef struct urnflow_moments {
  double m;
  double m2;
  double mprime;
} urnflow_moments;

typedef struct urnflow_tail_bounds {
  double a1;
  double a2;
  double b_upper;
} urnflow_tail_bounds;

URNFLOW_API const char* urnflow_version(void);
URNFLOW_API const char* urnflow_last_error(void);
URNFLOW_API const char* urnflow_status_string(urnflow_status status);
URNFLOW_API void urnflow_string_free(char* s);

/* Distributions: "pareto:a=1.5,b=1", "weibull:beta=0.5,eta=1",
 * "degenerate:c=100". */
URNFLOW_API urnflow_status urnflow_distribution_parse(const char* spec,
                                                      urnflow_distribution** out);
URNFLOW_API void urnflow_distribution_free(urnflow_distribution* dist);
URNFLOW_API urnflow_status urnflow_distribution_to_string(const urnflow_distribution* dist,
                                                          char** out);
URNFLOW_API urnflow_status urnflow_distribution_tail(const urnflow_distribution* dist, double x,
                                                     double* out);
URNFLOW_API urnflow_status urnflow_distribution_mean(const urnflow_distribution* dist,
                                                     double* out);

/* Special functions. */
URNFLOW_API urnflow_status urnflow_gamma(double x, double* out);
URNFLOW_API urnflow_status urnflow_upper_incomplete_gamma(double s, double x, double* out);
URNFLOW_API urnflow_status urnflow_poisson_pmf(double lambda, int64_t n, double* out);
URNFLOW_API urnflow_status urnflow_poisson_tail(double lambda, int64_t j, double* out);

/* Theory. */
URNFLOW_API urnflow_status urnflow_q_j(const urnflow_distribution* dist, double p, int j,
                                       urnflow_law law, double* out);
URNFLOW_API urnflow_status urnflow_q_tail(const urnflow_distribution* dist, double p, int j,
                                          double* out);
URNFLOW_API urnflow_status urnflow_one_minus_q0(const urnflow_distribution* dist, double p,
                                                double* out);
URNFLOW_API urnflow_status urnflow_lecam_uniform_bound(const urnflow_distribution* dist,
                                                       double p, int64_t colors, double* out);
URNFLOW_API urnflow_status urnflow_occupancy_moments(const urnflow_distribution* dist, double p,
                                                     int j, urnflow_moments* out);
URNFLOW_API urnflow_status urnflow_chen_stein_bound(const urnflow_distribution* dist, double p,
                                                    int j, double* out);
URNFLOW_API urnflow_status urnflow_ratio_bounds(const urnflow_distribution* dist, double p, int j,
                                                double alpha, urnflow_tail_bounds* out);
URNFLOW_API urnflow_status urnflow_weibull_series(double beta, double eta, double p, int j,
                                                  double tol, double* value,
                                                  double* declared_error);
URNFLOW_API urnflow_status urnflow_theory_table_json(const urnflow_distribution* dist, double p,
                                                     int j_max, double alpha, char** out);

/* Simulation. */
URNFLOW_API void urnflow_sampling_config_init(urnflow_sampling_config* config);
URNFLOW_API urnflow_status urnflow_simulate(const urnflow_distribution* dist, int64_t colors,
                                            const urnflow_sampling_config* config,
                                            urnflow_ensemble** out);
URNFLOW_API void urnflow_ensemble_free(urnflow_ensemble* ensemble);
URNFLOW_API int64_t urnflow_ensemble_trials(const urnflow_ensemble* ensemble);
URNFLOW_API int urnflow_ensemble_j_max(const urnflow_ensemble* ensemble);
URNFLOW_API urnflow_status urnflow_ensemble_mean_w(const urnflow_ensemble* ensemble, int j,
                                                   double* out);
URNFLOW_API urnflow_status urnflow_ensemble_mean_wplus(const urnflow_ensemble* ensemble, int j,
                                                       double* out);
URNFLOW_API urnflow_status urnflow_ensemble_var_wplus(const urnflow_ensemble* ensemble, int j,
                                                      double* out);
URNFLOW_API urnflow_status urnflow_ensemble_k_tilde_mean(const urnflow_ensemble* ensemble,
                                                         double* out);
URNFLOW_API urnflow_status urnflow_ensemble_to_json(const urnflow_ensemble* ensemble, char** out);
URNFLOW_API urnflow_status urnflow_ensemble_to_csv(const urnflow_ensemble* ensemble, char** out);
URNFLOW_API urnflow_status urnflow_ensemble_from_json(const char* text, urnflow_ensemble** out);

/* Estimation. model is "pareto" or "weibull-tail"; j_lo/j_hi select the
 * occupancy range (weibull-tail: 0 for all available j). *valid is zero when
 * the fit is rejected. */
URNFLOW_API urnflow_status urnflow_estimate_json(const urnflow_ensemble* ensemble, int j_lo,
                                                 int j_hi, const char* model, char** out,
                                                 int* valid);

/* Metrics. */
URNFLOW_API urnflow_status urnflow_tv_to_poisson(const int64_t* values, size_t n, double lambda,
                                                 double* out);
URNFLOW_API urnflow_status urnflow_ks_to_standard_normal(const double* values, size_t n,
                                                         double* out);

/* Acceptance suites: means, estimators, poisson, tails, identities, all.
 * Returns URNFLOW_ERR_CRITERION (with the report still in *out) when a
 * criterion fails. */
URNFLOW_API urnflow_status urnflow_verify_json(const char* suite, int quick, uint64_t seed,
                                               int threads, char** out);

#ifdef __cplusplus
}
#endif

#endif /* URNFLOW_URNFLOW_H_ */
