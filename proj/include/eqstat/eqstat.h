// Copyright 2026 The eqstat Authors
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

/*
 * eqstat C API: statistical evaluation of earthquake predictions.
 *
 * Objects are opaque handles created by eqs_*_parse / eqs_*_fit / ... and
 * released with the matching eqs_*_free. Every fallible call returns an
 * eqs_status; on failure eqs_last_error() describes the problem (the
 * string is thread-local and valid until the next failing call on the
 * same thread). Output pointers are left untouched on failure.
 *
 * Units: time in days (real), coordinates in planar km, magnitudes
 * dimensionless.
 */

#ifndef EQSTAT_EQSTAT_H_
#define EQSTAT_EQSTAT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(EQSTAT_BUILDING_LIBRARY)
#define EQS_API __attribute__((visibility("default")))
#else
#define EQS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eqs_status {
  EQS_OK = 0,
  EQS_ERR_INVALID_ARGUMENT = 1, /* precondition or invariant violated */
  EQS_ERR_PARSE = 2,            /* malformed CSV / JSON */
  EQS_ERR_NOT_CONVERGED = 3,    /* optimizer hit its iteration cap */
  EQS_ERR_INTERNAL = 4
} eqs_status;

EQS_API const char* eqs_last_error(void);
EQS_API const char* eqs_version(void);

typedef struct eqs_catalog eqs_catalog;
typedef struct eqs_predictions eqs_predictions;
typedef struct eqs_density eqs_density;
typedef struct eqs_buffer eqs_buffer;

/* Owned byte buffers returned by serializers. */
EQS_API const char* eqs_buffer_data(const eqs_buffer* buffer);
EQS_API size_t eqs_buffer_size(const eqs_buffer* buffer);
EQS_API void eqs_buffer_free(eqs_buffer* buffer);

/* ---- geometry ------------------------------------------------------- */

typedef enum eqs_region_kind { EQS_REGION_CIRCLE = 0, EQS_REGION_POLYGON = 1 } eqs_region_kind;

/* Circle (cx, cy, radius) or convex polygon with n_vertices counterclockwise
   vertices stored as x0, y0, x1, y1, ... */
typedef struct eqs_region {
  eqs_region_kind kind;
  double cx, cy, radius;
  const double* vertices;
  size_t n_vertices;
} eqs_region;

typedef struct eqs_box {
  double xmin, ymin, xmax, ymax;
} eqs_box;

/* ---- catalogs ------------------------------------------------------- */

typedef struct eqs_event {
  double time, x, y, magnitude;
} eqs_event;

typedef struct eqs_catalog_options {
  const eqs_region* region; /* NULL: bounding box of the events */
  double record_start;      /* usually 0 */
  int has_record_end;       /* 0: record ends at the last event */
  double record_end;
} eqs_catalog_options;

/* CSV with header `time,x,y,magnitude`; rows are sorted by time. */
EQS_API eqs_status eqs_catalog_parse(const char* csv, size_t len, const eqs_catalog_options* options,
                                     eqs_catalog** out);
EQS_API void eqs_catalog_free(eqs_catalog* catalog);
EQS_API size_t eqs_catalog_size(const eqs_catalog* catalog);
EQS_API eqs_status eqs_catalog_event(const eqs_catalog* catalog, size_t index, eqs_event* out);
EQS_API eqs_status eqs_catalog_record(const eqs_catalog* catalog, double* start, double* end);
EQS_API eqs_status eqs_catalog_region_box(const eqs_catalog* catalog, eqs_box* out);
EQS_API eqs_status eqs_catalog_to_csv(const eqs_catalog* catalog, eqs_buffer** out);

typedef struct eqs_aftershock_policy {
  double time_window;     /* days */
  double distance_window; /* km */
  double magnitude_delta; /* reserved, must be >= 0 */
} eqs_aftershock_policy;

/* Excluded-event audit CSV: `time,x,y,magnitude,excluded_by`. */
EQS_API eqs_status eqs_filter_aftershocks(const eqs_catalog* catalog,
                                          const eqs_aftershock_policy* policy,
                                          eqs_catalog** retained, eqs_buffer** excluded_csv,
                                          size_t* n_excluded);

/* ---- predictions ---------------------------------------------------- */

typedef struct eqs_prediction {
  double issue_time, window_start, window_end, min_magnitude;
  eqs_region_kind region_kind;
  double cx, cy, radius; /* circle only */
  size_t n_vertices;     /* polygon only */
} eqs_prediction;

/* CSV with header `issue_time,window_start,window_end,cx,cy,radius,min_magnitude`.
   `polygons_json` (may be NULL) is a JSON array with one entry per row: null
   keeps the circle, an array of [x, y] pairs replaces it. Sorted by issue
   time, stable. */
EQS_API eqs_status eqs_predictions_parse(const char* csv, size_t len, const char* polygons_json,
                                         size_t polygons_len, eqs_predictions** out);
EQS_API void eqs_predictions_free(eqs_predictions* predictions);
EQS_API size_t eqs_predictions_size(const eqs_predictions* predictions);
EQS_API eqs_status eqs_predictions_get(const eqs_predictions* predictions, size_t index,
                                       eqs_prediction* out);
/* Box enclosing every prediction region. */
EQS_API eqs_status eqs_predictions_region_box(const eqs_predictions* predictions, eqs_box* out);

/* ---- spatial densities ---------------------------------------------- */

typedef struct eqs_mle_info {
  double log_likelihood;
  double uniform_log_likelihood;
  int iterations;
  int converged;
  double center_covariance[4]; /* row-major; NaN if unavailable */
} eqs_mle_info;

EQS_API eqs_status eqs_density_fit_mle(const eqs_catalog* catalog, eqs_mle_info* info,
                                       eqs_density** out);
/* bandwidth: (h_x, h_y) standard deviations, or NULL for the plug-in rule. */
EQS_API eqs_status eqs_density_fit_kde(const eqs_catalog* catalog, const double* bandwidth,
                                       eqs_density** out);
EQS_API eqs_status eqs_density_uniform(const eqs_region* region, eqs_density** out);
/* q: row-major 2x2 SPD matrix; p0 follows from normalization. */
EQS_API eqs_status eqs_density_parametric(double cx, double cy, const double* q, double p1,
                                          const eqs_region* region, eqs_density** out);
EQS_API eqs_status eqs_density_from_json(const char* json, size_t len, eqs_density** out);
EQS_API eqs_status eqs_density_to_json(const eqs_density* density, const char* points_ref,
                                       eqs_buffer** out);
EQS_API eqs_status eqs_density_grid_csv(const eqs_density* density, size_t nx, size_t ny,
                                        eqs_buffer** out);
EQS_API eqs_status eqs_density_eval(const eqs_density* density, double x, double y, double* out);
EQS_API eqs_status eqs_density_integrate(const eqs_density* density, const eqs_region* subregion,
                                         double* out);
/* xy_out holds 2 * count doubles. */
EQS_API eqs_status eqs_density_sample(const eqs_density* density, size_t count, uint64_t seed,
                                      double* xy_out);
EQS_API eqs_status eqs_density_log_likelihood(const eqs_density* density,
                                              const eqs_catalog* catalog, double* out);
EQS_API eqs_status eqs_density_region_box(const eqs_density* density, eqs_box* out);
EQS_API void eqs_density_free(eqs_density* density);

/* ---- chance-level significance -------------------------------------- */

EQS_API eqs_status eqs_clt_significance(const double* p, size_t m, long n_successes, double* mu,
                                        double* sigma, double* z, double* significance);
/* Exact P(X >= k) for independent Bernoulli(p_j), M <= 10^4. */
EQS_API eqs_status eqs_exact_tail(const double* p, size_t m, long k, double* out);
EQS_API eqs_status eqs_enhancement(const double* p, size_t m, long n_successes, double* out);

typedef struct eqs_inflation {
  double c;
  int root_found;
  double residual;
  double upper;
} eqs_inflation;

EQS_API eqs_status eqs_min_consistent_c(const double* p, size_t m, long n_successes, double alpha,
                                        eqs_inflation* out);

typedef struct eqs_significance_options {
  double alpha; /* level for c_min, in (0, 0.5) */
  int exact;    /* also compute the exact Poisson-binomial tail */
} eqs_significance_options;

typedef struct eqs_significance_report {
  size_t n_predictions;
  long n_successes;
  double mu, sigma, z, significance;
  int has_exact;
  double exact_significance;
  int has_c_hat;
  double c_hat;
  int has_c_min;
  eqs_inflation c_min;
  double alpha;
  double overlap_fraction;
} eqs_significance_report;

typedef struct eqs_prediction_row {
  double region_mass; /* s_j */
  double chance_prob; /* p_j */
  size_t n_background;
  int success;
} eqs_prediction_row;

/* `background` (may be NULL = earthquakes) supplies N_bg and the record span
   for the chance probabilities; successes are counted in `earthquakes`.
   rows (may be NULL) receives eqs_predictions_size() entries. */
EQS_API eqs_status eqs_significance(const eqs_catalog* earthquakes, const eqs_catalog* background,
                                    const eqs_predictions* predictions,
                                    const eqs_density* density,
                                    const eqs_significance_options* options,
                                    eqs_significance_report* out, eqs_prediction_row* rows);

/* ---- precursor delay test ------------------------------------------- */

EQS_API eqs_status eqs_tau_tail(double t, double u, long n, double span, double* out);
EQS_API eqs_status eqs_tau_mean(double t, long n, double span, double* out);
EQS_API eqs_status eqs_tau_var(double t, long n, double span, double* out);

typedef struct eqs_precursor_options {
  double precursor_threshold;  /* default -2.5 */
  double postcursor_threshold; /* default +2.5 */
} eqs_precursor_options;

typedef struct eqs_precursor_report {
  double y_obs, e_y, var_y, z;
  int precursor_flag, postcursor_flag;
  size_t m;
  long n;
  double span;
  double origin;
  size_t dropped_after_last_event;
} eqs_precursor_report;

typedef struct eqs_delay_row {
  size_t prediction_index;
  double t, tau_hat;
  int censored;
  double tau_mean, tau_var;
} eqs_delay_row;

/* rows (may be NULL) needs room for eqs_predictions_size() entries; the
   first report.m are filled. */
EQS_API eqs_status eqs_precursor(const eqs_catalog* earthquakes, const eqs_predictions* predictions,
                                 const eqs_precursor_options* options, eqs_precursor_report* out,
                                 eqs_delay_row* rows);

/* ---- Monte Carlo ---------------------------------------------------- */

typedef struct eqs_null_model {
  size_t n_events;
  double span;
  double record_start;
  double magnitude_min;
  double b_value;
  double clustering_fraction; /* 0 disables postcursor injection */
  double clustering_time_decay;
  double clustering_spatial_spread;
  uint64_t seed;
} eqs_null_model;

typedef struct eqs_sim_summary {
  size_t replicates;
  double mean, variance, mean_std_error;
  double quantiles[5]; /* 5, 25, 50, 75, 95 % */
  int has_ks;
  double ks_uniform;
} eqs_sim_summary;

EQS_API eqs_status eqs_simulate_catalog(const eqs_null_model* model, const eqs_density* spatial,
                                        eqs_catalog** out);
/* successes / significance (may be NULL) receive `replicates` entries. */
EQS_API eqs_status eqs_empirical_significance(const eqs_null_model* model,
                                              const eqs_density* spatial,
                                              const eqs_predictions* predictions,
                                              size_t replicates, eqs_sim_summary* summary,
                                              long* successes, double* significance);

typedef struct eqs_precursor_sim_options {
  size_t m;
  long n;
  double span;
  size_t replicates;
  uint64_t seed;
  int shared_catalog; /* 0: independent catalog per signal */
  double suppression_window;
  double precursor_threshold, postcursor_threshold;
} eqs_precursor_sim_options;

/* z (may be NULL) receives `replicates` entries. */
EQS_API eqs_status eqs_empirical_precursor(const eqs_precursor_sim_options* options,
                                           eqs_sim_summary* summary, double* precursor_rate,
                                           double* postcursor_rate, double* z);

/* out: mean, variance, mean standard error, variance standard error. */
EQS_API eqs_status eqs_empirical_tau_moments(double t, long n, double span, size_t replicates,
                                             uint64_t seed, double* out);

#ifdef __cplusplus
}
#endif

#endif /* EQSTAT_EQSTAT_H_ */
