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

#include "eqstat/eqstat.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catalog.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "mc.hpp"
#include "nulltest.hpp"
#include "precursor.hpp"
#include "spatial.hpp"

struct eqs_catalog {
  eqstat::Catalog value;
};

struct eqs_predictions {
  std::vector<eqstat::Prediction> value;
};

struct eqs_density {
  eqstat::SpatialDensity value;
};

struct eqs_buffer {
  std::string value;
};

namespace {

thread_local std::string g_last_error;

eqs_status fail(eqs_status status, const char* what) {
  g_last_error = what;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
eqs_status guarded(F&& body) {
  try {
    body();
    return EQS_OK;
  } catch (const eqstat::ParseError& e) {
    return fail(EQS_ERR_PARSE, e.what());
  } catch (const eqstat::ValidationError& e) {
    return fail(EQS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const eqstat::ConvergenceError& e) {
    return fail(EQS_ERR_NOT_CONVERGED, e.what());
  } catch (const std::bad_alloc&) {
    return fail(EQS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EQS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(EQS_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw eqstat::ValidationError(what);
}

eqstat::Region to_region(const eqs_region& r) {
  if (r.kind == EQS_REGION_CIRCLE) {
    return eqstat::make_circle(eqstat::Vec2(r.cx, r.cy), r.radius);
  }
  require(r.kind == EQS_REGION_POLYGON, "unknown region kind");
  require(r.vertices != nullptr, "polygon vertices are null");
  std::vector<eqstat::Vec2> v;
  v.reserve(r.n_vertices);
  for (size_t i = 0; i < r.n_vertices; ++i) {
    v.emplace_back(r.vertices[2 * i], r.vertices[2 * i + 1]);
  }
  return eqstat::ConvexPolygon(std::move(v));
}

eqs_box to_box(const eqstat::Box& b) { return {b.xmin, b.ymin, b.xmax, b.ymax}; }

eqstat::CatalogOptions to_options(const eqs_catalog_options* o) {
  eqstat::CatalogOptions opts;
  if (o == nullptr) return opts;
  if (o->region != nullptr) opts.region = to_region(*o->region);
  opts.record_start = o->record_start;
  if (o->has_record_end) opts.record_end = o->record_end;
  return opts;
}

eqs_buffer* make_buffer(std::string s) { return new eqs_buffer{std::move(s)}; }

void fill_summary(const eqstat::SimulationSummary& s, eqs_sim_summary* out) {
  if (out == nullptr) return;
  out->replicates = s.replicates;
  out->mean = s.mean;
  out->variance = s.variance;
  out->mean_std_error = s.mean_std_error;
  for (size_t i = 0; i < 5; ++i) {
    out->quantiles[i] = i < s.quantiles.size() ? s.quantiles[i]
                                               : std::numeric_limits<double>::quiet_NaN();
  }
  out->has_ks = s.ks_uniform.has_value();
  out->ks_uniform = s.ks_uniform.value_or(std::numeric_limits<double>::quiet_NaN());
}

eqstat::NullModel to_null_model(const eqs_null_model& m, const eqs_density& spatial) {
  eqstat::NullModel model{.n_events = m.n_events,
                          .span = m.span,
                          .spatial = spatial.value,
                          .clustering = std::nullopt,
                          .seed = m.seed,
                          .record_start = m.record_start,
                          .magnitude_min = m.magnitude_min,
                          .b_value = m.b_value};
  if (m.clustering_fraction > 0.0) {
    model.clustering = eqstat::ClusteringParams{m.clustering_fraction, m.clustering_time_decay,
                                                m.clustering_spatial_spread};
  }
  return model;
}

eqstat::ChanceProbabilities to_probs(const double* p, size_t m) {
  require(p != nullptr || m == 0, "probability array is null");
  return eqstat::ChanceProbabilities(std::vector<double>(p, p + m));
}

}  // namespace

extern "C" {

const char* eqs_last_error(void) { return g_last_error.c_str(); }

const char* eqs_version(void) { return EQSTAT_VERSION; }

const char* eqs_buffer_data(const eqs_buffer* buffer) {
  return buffer ? buffer->value.data() : nullptr;
}

size_t eqs_buffer_size(const eqs_buffer* buffer) { return buffer ? buffer->value.size() : 0; }

void eqs_buffer_free(eqs_buffer* buffer) { delete buffer; }

// ---- catalogs --------------------------------------------------------------

eqs_status eqs_catalog_parse(const char* csv, size_t len, const eqs_catalog_options* options,
                             eqs_catalog** out) {
  return guarded([&] {
    require(csv != nullptr && out != nullptr, "null argument");
    auto cat = eqstat::parse_earthquakes(std::string_view(csv, len), to_options(options));
    *out = new eqs_catalog{std::move(cat)};
  });
}

void eqs_catalog_free(eqs_catalog* catalog) { delete catalog; }

size_t eqs_catalog_size(const eqs_catalog* catalog) { return catalog ? catalog->value.size() : 0; }

eqs_status eqs_catalog_event(const eqs_catalog* catalog, size_t index, eqs_event* out) {
  return guarded([&] {
    require(catalog != nullptr && out != nullptr, "null argument");
    require(index < catalog->value.size(), "event index out of range");
    const auto& e = catalog->value[index];
    *out = {e.time, e.x, e.y, e.magnitude};
  });
}

eqs_status eqs_catalog_record(const eqs_catalog* catalog, double* start, double* end) {
  return guarded([&] {
    require(catalog != nullptr && start != nullptr && end != nullptr, "null argument");
    *start = catalog->value.record_start();
    *end = catalog->value.record_end();
  });
}

eqs_status eqs_catalog_region_box(const eqs_catalog* catalog, eqs_box* out) {
  return guarded([&] {
    require(catalog != nullptr && out != nullptr, "null argument");
    *out = to_box(eqstat::bounding_box(catalog->value.region()));
  });
}

eqs_status eqs_catalog_to_csv(const eqs_catalog* catalog, eqs_buffer** out) {
  return guarded([&] {
    require(catalog != nullptr && out != nullptr, "null argument");
    *out = make_buffer(eqstat::serialize_earthquakes(catalog->value));
  });
}

eqs_status eqs_filter_aftershocks(const eqs_catalog* catalog, const eqs_aftershock_policy* policy,
                                  eqs_catalog** retained, eqs_buffer** excluded_csv,
                                  size_t* n_excluded) {
  return guarded([&] {
    require(catalog != nullptr && policy != nullptr && retained != nullptr, "null argument");
    const eqstat::AftershockPolicy p{policy->time_window, policy->distance_window,
                                     policy->magnitude_delta};
    auto result = eqstat::filter_aftershocks(catalog->value, p);
    std::string csv = excluded_csv ? eqstat::serialize_exclusions(result) : std::string();
    const size_t n = result.excluded.size();
    auto* kept = new eqs_catalog{std::move(result.retained)};
    if (excluded_csv) *excluded_csv = make_buffer(std::move(csv));
    if (n_excluded) *n_excluded = n;
    *retained = kept;
  });
}

// ---- predictions -----------------------------------------------------------

eqs_status eqs_predictions_parse(const char* csv, size_t len, const char* polygons_json,
                                 size_t polygons_len, eqs_predictions** out) {
  return guarded([&] {
    require(csv != nullptr && out != nullptr, "null argument");
    std::optional<std::string_view> sidecar;
    if (polygons_json != nullptr) sidecar = std::string_view(polygons_json, polygons_len);
    auto preds = eqstat::parse_predictions(std::string_view(csv, len), sidecar);
    *out = new eqs_predictions{std::move(preds)};
  });
}

void eqs_predictions_free(eqs_predictions* predictions) { delete predictions; }

size_t eqs_predictions_size(const eqs_predictions* predictions) {
  return predictions ? predictions->value.size() : 0;
}

eqs_status eqs_predictions_get(const eqs_predictions* predictions, size_t index,
                               eqs_prediction* out) {
  return guarded([&] {
    require(predictions != nullptr && out != nullptr, "null argument");
    require(index < predictions->value.size(), "prediction index out of range");
    const auto& p = predictions->value[index];
    eqs_prediction r{};
    r.issue_time = p.issue_time;
    r.window_start = p.window_start;
    r.window_end = p.window_end;
    r.min_magnitude = p.min_magnitude;
    if (const auto* c = std::get_if<eqstat::Circle>(&p.region)) {
      r.region_kind = EQS_REGION_CIRCLE;
      r.cx = c->center.x();
      r.cy = c->center.y();
      r.radius = c->radius;
    } else {
      r.region_kind = EQS_REGION_POLYGON;
      r.n_vertices = std::get<eqstat::ConvexPolygon>(p.region).vertices().size();
      r.cx = r.cy = r.radius = std::numeric_limits<double>::quiet_NaN();
    }
    *out = r;
  });
}

eqs_status eqs_predictions_region_box(const eqs_predictions* predictions, eqs_box* out) {
  return guarded([&] {
    require(predictions != nullptr && out != nullptr, "null argument");
    require(!predictions->value.empty(), "no predictions");
    eqstat::Box b = eqstat::bounding_box(predictions->value.front().region);
    for (const auto& p : predictions->value) {
      const auto c = eqstat::bounding_box(p.region);
      b.xmin = std::min(b.xmin, c.xmin);
      b.ymin = std::min(b.ymin, c.ymin);
      b.xmax = std::max(b.xmax, c.xmax);
      b.ymax = std::max(b.ymax, c.ymax);
    }
    *out = to_box(b);
  });
}

// ---- spatial densities -----------------------------------------------------

eqs_status eqs_density_fit_mle(const eqs_catalog* catalog, eqs_mle_info* info,
                               eqs_density** out) {
  return guarded([&] {
    require(catalog != nullptr && out != nullptr, "null argument");
    auto fit = eqstat::fit_mle(catalog->value);
    if (info) {
      info->log_likelihood = fit.log_likelihood;
      info->uniform_log_likelihood = fit.uniform_log_likelihood;
      info->iterations = fit.iterations;
      info->converged = fit.converged;
      for (int i = 0; i < 4; ++i) info->center_covariance[i] = fit.center_covariance(i / 2, i % 2);
    }
    *out = new eqs_density{std::move(fit.density)};
  });
}

eqs_status eqs_density_fit_kde(const eqs_catalog* catalog, const double* bandwidth,
                               eqs_density** out) {
  return guarded([&] {
    require(catalog != nullptr && out != nullptr, "null argument");
    if (bandwidth == nullptr) {
      *out = new eqs_density{eqstat::fit_kde(catalog->value)};
      return;
    }
    *out = new eqs_density{eqstat::KernelDensity(eqstat::event_locations(catalog->value),
                                                 eqstat::Vec2(bandwidth[0], bandwidth[1]),
                                                 catalog->value.region())};
  });
}

eqs_status eqs_density_uniform(const eqs_region* region, eqs_density** out) {
  return guarded([&] {
    require(region != nullptr && out != nullptr, "null argument");
    *out = new eqs_density{eqstat::ParametricDensity::uniform(to_region(*region))};
  });
}

eqs_status eqs_density_parametric(double cx, double cy, const double* q, double p1,
                                  const eqs_region* region, eqs_density** out) {
  return guarded([&] {
    require(q != nullptr && region != nullptr && out != nullptr, "null argument");
    eqstat::Mat2 m;
    m << q[0], q[1], q[2], q[3];
    *out = new eqs_density{eqstat::ParametricDensity::from_amplitude(eqstat::Vec2(cx, cy), m, p1,
                                                                     to_region(*region))};
  });
}

eqs_status eqs_density_from_json(const char* json, size_t len, eqs_density** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    *out = new eqs_density{eqstat::density_from_json(std::string_view(json, len))};
  });
}

eqs_status eqs_density_to_json(const eqs_density* density, const char* points_ref,
                               eqs_buffer** out) {
  return guarded([&] {
    require(density != nullptr && out != nullptr, "null argument");
    *out = make_buffer(eqstat::density_to_json(density->value, points_ref ? points_ref : ""));
  });
}

eqs_status eqs_density_grid_csv(const eqs_density* density, size_t nx, size_t ny,
                                eqs_buffer** out) {
  return guarded([&] {
    require(density != nullptr && out != nullptr, "null argument");
    *out = make_buffer(eqstat::density_grid_csv(density->value, nx, ny));
  });
}

eqs_status eqs_density_eval(const eqs_density* density, double x, double y, double* out) {
  return guarded([&] {
    require(density != nullptr && out != nullptr, "null argument");
    *out = eqstat::eval_density(density->value, eqstat::Vec2(x, y));
  });
}

eqs_status eqs_density_integrate(const eqs_density* density, const eqs_region* subregion,
                                 double* out) {
  return guarded([&] {
    require(density != nullptr && subregion != nullptr && out != nullptr, "null argument");
    *out = eqstat::integrate_region(density->value, to_region(*subregion));
  });
}

eqs_status eqs_density_sample(const eqs_density* density, size_t count, uint64_t seed,
                              double* xy_out) {
  return guarded([&] {
    require(density != nullptr && (xy_out != nullptr || count == 0), "null argument");
    const auto pts = eqstat::sample(density->value, count, seed);
    for (size_t i = 0; i < pts.size(); ++i) {
      xy_out[2 * i] = pts[i].x();
      xy_out[2 * i + 1] = pts[i].y();
    }
  });
}

eqs_status eqs_density_log_likelihood(const eqs_density* density, const eqs_catalog* catalog,
                                      double* out) {
  return guarded([&] {
    require(density != nullptr && catalog != nullptr && out != nullptr, "null argument");
    const auto pts = eqstat::event_locations(catalog->value);
    *out = eqstat::log_likelihood(density->value, pts);
  });
}

eqs_status eqs_density_region_box(const eqs_density* density, eqs_box* out) {
  return guarded([&] {
    require(density != nullptr && out != nullptr, "null argument");
    *out = to_box(eqstat::bounding_box(eqstat::density_region(density->value)));
  });
}

void eqs_density_free(eqs_density* density) { delete density; }

// ---- chance-level significance --------------------------------------------

eqs_status eqs_clt_significance(const double* p, size_t m, long n_successes, double* mu,
                                double* sigma, double* z, double* significance) {
  return guarded([&] {
    const auto r = eqstat::clt_significance(to_probs(p, m), n_successes);
    if (mu) *mu = r.mu;
    if (sigma) *sigma = r.sigma;
    if (z) *z = r.z;
    if (significance) *significance = r.significance;
  });
}

eqs_status eqs_exact_tail(const double* p, size_t m, long k, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = eqstat::exact_poisson_binomial(to_probs(p, m), k);
  });
}

eqs_status eqs_enhancement(const double* p, size_t m, long n_successes, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = eqstat::enhancement_estimate(to_probs(p, m), n_successes);
  });
}

eqs_status eqs_min_consistent_c(const double* p, size_t m, long n_successes, double alpha,
                                eqs_inflation* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const auto b = eqstat::min_consistent_c(to_probs(p, m), n_successes, alpha);
    *out = {b.c, b.root_found, b.residual, b.upper};
  });
}

eqs_status eqs_significance(const eqs_catalog* earthquakes, const eqs_catalog* background,
                            const eqs_predictions* predictions, const eqs_density* density,
                            const eqs_significance_options* options,
                            eqs_significance_report* out, eqs_prediction_row* rows) {
  return guarded([&] {
    require(earthquakes != nullptr && predictions != nullptr && density != nullptr &&
                out != nullptr,
            "null argument");
    eqstat::SignificanceOptions opts;
    if (options) {
      opts.alpha = options->alpha;
      opts.exact = options->exact != 0;
    }
    const auto r = eqstat::evaluate_predictions(predictions->value, density->value,
                                                earthquakes->value, opts,
                                                background ? &background->value : nullptr);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    eqs_significance_report rep{};
    rep.n_predictions = r.n_predictions;
    rep.n_successes = r.n_successes;
    rep.mu = r.mu;
    rep.sigma = r.sigma;
    rep.z = r.z;
    rep.significance = r.significance;
    rep.has_exact = r.exact_significance.has_value();
    rep.exact_significance = r.exact_significance.value_or(nan);
    rep.has_c_hat = r.c_hat.has_value();
    rep.c_hat = r.c_hat.value_or(nan);
    rep.has_c_min = r.c_min.has_value();
    if (r.c_min) {
      rep.c_min = {r.c_min->c, r.c_min->root_found, r.c_min->residual, r.c_min->upper};
    } else {
      rep.c_min = {nan, 0, nan, nan};
    }
    rep.alpha = r.alpha;
    rep.overlap_fraction = r.overlap_fraction;
    if (rows) {
      for (size_t j = 0; j < r.n_predictions; ++j) {
        rows[j] = {r.region_mass[j], r.chance_prob[j], r.n_background[j], r.success[j] ? 1 : 0};
      }
    }
    *out = rep;
  });
}

// ---- precursor delay test --------------------------------------------------

eqs_status eqs_tau_tail(double t, double u, long n, double span, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = eqstat::tau_tail(t, u, n, span);
  });
}

eqs_status eqs_tau_mean(double t, long n, double span, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = eqstat::tau_mean(t, n, span);
  });
}

eqs_status eqs_tau_var(double t, long n, double span, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = eqstat::tau_var(t, n, span);
  });
}

eqs_status eqs_precursor(const eqs_catalog* earthquakes, const eqs_predictions* predictions,
                         const eqs_precursor_options* options, eqs_precursor_report* out,
                         eqs_delay_row* rows) {
  return guarded([&] {
    require(earthquakes != nullptr && predictions != nullptr && out != nullptr, "null argument");
    require(!predictions->value.empty(), "no predictions");
    eqstat::PrecursorThresholds th;
    if (options) {
      th.precursor = options->precursor_threshold;
      th.postcursor = options->postcursor_threshold;
    }
    const auto ex = eqstat::extract_delays(predictions->value, earthquakes->value);
    const auto r = eqstat::precursor_test(ex.observations, ex.n_events, ex.span, th);
    eqs_precursor_report rep{};
    rep.y_obs = r.y_obs;
    rep.e_y = r.e_y;
    rep.var_y = r.var_y;
    rep.z = r.z;
    rep.precursor_flag = r.precursor_flag;
    rep.postcursor_flag = r.postcursor_flag;
    rep.m = r.m;
    rep.n = r.n;
    rep.span = r.span;
    rep.origin = ex.origin;
    rep.dropped_after_last_event = ex.dropped_after_last_event;
    if (rows) {
      for (size_t i = 0; i < ex.observations.size(); ++i) {
        const auto& o = ex.observations[i];
        rows[i] = {ex.prediction_index[i], o.t, o.tau_hat, o.censored ? 1 : 0,
                   eqstat::tau_mean(o.t, ex.n_events, ex.span),
                   eqstat::tau_var(o.t, ex.n_events, ex.span)};
      }
    }
    *out = rep;
  });
}

// ---- Monte Carlo -----------------------------------------------------------

eqs_status eqs_simulate_catalog(const eqs_null_model* model, const eqs_density* spatial,
                                eqs_catalog** out) {
  return guarded([&] {
    require(model != nullptr && spatial != nullptr && out != nullptr, "null argument");
    *out = new eqs_catalog{eqstat::simulate_null_catalog(to_null_model(*model, *spatial))};
  });
}

eqs_status eqs_empirical_significance(const eqs_null_model* model, const eqs_density* spatial,
                                      const eqs_predictions* predictions, size_t replicates,
                                      eqs_sim_summary* summary, long* successes,
                                      double* significance) {
  return guarded([&] {
    require(model != nullptr && spatial != nullptr && predictions != nullptr, "null argument");
    const auto sim = eqstat::empirical_significance(to_null_model(*model, *spatial),
                                                    predictions->value, replicates);
    fill_summary(sim.summary, summary);
    if (successes) std::copy(sim.successes.begin(), sim.successes.end(), successes);
    if (significance) std::copy(sim.significance.begin(), sim.significance.end(), significance);
  });
}

eqs_status eqs_empirical_precursor(const eqs_precursor_sim_options* options,
                                   eqs_sim_summary* summary, double* precursor_rate,
                                   double* postcursor_rate, double* z) {
  return guarded([&] {
    require(options != nullptr, "null argument");
    eqstat::PrecursorSimOptions o;
    o.m = options->m;
    o.n = options->n;
    o.span = options->span;
    o.replicates = options->replicates;
    o.seed = options->seed;
    o.mode = options->shared_catalog ? eqstat::DelayNull::shared_catalog
                                     : eqstat::DelayNull::independent;
    o.suppression_window = options->suppression_window;
    o.thresholds = {options->precursor_threshold, options->postcursor_threshold};
    const auto sim = eqstat::empirical_precursor(o);
    fill_summary(sim.summary, summary);
    if (precursor_rate) *precursor_rate = sim.precursor_rate;
    if (postcursor_rate) *postcursor_rate = sim.postcursor_rate;
    if (z) std::copy(sim.z.begin(), sim.z.end(), z);
  });
}

eqs_status eqs_empirical_tau_moments(double t, long n, double span, size_t replicates,
                                     uint64_t seed, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const auto m = eqstat::empirical_tau_moments(t, n, span, replicates, seed);
    out[0] = m.mean;
    out[1] = m.variance;
    out[2] = m.mean_std_error;
    out[3] = m.variance_std_error;
  });
}

}  // extern "C"
