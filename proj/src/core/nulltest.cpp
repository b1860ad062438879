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

#include "nulltest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "errors.hpp"
#include "normal.hpp"

namespace eqstat {
namespace {

constexpr std::size_t kMaxExactM = 10000;
constexpr int kScanPoints = 2048;

}  // namespace

ChanceProbabilities::ChanceProbabilities(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw ValidationError("need at least one chance probability");
  for (std::size_t j = 0; j < p_.size(); ++j) {
    if (!(p_[j] >= 0.0 && p_[j] <= 1.0)) {
      throw ValidationError("chance probability " + std::to_string(j) + " outside [0, 1]");
    }
  }
}

double ChanceProbabilities::mean() const { return std::accumulate(p_.begin(), p_.end(), 0.0); }

double ChanceProbabilities::variance() const {
  double v = 0.0;
  for (double p : p_) v += p * (1.0 - p);
  return v;
}

double prediction_chance_prob(const Prediction& prediction, const SpatialDensity& density,
                              const Catalog& catalog) {
  const double span = catalog.span();
  const double d = prediction.duration();
  if (!(span > 0.0)) throw ValidationError("catalog record span must be positive");
  if (d > span) throw ValidationError("prediction window is longer than the record");
  const std::size_t n_bg = catalog.count_at_or_above(prediction.min_magnitude);
  if (n_bg == 0) {
    throw ValidationError("no catalog events at or above the prediction's magnitude threshold");
  }
  if (d <= 0.0) return 0.0;
  return chance_prob_from_mass(integrate_region(density, prediction.region), d, span, n_bg);
}

double chance_prob_from_mass(double region_mass, double duration, double span,
                             std::size_t n_background) {
  if (!(span > 0.0)) throw ValidationError("catalog record span must be positive");
  if (duration > span) throw ValidationError("prediction window is longer than the record");
  if (duration <= 0.0 || region_mass <= 0.0 || n_background == 0) return 0.0;
  const double x = std::clamp(region_mass * duration / span, 0.0, 1.0);
  if (x >= 1.0) return 1.0;
  const double p = -std::expm1(static_cast<double>(n_background) * std::log1p(-x));
  return std::clamp(p, 0.0, 1.0);
}

std::vector<bool> prediction_successes(const std::vector<Prediction>& predictions,
                                       const Catalog& catalog) {
  const auto& events = catalog.events();
  std::vector<bool> out(predictions.size(), false);
  for (std::size_t j = 0; j < predictions.size(); ++j) {
    const auto& p = predictions[j];
    auto it = std::lower_bound(events.begin(), events.end(), p.window_start,
                               [](const EarthquakeEvent& e, double t) { return e.time < t; });
    for (; it != events.end() && it->time <= p.window_end; ++it) {
      if (it->magnitude >= p.min_magnitude && contains(p.region, it->location())) {
        out[j] = true;
        break;
      }
    }
  }
  return out;
}

std::size_t count_successes(const std::vector<Prediction>& predictions, const Catalog& catalog) {
  const auto s = prediction_successes(predictions, catalog);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), true));
}

CltSignificance clt_significance(const ChanceProbabilities& probs, long n_successes) {
  const double var = probs.variance();
  if (!(var > 0.0)) throw ValidationError("degenerate chance probabilities");
  CltSignificance r;
  r.mu = probs.mean();
  r.sigma = std::sqrt(var);
  r.z = (static_cast<double>(n_successes) - r.mu - 0.5) / r.sigma;
  r.significance = normal_sf(r.z);
  return r;
}

std::vector<double> poisson_binomial_pmf(std::span<const double> p) {
  if (p.size() > kMaxExactM) throw ValidationError("exact tail limited to M <= 10000");
  std::vector<double> pmf(p.size() + 1, 0.0);
  pmf[0] = 1.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double q = 1.0 - p[j];
    for (std::size_t k = j + 1; k > 0; --k) pmf[k] = pmf[k] * q + pmf[k - 1] * p[j];
    pmf[0] *= q;
  }
  return pmf;
}

double upper_tail(std::span<const double> pmf, long k) {
  const long m = static_cast<long>(pmf.size()) - 1;
  if (k <= 0) return 1.0;
  if (k > m) return 0.0;
  double tail = 0.0;
  for (long i = m; i >= k; --i) tail += pmf[static_cast<std::size_t>(i)];
  return std::min(tail, 1.0);
}

double exact_poisson_binomial(const ChanceProbabilities& probs, long k) {
  if (k <= 0) return 1.0;
  if (k > static_cast<long>(probs.size())) return 0.0;
  return upper_tail(poisson_binomial_pmf(probs.values()), k);
}

double enhancement_estimate(const ChanceProbabilities& probs, long n_successes) {
  const double mu = probs.mean();
  if (!(mu > 0.0)) throw ValidationError("enhancement undefined: expected successes is zero");
  return static_cast<double>(n_successes) / mu;
}

double inflated_significance(const ChanceProbabilities& probs, long n_successes, double c) {
  double mu = 0.0;
  double var = 0.0;
  for (double p : probs.values()) {
    const double cp = c * p;
    mu += cp;
    var += cp * (1.0 - cp);
  }
  const double num = static_cast<double>(n_successes) - mu - 0.5;
  if (!(var > 0.0)) {
    if (num > 0.0) return 0.0;
    if (num < 0.0) return 1.0;
    return 0.5;
  }
  return normal_sf(num / std::sqrt(var));
}

InflationBound min_consistent_c(const ChanceProbabilities& probs, long n_successes, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw ValidationError("alpha must lie in (0, 0.5)");
  if (n_successes < 1) throw ValidationError("c_min needs at least one success");
  if (!(probs.variance() > 0.0)) throw ValidationError("degenerate chance probabilities");

  const double c_hat = enhancement_estimate(probs, n_successes);
  const double p_max = *std::max_element(probs.values().begin(), probs.values().end());
  const double cap = 1.0 / p_max;

  InflationBound out;
  out.upper = std::min(2.0 * c_hat, cap);
  const auto g = [&](double c) { return inflated_significance(probs, n_successes, c) - alpha; };

  double lo = 0.0;
  double hi = std::numeric_limits<double>::quiet_NaN();
  for (int i = 1; i <= kScanPoints; ++i) {
    const double c = out.upper * static_cast<double>(i) / kScanPoints;
    if (g(c) >= 0.0) {
      hi = c;
      break;
    }
    lo = c;
  }
  if (std::isnan(hi)) {
    out.c = out.upper;
    out.root_found = false;
    out.residual = std::abs(g(out.upper));
    return out;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) {
      lo = hi = mid;
      break;
    }
    (gm < 0.0 ? lo : hi) = mid;
  }
  const double glo = std::abs(g(lo));
  const double ghi = std::abs(g(hi));
  out.c = glo < ghi ? lo : hi;
  out.residual = std::min(glo, ghi);
  out.root_found = true;
  return out;
}

double overlap_fraction(const std::vector<Prediction>& predictions) {
  const std::size_t m = predictions.size();
  if (m == 0) return 0.0;
  std::vector<bool> overlaps(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = i + 1; k < m; ++k) {
      const auto& a = predictions[i];
      const auto& b = predictions[k];
      const bool in_time = a.window_start < b.window_end && b.window_start < a.window_end;
      if (in_time && intersects(a.region, b.region)) overlaps[i] = overlaps[k] = true;
    }
  }
  return static_cast<double>(std::count(overlaps.begin(), overlaps.end(), true)) /
         static_cast<double>(m);
}

SignificanceReport evaluate_predictions(const std::vector<Prediction>& predictions,
                                        const SpatialDensity& density, const Catalog& catalog,
                                        const SignificanceOptions& options,
                                        const Catalog* background) {
  if (predictions.empty()) throw ValidationError("no predictions");
  if (!(options.alpha > 0.0 && options.alpha < 0.5)) throw ValidationError("alpha must lie in (0, 0.5)");
  validate_predictions(predictions, catalog);
  const Catalog& bg = background ? *background : catalog;
  if (!(bg.span() > 0.0)) throw ValidationError("catalog record span must be positive");

  SignificanceReport r;
  r.n_predictions = predictions.size();
  r.alpha = options.alpha;
  std::vector<double> p;
  for (const auto& pred : predictions) {
    const double d = pred.duration();
    const std::size_t n_bg = bg.count_at_or_above(pred.min_magnitude);
    if (n_bg == 0) {
      throw ValidationError("no catalog events at or above the prediction's magnitude threshold");
    }
    const double mass = d > 0.0 ? integrate_region(density, pred.region) : 0.0;
    r.region_mass.push_back(mass);
    r.n_background.push_back(n_bg);
    p.push_back(chance_prob_from_mass(mass, d, bg.span(), n_bg));
  }
  r.chance_prob = p;
  r.success = prediction_successes(predictions, catalog);
  r.n_successes = static_cast<long>(std::count(r.success.begin(), r.success.end(), true));
  r.overlap_fraction = overlap_fraction(predictions);

  const ChanceProbabilities probs(std::move(p));
  const auto clt = clt_significance(probs, r.n_successes);
  r.mu = clt.mu;
  r.sigma = clt.sigma;
  r.z = clt.z;
  r.significance = clt.significance;
  if (options.exact) r.exact_significance = exact_poisson_binomial(probs, r.n_successes);
  if (r.mu > 0.0) r.c_hat = enhancement_estimate(probs, r.n_successes);
  if (r.n_successes >= 1) r.c_min = min_consistent_c(probs, r.n_successes, options.alpha);
  return r;
}

}  // namespace eqstat
