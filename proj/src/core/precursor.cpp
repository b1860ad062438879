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

#include "precursor.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace eqstat {
namespace {

// Returns a = t / T after validating the arguments.
double check(double t, long n, double span) {
  if (n < 2) throw ValidationError("delay distribution needs N >= 2 earthquakes");
  if (!(span > 0.0) || !std::isfinite(span)) throw ValidationError("T must be positive");
  if (!(t >= 0.0 && t <= span)) throw ValidationError("signal time outside [0, T]");
  return t / span;
}

}  // namespace

double tau_tail(double t, double u, long n, double span) {
  check(t, n, span);
  if (!(u >= 0.0)) throw ValidationError("u must be non-negative");
  if (u >= span - t) return 0.0;
  return std::pow(1.0 - u / span, static_cast<double>(n - 1));
}

double tau_mean(double t, long n, double span) {
  const double a = check(t, n, span);
  if (a >= 1.0) return 0.0;
  const double nn = static_cast<double>(n);
  return span / nn * (1.0 - std::pow(a, nn));
}

double tau_var(double t, long n, double span) {
  const double a = check(t, n, span);
  if (a >= 1.0) return 0.0;
  const double nn = static_cast<double>(n);
  const double lead = (nn - 1.0) / (nn * nn * (nn + 1.0));
  if (a == 0.0) return span * span * (nn - 1.0) / (nn * nn * (nn + 1.0));
  const double an = std::pow(a, nn);
  const double v = lead - 2.0 * (nn - 1.0) / (nn * nn) * an + 2.0 / (nn + 1.0) * an * a -
                   an * an / (nn * nn);
  return span * span * std::max(v, 0.0);
}

PrecursorResult precursor_test(std::span<const DelayObservation> observations, long n,
                               double span, const PrecursorThresholds& thresholds) {
  if (observations.empty()) throw ValidationError("no predictions");
  if (!(span > 0.0)) throw ValidationError("T must be positive");
  if (n < 2) throw ValidationError("precursor test needs N >= 2 earthquakes");
  if (!(thresholds.precursor < thresholds.postcursor)) {
    throw ValidationError("precursor threshold must be below the postcursor threshold");
  }
  PrecursorResult r;
  r.m = observations.size();
  r.n = n;
  r.span = span;
  for (const auto& o : observations) {
    if (o.t > span || o.t < 0.0) throw ValidationError("observation time outside [0, T]");
    if (o.tau_hat < 0.0 || o.tau_hat > span - o.t + 1e-9 * span) {
      throw ValidationError("observed delay outside [0, T - t]");
    }
    r.y_obs += o.tau_hat;
    r.e_y += tau_mean(o.t, n, span);
    r.var_y += tau_var(o.t, n, span);
  }
  if (!(r.var_y > 0.0)) throw ValidationError("delay statistic has zero variance");
  r.z = (r.y_obs - r.e_y) / std::sqrt(r.var_y);
  r.precursor_flag = r.z <= thresholds.precursor;
  r.postcursor_flag = r.z >= thresholds.postcursor;
  return r;
}

DelayExtraction extract_delays(const std::vector<Prediction>& predictions, const Catalog& catalog) {
  if (predictions.empty()) throw ValidationError("no predictions");
  const auto& events = catalog.events();
  DelayExtraction out;
  out.origin = predictions.front().issue_time;
  for (const auto& p : predictions) out.origin = std::min(out.origin, p.issue_time);

  const auto by_time = [](const EarthquakeEvent& e, double t) { return e.time < t; };
  const auto first = std::lower_bound(events.begin(), events.end(), out.origin, by_time);
  if (first == events.end()) throw ValidationError("no earthquake after the first prediction");
  const double last = events.back().time;
  out.n_events = static_cast<long>(events.end() - first);
  out.span = last - out.origin;

  for (std::size_t j = 0; j < predictions.size(); ++j) {
    const double issue = predictions[j].issue_time;
    if (issue > last) {
      ++out.dropped_after_last_event;
      continue;
    }
    const auto next = std::lower_bound(first, events.end(), issue, by_time);
    DelayObservation o;
    o.t = issue - out.origin;
    o.tau_hat = next->time - issue;
    o.censored = next->time == last;
    out.observations.push_back(o);
    out.prediction_index.push_back(j);
  }
  return out;
}

}  // namespace eqstat
