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

#include "mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "errors.hpp"
#include "nulltest.hpp"
#include "rng.hpp"

namespace eqstat {
namespace {

// Runs body(i) for i in [0, n) on up to hardware_concurrency threads. Each
// index writes only its own output slot, so the result is schedule-free.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < n; i = next++) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Sorted uniforms on [0, 1) from normalized exponential spacings.
std::vector<double> sorted_uniforms(std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += rng.exponential(1.0);
    out[i] = s;
  }
  s += rng.exponential(1.0);
  for (auto& v : out) v /= s;
  return out;
}

double sample_variance(const std::vector<double>& x, double mean) {
  if (x.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(x.size() - 1);
}

double quantile_sorted(const std::vector<double>& s, double q) {
  const double h = (static_cast<double>(s.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

// Delay from t to the first of `times` (sorted) at or after t, else to T.
double delay_from(const std::vector<double>& times, double t, double span) {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  return it == times.end() ? span - t : *it - t;
}

bool suppressed(const std::vector<double>& times, double t, double window) {
  if (window <= 0.0) return false;
  // Any event in [t - window, t)?
  const auto it = std::lower_bound(times.begin(), times.end(), t - window);
  return it != times.end() && *it < t;
}

}  // namespace

void validate(const NullModel& model) {
  if (model.n_events < 1) throw ValidationError("null model needs N >= 1 events");
  if (!(model.span > 0.0)) throw ValidationError("null model needs T > 0");
  if (!(model.b_value > 0.0)) throw ValidationError("b-value must be positive");
  if (model.clustering) {
    const auto& c = *model.clustering;
    if (!(c.fraction >= 0.0 && c.fraction < 1.0))
      throw ValidationError("clustering fraction must lie in [0, 1)");
    if (!(c.time_decay > 0.0) || !(c.spatial_spread >= 0.0))
      throw ValidationError("clustering decay must be positive and spread non-negative");
  }
}

Catalog simulate_null_catalog(const NullModel& model) {
  return simulate_null_catalog(model, model.seed);
}

Catalog simulate_null_catalog(const NullModel& model, std::uint64_t seed) {
  validate(model);
  Rng rng(seed);
  const std::size_t n = model.n_events;
  const double t0 = model.record_start;
  const double t1 = model.record_start + model.span;
  const double mag_scale = 1.0 / (model.b_value * std::log(10.0));
  const Region& region = density_region(model.spatial);

  const auto times = sorted_uniforms(n, rng);
  std::vector<EarthquakeEvent> events(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = sample_one(model.spatial, rng);
    events[i] = {t0 + model.span * times[i], p.x(), p.y(),
                 model.magnitude_min + rng.exponential(mag_scale)};
  }

  if (model.clustering && model.clustering->fraction > 0.0) {
    const auto& c = *model.clustering;
    const auto k = static_cast<std::size_t>(std::llround(c.fraction * static_cast<double>(n)));
    // Partial Fisher-Yates: the first k slots become postcursors.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
      std::swap(order[i], order[i + rng.below(n - i)]);
    }
    const std::vector<std::size_t> mains(order.begin() + static_cast<std::ptrdiff_t>(std::min(k, n - 1)),
                                         order.end());
    for (std::size_t i = 0; i < std::min(k, n - 1); ++i) {
      const auto& main = events[mains[rng.below(mains.size())]];
      auto& post = events[order[i]];
      const double room = t1 - main.time;
      const double cut = -std::expm1(-room / c.time_decay);
      post.time = std::min(t1, main.time - c.time_decay * std::log1p(-rng.uniform() * cut));
      Vec2 loc = main.location();
      for (int attempt = 0; attempt < 1000; ++attempt) {
        const double dx = c.spatial_spread * rng.normal();
        const double dy = c.spatial_spread * rng.normal();
        const Vec2 cand = main.location() + Vec2(dx, dy);
        if (contains(region, cand)) {
          loc = cand;
          break;
        }
      }
      post.x = loc.x();
      post.y = loc.y();
      post.magnitude = model.magnitude_min + (main.magnitude - model.magnitude_min) * rng.uniform();
    }
  }
  return Catalog(std::move(events), t0, t1, region);
}

double ks_distance_uniform(std::vector<double> samples) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double u = std::clamp(samples[i], 0.0, 1.0);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - u, u - static_cast<double>(i) / n});
  }
  return d;
}

SimulationSummary summarize(const std::vector<double>& samples, bool ks_vs_uniform) {
  SimulationSummary s;
  s.replicates = samples.size();
  if (samples.empty()) return s;
  // Sorted merge makes the floating-point sums independent of arrival order.
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(sorted.size());
  s.variance = sample_variance(sorted, s.mean);
  s.mean_std_error = std::sqrt(s.variance / static_cast<double>(sorted.size()));
  for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) s.quantiles.push_back(quantile_sorted(sorted, q));
  if (ks_vs_uniform && sorted.size() >= 100) s.ks_uniform = ks_distance_uniform(sorted);
  return s;
}

SignificanceSimulation empirical_significance(const NullModel& model,
                                              const std::vector<Prediction>& predictions,
                                              std::size_t replicates) {
  validate(model);
  if (predictions.empty()) throw ValidationError("no predictions");
  if (replicates < 1) throw ValidationError("need at least one replicate");

  std::vector<double> mass(predictions.size());
  for (std::size_t j = 0; j < predictions.size(); ++j) {
    const auto& p = predictions[j];
    if (p.duration() > model.span) throw ValidationError("prediction window is longer than the record");
    mass[j] = p.duration() > 0.0 ? integrate_region(model.spatial, p.region) : 0.0;
  }

  SignificanceSimulation out;
  out.successes.resize(replicates);
  out.significance.resize(replicates);

  // pmf per distinct background-count vector; usually a single entry.
  std::map<std::vector<std::size_t>, std::vector<double>> pmf_cache;
  std::mutex cache_mutex;

  parallel_for(replicates, [&](std::size_t r) {
    const Catalog cat = simulate_null_catalog(model, child_seed(model.seed, r));
    std::vector<double> mags;
    mags.reserve(cat.size());
    for (const auto& e : cat.events()) mags.push_back(e.magnitude);
    std::sort(mags.begin(), mags.end());
    std::vector<std::size_t> n_bg(predictions.size());
    for (std::size_t j = 0; j < predictions.size(); ++j) {
      const auto first = std::lower_bound(mags.begin(), mags.end(), predictions[j].min_magnitude);
      n_bg[j] = static_cast<std::size_t>(mags.end() - first);
    }

    std::vector<double> pmf;
    {
      std::lock_guard lock(cache_mutex);
      const auto it = pmf_cache.find(n_bg);
      if (it != pmf_cache.end()) pmf = it->second;
    }
    if (pmf.empty()) {
      std::vector<double> p(predictions.size());
      for (std::size_t j = 0; j < predictions.size(); ++j)
        p[j] = chance_prob_from_mass(mass[j], predictions[j].duration(), cat.span(), n_bg[j]);
      pmf = poisson_binomial_pmf(p);
      std::lock_guard lock(cache_mutex);
      pmf_cache.emplace(n_bg, pmf);
    }
    const auto k = static_cast<long>(count_successes(predictions, cat));
    out.successes[r] = k;
    out.significance[r] = upper_tail(pmf, k);
  });

  out.summary = summarize(out.significance, true);
  return out;
}

TauMoments empirical_tau_moments(double t, long n, double span, std::size_t replicates,
                                 std::uint64_t seed) {
  if (replicates < 10000) throw ValidationError("tau moment simulation needs >= 10^4 replicates");
  if (n < 2) throw ValidationError("delay distribution needs N >= 2 earthquakes");
  if (!(span > 0.0) || !(t >= 0.0 && t <= span)) throw ValidationError("need 0 <= t <= T, T > 0");

  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (replicates + kChunk - 1) / kChunk;
  std::vector<double> tau(replicates);
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng(child_seed(seed, c));
    const std::size_t end = std::min(replicates, (c + 1) * kChunk);
    for (std::size_t r = c * kChunk; r < end; ++r) {
      double best = span - t;
      for (long i = 0; i < n - 1; ++i) {
        const double u = span * rng.uniform();
        if (u >= t) best = std::min(best, u - t);
      }
      tau[r] = best;
    }
  });

  const double rn = static_cast<double>(replicates);
  double sum = 0.0;
  for (double v : tau) sum += v;
  TauMoments m;
  m.mean = sum / rn;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : tau) {
    const double d2 = (v - m.mean) * (v - m.mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  m.variance = m2 / (rn - 1.0);
  m.mean_std_error = std::sqrt(m.variance / rn);
  const double c2 = m2 / rn;
  m.variance_std_error = std::sqrt(std::max(0.0, m4 / rn - c2 * c2) / rn);
  return m;
}

PrecursorSimulation empirical_precursor(const PrecursorSimOptions& o) {
  if (o.m < 1) throw ValidationError("need at least one signal");
  if (o.n < 2) throw ValidationError("need N >= 2 earthquakes");
  if (!(o.span > 0.0)) throw ValidationError("need T > 0");
  if (o.replicates < 1) throw ValidationError("need at least one replicate");
  if (!(o.suppression_window >= 0.0) || o.suppression_window >= o.span)
    throw ValidationError("suppression window must lie in [0, T)");

  PrecursorSimulation out;
  out.z.resize(o.replicates);
  std::vector<char> pre(o.replicates, 0);
  std::vector<char> post(o.replicates, 0);
  const auto draw_catalog = [&](Rng& rng) {
    auto times = sorted_uniforms(static_cast<std::size_t>(o.n - 1), rng);
    for (auto& v : times) v *= o.span;
    return times;
  };

  parallel_for(o.replicates, [&](std::size_t r) {
    Rng rng(child_seed(o.seed, r));
    std::vector<DelayObservation> obs(o.m);
    if (o.mode == DelayNull::shared_catalog) {
      const auto times = draw_catalog(rng);
      for (std::size_t j = 0; j < o.m; ++j) {
        double t = 0.0;
        if (j > 0) {
          do {
            t = rng.uniform(0.0, o.span);
          } while (suppressed(times, t, o.suppression_window));
        }
        const double tau = delay_from(times, t, o.span);
        obs[j] = {t, tau, tau == o.span - t};
      }
    } else {
      for (std::size_t j = 0; j < o.m; ++j) {
        double t = 0.0;
        std::vector<double> times;
        do {
          t = j == 0 ? 0.0 : rng.uniform(0.0, o.span);
          times = draw_catalog(rng);
        } while (suppressed(times, t, o.suppression_window));
        const double tau = delay_from(times, t, o.span);
        obs[j] = {t, tau, tau == o.span - t};
      }
    }
    const auto res = precursor_test(obs, o.n, o.span, o.thresholds);
    out.z[r] = res.z;
    pre[r] = res.precursor_flag;
    post[r] = res.postcursor_flag;
  });

  out.summary = summarize(out.z, false);
  const double rn = static_cast<double>(o.replicates);
  out.precursor_rate = static_cast<double>(std::count(pre.begin(), pre.end(), 1)) / rn;
  out.postcursor_rate = static_cast<double>(std::count(post.begin(), post.end(), 1)) / rn;
  return out;
}

}  // namespace eqstat
