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

// Monte Carlo under the null: simulated catalogs and delay experiments used
// to calibrate and cross-check the analytic tests.
//
// Replicate r always draws from child_seed(master, r), so results do not
// depend on thread count or scheduling.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "catalog.hpp"
#include "precursor.hpp"
#include "spatial.hpp"

namespace eqstat {

// Crude postcursor injection: a fraction of events are moved to follow a
// randomly chosen remaining event by an exponential delay (truncated at the
// record end), displaced by an isotropic Gaussian, with a magnitude drawn
// uniformly below the mainshock's.
struct ClusteringParams {
  double fraction = 0.0;        // in [0, 1)
  double time_decay = 1.0;      // mean delay, days
  double spatial_spread = 5.0;  // offset standard deviation per axis, km
};

struct NullModel {
  std::size_t n_events = 0;
  double span = 0.0;  // T, days; events live on [record_start, record_start + T]
  SpatialDensity spatial;
  std::optional<ClusteringParams> clustering;
  std::uint64_t seed = 0;
  double record_start = 0.0;
  // Gutenberg-Richter magnitudes above magnitude_min.
  double magnitude_min = 4.0;
  double b_value = 1.0;
};

// Throws ValidationError for N < 1, T <= 0 or a clustering fraction outside [0, 1).
void validate(const NullModel& model);

Catalog simulate_null_catalog(const NullModel& model);
Catalog simulate_null_catalog(const NullModel& model, std::uint64_t seed);

struct SimulationSummary {
  std::size_t replicates = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased; 0 for a single sample
  double mean_std_error = 0.0;
  // Type-7 quantiles at 5, 25, 50, 75, 95 %.
  std::vector<double> quantiles;
  // Kolmogorov-Smirnov distance to U(0, 1), computed from 100 replicates up.
  std::optional<double> ks_uniform;
};

SimulationSummary summarize(const std::vector<double>& samples, bool ks_vs_uniform);
double ks_distance_uniform(std::vector<double> samples);

struct SignificanceSimulation {
  SimulationSummary summary;
  std::vector<long> successes;      // per replicate
  std::vector<double> significance; // exact P(X >= N_M) per replicate
};

// Each replicate simulates a catalog, counts successes, recomputes the p_j
// with that catalog's N_bg and takes the exact Poisson-binomial tail.
SignificanceSimulation empirical_significance(const NullModel& model,
                                              const std::vector<Prediction>& predictions,
                                              std::size_t replicates);

struct TauMoments {
  double mean = 0.0;
  double variance = 0.0;
  double mean_std_error = 0.0;
  double variance_std_error = 0.0;
};

// N - 1 uniform event times on [0, T]; the delay from t runs to the first of
// them at or after t, or to T when none is. Requires replicates >= 10^4.
TauMoments empirical_tau_moments(double t, long n, double span, std::size_t replicates,
                                 std::uint64_t seed);

enum class DelayNull {
  // Every delay gets its own catalog draw: the delays are independent given
  // the signal times, as the variance formula assumes.
  independent,
  // One catalog per replicate shared by all signals.
  shared_catalog,
};

struct PrecursorSimOptions {
  std::size_t m = 50;
  long n = 100;
  double span = 1.0;
  std::size_t replicates = 10000;
  std::uint64_t seed = 0;
  DelayNull mode = DelayNull::independent;
  // Signals landing within this time after an earthquake are discarded and
  // redrawn. The first signal is pinned at t = 0.
  double suppression_window = 0.0;
  PrecursorThresholds thresholds;
};

struct PrecursorSimulation {
  SimulationSummary summary;
  std::vector<double> z;
  double precursor_rate = 0.0;
  double postcursor_rate = 0.0;
};

PrecursorSimulation empirical_precursor(const PrecursorSimOptions& options);

}  // namespace eqstat
