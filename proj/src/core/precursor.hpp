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

// Delay-time test: do signals tend to precede earthquakes?
//
// The clock runs from the first signal (t = 0) to the last earthquake (t = T).
// With the other N - 1 earthquakes uniform on [0, T], the delay tau from a
// signal at t to the next earthquake has
//
//   P(tau > u) = (1 - u/T)^(N-1)            for 0 <= u < T - t,
//   P(tau = T - t) = (t/T)^(N-1)            (next event is the last one).
//
// Integrating the tail gives E[tau] = (T/N)(1 - a^N) with a = t/T, and
// integrating 2u P(tau > u) gives E[tau^2], hence
//
//   Var[tau] = T^2 [ (N-1)/(N^2 (N+1)) - 2(N-1)/N^2 a^N
//                    + 2/(N+1) a^(N+1) - a^(2N)/N^2 ].
//
// The statistic is Y = sum of observed delays, standardized with
// E[Y] = sum E[tau_j] and Var[Y] = sum Var[tau_j], treating the delays as
// independent.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "catalog.hpp"

namespace eqstat {

struct DelayObservation {
  double t = 0.0;        // signal time on the test clock
  double tau_hat = 0.0;  // observed delay to the next earthquake
  bool censored = false; // next earthquake is the final one (tau_hat = T - t)
};

// All three throw ValidationError for N < 2, T <= 0 or t outside [0, T].
double tau_tail(double t, double u, long n, double span);
double tau_mean(double t, long n, double span);
double tau_var(double t, long n, double span);

struct PrecursorThresholds {
  double precursor = -2.5;
  double postcursor = 2.5;
};

struct PrecursorResult {
  double y_obs = 0.0;
  double e_y = 0.0;
  double var_y = 0.0;
  double z = 0.0;
  bool precursor_flag = false;   // z <= thresholds.precursor
  bool postcursor_flag = false;  // z >= thresholds.postcursor
  std::size_t m = 0;
  long n = 0;
  double span = 0.0;
};

PrecursorResult precursor_test(std::span<const DelayObservation> observations, long n,
                               double span, const PrecursorThresholds& thresholds = {});

struct DelayExtraction {
  std::vector<DelayObservation> observations;
  // Index into the prediction list for each observation.
  std::vector<std::size_t> prediction_index;
  long n_events = 0;      // earthquakes at or after the first signal
  double span = 0.0;      // last earthquake - first signal
  double origin = 0.0;    // time of the first signal on the catalog clock
  // Signals after the last earthquake fall outside [0, T] and are skipped.
  std::size_t dropped_after_last_event = 0;
};

// Signal time is the prediction's issue time. Delays run to the next
// earthquake at or after the signal (a simultaneous earthquake gives 0).
// Throws ValidationError without predictions or without an earthquake at or
// after the first one.
DelayExtraction extract_delays(const std::vector<Prediction>& predictions, const Catalog& catalog);

}  // namespace eqstat
