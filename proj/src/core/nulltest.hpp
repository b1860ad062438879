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

// "Better than chance" test for a set of predictions.
//
// Under the null, prediction j succeeds independently with probability p_j.
// The number of successes X_M is Poisson-binomial; its upper tail at the
// observed count N_M is the significance level. The normal approximation
// with continuity correction is
//
//   P(X_M >= N_M) ~= 1 - Phi((N_M - mu_M - 1/2) / sigma_M),
//   mu_M = sum p_j,  sigma_M^2 = sum p_j (1 - p_j),
//
// and the exact tail is available by convolution for M <= 10^4.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "catalog.hpp"
#include "spatial.hpp"

namespace eqstat {

class ChanceProbabilities {
 public:
  // Throws ValidationError unless 1 <= M and every p_j is in [0, 1].
  explicit ChanceProbabilities(std::vector<double> p);

  std::span<const double> values() const { return p_; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t j) const { return p_[j]; }

  double mean() const;      // mu_M
  double variance() const;  // sigma_M^2

 private:
  std::vector<double> p_;
};

// p_j = 1 - (1 - s_j d_j / T)^N_bg: the chance that at least one of N_bg
// events, placed uniformly in time over the record and by `density` in
// space, lands in the prediction's window and region. N_bg counts catalog
// events at or above the prediction's magnitude threshold.
// Throws ValidationError if d_j > T or N_bg = 0.
double prediction_chance_prob(const Prediction& prediction, const SpatialDensity& density,
                              const Catalog& catalog);

// Same formula from a precomputed region mass s_j, window length d_j.
double chance_prob_from_mass(double region_mass, double duration, double span,
                             std::size_t n_background);

// Success = at least one catalog event inside the region, inside
// [window_start, window_end] and at or above min_magnitude.
std::vector<bool> prediction_successes(const std::vector<Prediction>& predictions,
                                       const Catalog& catalog);
std::size_t count_successes(const std::vector<Prediction>& predictions, const Catalog& catalog);

struct CltSignificance {
  double mu = 0.0;
  double sigma = 0.0;
  double z = 0.0;
  double significance = 0.0;
};

// Throws ValidationError("degenerate chance probabilities") when sigma_M = 0.
CltSignificance clt_significance(const ChanceProbabilities& probs, long n_successes);

// Distribution of X_M, length M + 1. Throws ValidationError if M > 10^4.
std::vector<double> poisson_binomial_pmf(std::span<const double> p);

// P(X_M >= k); 1 for k <= 0 and 0 for k > M.
double exact_poisson_binomial(const ChanceProbabilities& probs, long k);
// Same, from a precomputed pmf.
double upper_tail(std::span<const double> pmf, long k);

// c_hat = N_M / mu_M. Throws ValidationError when mu_M = 0.
double enhancement_estimate(const ChanceProbabilities& probs, long n_successes);

// Significance if every p_j were inflated to c * p_j:
// 1 - Phi((N_M - c mu_M - 1/2) / sigma_c), sigma_c^2 = sum c p_j (1 - c p_j).
double inflated_significance(const ChanceProbabilities& probs, long n_successes, double c);

struct InflationBound {
  double c = 0.0;
  bool root_found = false;
  // |P_c - alpha| at the returned c.
  double residual = 0.0;
  // Right end of the search bracket, min(2 c_hat, 1 / max_j p_j).
  double upper = 0.0;
};

// Smallest c with inflated_significance(c) = alpha. The bracket is scanned
// for the first sign change and then bisected. If no root lies in the
// bracket, returns c = upper with root_found = false.
// Throws ValidationError for sigma_M = 0, N_M < 1 or alpha outside (0, 0.5).
InflationBound min_consistent_c(const ChanceProbabilities& probs, long n_successes, double alpha);

// Fraction of predictions whose space-time window overlaps another's.
double overlap_fraction(const std::vector<Prediction>& predictions);

struct SignificanceOptions {
  double alpha = 0.05;
  bool exact = false;
};

struct SignificanceReport {
  std::size_t n_predictions = 0;
  long n_successes = 0;
  double mu = 0.0;
  double sigma = 0.0;
  double z = 0.0;
  double significance = 0.0;
  std::optional<double> exact_significance;
  std::optional<double> c_hat;
  std::optional<InflationBound> c_min;
  double alpha = 0.05;
  double overlap_fraction = 0.0;

  // Per prediction, in input order.
  std::vector<double> region_mass;  // s_j
  std::vector<double> chance_prob;  // p_j
  std::vector<std::size_t> n_background;
  std::vector<bool> success;
};

// Successes are counted in `catalog`. `background` (default: `catalog`)
// supplies N_bg and the record span for the chance probabilities, e.g. an
// aftershock-filtered copy.
SignificanceReport evaluate_predictions(const std::vector<Prediction>& predictions,
                                        const SpatialDensity& density, const Catalog& catalog,
                                        const SignificanceOptions& options = {},
                                        const Catalog* background = nullptr);

}  // namespace eqstat
