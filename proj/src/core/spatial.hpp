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

// Normalized spatial occurrence densities over a study region.
//
// Parametric form:  p(x) = p0 + p1 * exp(-(x - x_c)' Q (x - x_c)),  Q SPD.
// The bump is a Gaussian with covariance (2Q)^-1 truncated to the region; the
// homogeneous level p0 is fixed by normalization, p0 = (1 - p1 * I_Q) / A,
// where I_Q is the bump integral over the region and A the region area.
//
// Kernel form: product Gaussian kernels with a diagonal bandwidth, truncated
// to the region and renormalized there.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "catalog.hpp"
#include "geometry.hpp"
#include "rng.hpp"

namespace eqstat {

class ParametricDensity {
 public:
  // Fixes p1 from the bump's share of probability mass, 0 <= mass <= 1.
  static ParametricDensity from_mass(const Vec2& center, const Mat2& q, double bump_mass,
                                     Region region);
  // Fixes p0 from normalization; throws ValidationError if that makes p0 < 0.
  static ParametricDensity from_amplitude(const Vec2& center, const Mat2& q, double p1,
                                          Region region);
  static ParametricDensity uniform(Region region);

  const Vec2& center() const { return center_; }
  const Mat2& q() const { return q_; }
  double p0() const { return p0_; }
  double p1() const { return p1_; }
  const Region& region() const { return region_; }
  double region_area() const { return area_; }
  // Integral of exp(-quadratic form) over the region.
  double bump_integral() const { return bump_integral_; }
  double bump_mass() const { return p1_ * bump_integral_; }

  // Unchecked evaluation (no region test).
  double operator()(const Vec2& x) const;

 private:
  ParametricDensity(const Vec2& center, const Mat2& q, Region region);

  Vec2 center_;
  Mat2 q_;
  double p0_ = 0.0;
  double p1_ = 0.0;
  Region region_;
  double area_ = 0.0;
  double bump_integral_ = 0.0;
};

class KernelDensity {
 public:
  // bandwidth = per-axis standard deviations (h_x, h_y), both > 0.
  KernelDensity(std::vector<Vec2> points, const Vec2& bandwidth, Region region);

  const std::vector<Vec2>& points() const { return points_; }
  const Vec2& bandwidth() const { return bandwidth_; }
  const Region& region() const { return region_; }
  // Mean kernel mass inside the region; densities are divided by it.
  double normalizer() const { return normalizer_; }

  double operator()(const Vec2& x) const;

 private:
  std::vector<Vec2> points_;
  Vec2 bandwidth_;
  Region region_;
  double normalizer_ = 1.0;
};

using SpatialDensity = std::variant<ParametricDensity, KernelDensity>;

const Region& density_region(const SpatialDensity& model);

// Throws ValidationError if `point` lies outside the model's region.
double eval_density(const SpatialDensity& model, const Vec2& point);

// Probability mass of `subregion`. Throws ValidationError unless the
// subregion lies inside the model's region.
double integrate_region(const SpatialDensity& model, const Region& subregion);

double log_likelihood(const SpatialDensity& model, std::span<const Vec2> points);

// Draws one point from the model using `rng`.
Vec2 sample_one(const SpatialDensity& model, Rng& rng);
std::vector<Vec2> sample(const SpatialDensity& model, std::size_t count, std::uint64_t seed);

struct MleOptions {
  int max_iterations = 10000;
  double rel_tol = 1e-9;
};

struct MleFit {
  ParametricDensity density;
  double log_likelihood = 0.0;
  double uniform_log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  // Asymptotic covariance of the fitted peak location from the observed
  // information; NaN when the information matrix is not positive definite.
  Mat2 center_covariance;
  // Best log-likelihood after each optimizer iteration (non-decreasing).
  std::vector<double> trace;
};

std::vector<Vec2> event_locations(const Catalog& catalog);

// Requires at least 10 points (throws ValidationError recommending the
// uniform model otherwise).
MleFit fit_mle(std::span<const Vec2> points, const Region& region, const MleOptions& options = {});
MleFit fit_mle(const Catalog& catalog, const MleOptions& options = {});

// h_k = sd_k * N^(-1/6). Throws ValidationError for fewer than 2 points or
// a zero spread along either axis.
Vec2 plugin_bandwidth(std::span<const Vec2> points);

KernelDensity fit_kde(std::span<const Vec2> points, const Region& region);
KernelDensity fit_kde(const Catalog& catalog);

// JSON model files. `points_ref` names where KDE points came from; the KDE
// "bandwidth" entry is the kernel covariance diag(h_x^2, h_y^2), row-major.
std::string density_to_json(const SpatialDensity& model, std::string_view points_ref = "");
SpatialDensity density_from_json(std::string_view json);

// `x,y,density` on an nx-by-ny grid over the region's bounding box, inside
// points only.
std::string density_grid_csv(const SpatialDensity& model, std::size_t nx, std::size_t ny);

}  // namespace eqstat
