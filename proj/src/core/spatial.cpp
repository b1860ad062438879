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

#include "spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include "errors.hpp"
#include "nelder_mead.hpp"
#include "text.hpp"

namespace eqstat {
namespace {

constexpr double kRegionTol = 1e-9;
// Gaussian factors beyond this many standard deviations are below 1e-31.
constexpr double kTailSigmas = 12.0;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

template <class F>
double integrate_1d(F&& f, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, 1e-12);
}

// erf(hi) - erf(lo) evaluated in the tail where it does not cancel.
double erf_diff(double lo, double hi) {
  if (lo >= 0.0) return std::erfc(lo) - std::erfc(hi);
  if (hi <= 0.0) return std::erfc(-hi) - std::erfc(-lo);
  return std::erf(hi) - std::erf(lo);
}

// Integrates section(x, chord) over the part of `sub` with x in [wlo, whi],
// splitting at the region's kinks and at `extra` cut points.
template <class Section>
double integrate_sections(const Region& sub, double wlo, double whi,
                          const std::vector<double>& extra, Section&& section) {
  const auto bps = x_breakpoints(sub);
  const double lo = std::max(bps.front(), wlo);
  const double hi = std::min(bps.back(), whi);
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts{lo, hi};
  for (double b : bps)
    if (b > lo && b < hi) cuts.push_back(b);
  for (double b : extra)
    if (b > lo && b < hi) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const auto integrand = [&](double x) {
    const auto c = chord(sub, x);
    return c ? section(x, *c) : 0.0;
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += integrate_1d(integrand, cuts[i], cuts[i + 1]);
  return total;
}

std::vector<double> sigma_cuts(double centre, double sigma) {
  std::vector<double> out;
  for (double k : {-6.0, -3.0, -1.5, 0.0, 1.5, 3.0, 6.0}) out.push_back(centre + k * sigma);
  return out;
}

void check_spd(const Mat2& q, const char* what) {
  if (!q.allFinite() || std::abs(q(0, 1) - q(1, 0)) > 1e-12 * (std::abs(q(0, 1)) + 1e-300) ||
      !(q(0, 0) > 0.0) || !(q.determinant() > 0.0)) {
    throw ValidationError(std::string(what) + " must be symmetric positive definite");
  }
}

// Integral over `sub` of exp(-(x - c)' Q (x - c)). The inner y-integral is
// done in closed form after completing the square.
double bump_integral_over(const Vec2& c, const Mat2& q, const Region& sub) {
  const double b = q(0, 1);
  const double cc = q(1, 1);
  const double k = std::sqrt(cc);
  const double schur = q.determinant() / cc;
  // Marginal standard deviation in x of the Gaussian with covariance (2Q)^-1.
  const double sigma_x = std::sqrt(cc / (2.0 * q.determinant()));
  const auto section = [&](double x, const Interval& iv) {
    const double dx = x - c.x();
    const double shift = b * dx / cc;
    const double lo = k * (iv.lo - c.y() + shift);
    const double hi = k * (iv.hi - c.y() + shift);
    return std::exp(-schur * dx * dx) * std::sqrt(M_PI) / (2.0 * k) * erf_diff(lo, hi);
  };
  return integrate_sections(sub, c.x() - kTailSigmas * sigma_x, c.x() + kTailSigmas * sigma_x,
                            sigma_cuts(c.x(), sigma_x), section);
}

// Mass of one truncated product-Gaussian kernel over `sub`.
double kernel_mass_over(const Vec2& p, const Vec2& h, const Region& sub) {
  const Box bb = bounding_box(sub);
  if (p.x() + kTailSigmas * h.x() < bb.xmin || p.x() - kTailSigmas * h.x() > bb.xmax ||
      p.y() + kTailSigmas * h.y() < bb.ymin || p.y() - kTailSigmas * h.y() > bb.ymax) {
    return 0.0;
  }
  const double inv_sqrt2_hy = 1.0 / (std::sqrt(2.0) * h.y());
  const auto section = [&](double x, const Interval& iv) {
    const double u = (x - p.x()) / h.x();
    const double phi = std::exp(-0.5 * u * u) / (std::sqrt(2.0 * M_PI) * h.x());
    return phi * 0.5 * erf_diff((iv.lo - p.y()) * inv_sqrt2_hy, (iv.hi - p.y()) * inv_sqrt2_hy);
  };
  return integrate_sections(sub, p.x() - kTailSigmas * h.x(), p.x() + kTailSigmas * h.x(),
                            sigma_cuts(p.x(), h.x()), section);
}

Vec2 sample_uniform(const Region& region, Rng& rng) {
  const Box bb = bounding_box(region);
  for (int attempt = 0; attempt < 10'000'000; ++attempt) {
    const Vec2 p(rng.uniform(bb.xmin, bb.xmax), rng.uniform(bb.ymin, bb.ymax));
    if (contains(region, p)) return p;
  }
  throw std::runtime_error("uniform sampling: rejection failed");
}

// ---- JSON ----------------------------------------------------------------

using ojson = nlohmann::ordered_json;

ojson region_to_json(const Region& r) {
  return std::visit(overloaded{
                        [](const Circle& c) {
                          ojson j;
                          j["type"] = "circle";
                          j["center"] = {c.center.x(), c.center.y()};
                          j["radius"] = c.radius;
                          return j;
                        },
                        [](const ConvexPolygon& p) {
                          ojson j;
                          j["type"] = "polygon";
                          ojson v = ojson::array();
                          for (const auto& x : p.vertices()) v.push_back({x.x(), x.y()});
                          j["vertices"] = v;
                          return j;
                        },
                    },
                    r);
}

Vec2 vec2_from_json(const ojson& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(0, std::string(what) + " must be a 2-element number array");
  return Vec2(j[0].get<double>(), j[1].get<double>());
}

double number_from_json(const ojson& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ParseError(0, std::string("missing numeric field '") + key + "'");
  return j[key].get<double>();
}

Region region_from_json(const ojson& j) {
  if (!j.is_object() || !j.contains("type")) throw ParseError(0, "region must be an object with a type");
  const auto type = j["type"].get<std::string>();
  if (type == "circle") {
    return make_circle(vec2_from_json(j.at("center"), "circle center"),
                       number_from_json(j, "radius"));
  }
  if (type == "polygon") {
    std::vector<Vec2> v;
    for (const auto& x : j.at("vertices")) v.push_back(vec2_from_json(x, "polygon vertex"));
    return ConvexPolygon(std::move(v));
  }
  throw ParseError(0, "unknown region type '" + type + "'");
}

// ---- MLE parameterization --------------------------------------------------
// theta = (cx, cy, log L00, log L11, L10, w), Q = L L', w = bump mass.

Mat2 q_from_theta(const std::vector<double>& t) {
  Mat2 l;
  l << std::exp(t[2]), 0.0, t[4], std::exp(t[3]);
  return l * l.transpose();
}

std::vector<double> theta_from(const Vec2& c, const Mat2& q, double w) {
  const Eigen::LLT<Mat2> llt(q);
  const Mat2 l = llt.matrixL();
  return {c.x(), c.y(), std::log(l(0, 0)), std::log(l(1, 1)), l(1, 0), w};
}

struct LikelihoodModel {
  std::span<const Vec2> points;
  const Region& region;
  double area;

  double negative_ll(const std::vector<double>& t) const {
    const double w = t[5];
    if (!(w >= 0.0 && w <= 1.0)) return std::numeric_limits<double>::infinity();
    for (double v : t)
      if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    const Mat2 q = q_from_theta(t);
    if (!q.allFinite() || !(q.determinant() > 0.0)) return std::numeric_limits<double>::infinity();
    const Vec2 c(t[0], t[1]);
    const double p0 = (1.0 - w) / area;
    double p1 = 0.0;
    if (w > 0.0) {
      const double iq = bump_integral_over(c, q, region);
      if (!(iq > 1e-300)) return std::numeric_limits<double>::infinity();
      p1 = w / iq;
    }
    double ll = 0.0;
    for (const auto& x : points) {
      const Vec2 d = x - c;
      const double p = p0 + p1 * std::exp(-d.dot(q * d));
      if (!(p > 0.0)) return std::numeric_limits<double>::infinity();
      ll += std::log(p);
    }
    return -ll;
  }
};

// Observed-information covariance of (cx, cy); w is held fixed when it sits
// on its bound.
Mat2 center_covariance(const LikelihoodModel& model, const std::vector<double>& t,
                       const std::vector<double>& scales) {
  const bool w_interior = t[5] > 1e-3 && t[5] < 1.0 - 1e-3;
  const int n = w_interior ? 6 : 5;
  std::vector<double> h(n);
  for (int i = 0; i < n; ++i) h[i] = 1e-3 * scales[i];
  if (w_interior) h[5] = std::min(h[5], 0.5 * std::min(t[5], 1.0 - t[5]));

  const auto f = [&](int i, double di, int j, double dj) {
    std::vector<double> x = t;
    x[i] += di;
    x[j] += dj;
    return model.negative_ll(x);
  };
  const double f0 = model.negative_ll(t);
  Eigen::MatrixXd hess(n, n);
  for (int i = 0; i < n; ++i) {
    hess(i, i) = (f(i, h[i], i, 0.0) - 2.0 * f0 + f(i, -h[i], i, 0.0)) / (h[i] * h[i]);
    for (int j = 0; j < i; ++j) {
      const double v = (f(i, h[i], j, h[j]) - f(i, h[i], j, -h[j]) - f(i, -h[i], j, h[j]) +
                        f(i, -h[i], j, -h[j])) /
                       (4.0 * h[i] * h[j]);
      hess(i, j) = hess(j, i) = v;
    }
  }
  Mat2 nan = Mat2::Constant(std::numeric_limits<double>::quiet_NaN());
  if (!hess.allFinite()) return nan;
  const Eigen::LLT<Eigen::MatrixXd> llt(hess);
  if (llt.info() != Eigen::Success) return nan;
  const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(n, n));
  return cov.topLeftCorner<2, 2>();
}

}  // namespace

// ---- ParametricDensity -----------------------------------------------------

ParametricDensity::ParametricDensity(const Vec2& center, const Mat2& q, Region region)
    : center_(center), q_(q), region_(std::move(region)) {
  if (!center_.allFinite()) throw ValidationError("density center is not finite");
  check_spd(q_, "Q");
  area_ = area(region_);
  if (!(area_ > 0.0)) throw ValidationError("density region must have positive area");
  bump_integral_ = bump_integral_over(center_, q_, region_);
}

ParametricDensity ParametricDensity::from_mass(const Vec2& center, const Mat2& q,
                                               double bump_mass, Region region) {
  if (!(bump_mass >= 0.0 && bump_mass <= 1.0)) throw ValidationError("bump mass must lie in [0, 1]");
  ParametricDensity d(center, q, std::move(region));
  if (bump_mass > 0.0 && !(d.bump_integral_ > 0.0)) {
    throw ValidationError("bump has no mass inside the region");
  }
  d.p1_ = bump_mass > 0.0 ? bump_mass / d.bump_integral_ : 0.0;
  d.p0_ = (1.0 - bump_mass) / d.area_;
  return d;
}

ParametricDensity ParametricDensity::from_amplitude(const Vec2& center, const Mat2& q, double p1,
                                                    Region region) {
  if (!(p1 >= 0.0) || !std::isfinite(p1)) throw ValidationError("p1 must be non-negative");
  ParametricDensity d(center, q, std::move(region));
  const double mass = p1 * d.bump_integral_;
  if (mass > 1.0 + 1e-12) throw ValidationError("p1 too large: normalization would need p0 < 0");
  d.p1_ = p1;
  d.p0_ = std::max(0.0, (1.0 - mass) / d.area_);
  return d;
}

ParametricDensity ParametricDensity::uniform(Region region) {
  const Box bb = bounding_box(region);
  const Vec2 centre(0.5 * (bb.xmin + bb.xmax), 0.5 * (bb.ymin + bb.ymax));
  const double extent = std::max(bb.xmax - bb.xmin, bb.ymax - bb.ymin);
  return from_mass(centre, Mat2::Identity() / (extent * extent), 0.0, std::move(region));
}

double ParametricDensity::operator()(const Vec2& x) const {
  const Vec2 d = x - center_;
  return p0_ + p1_ * std::exp(-d.dot(q_ * d));
}

// ---- KernelDensity ---------------------------------------------------------

KernelDensity::KernelDensity(std::vector<Vec2> points, const Vec2& bandwidth, Region region)
    : points_(std::move(points)), bandwidth_(bandwidth), region_(std::move(region)) {
  if (points_.empty()) throw ValidationError("kernel density needs at least one point");
  if (!(bandwidth_.x() > 0.0) || !(bandwidth_.y() > 0.0) || !bandwidth_.allFinite()) {
    throw ValidationError("bandwidth must be positive definite");
  }
  if (!(area(region_) > 0.0)) throw ValidationError("density region must have positive area");
  double mass = 0.0;
  for (const auto& p : points_) mass += kernel_mass_over(p, bandwidth_, region_);
  normalizer_ = mass / static_cast<double>(points_.size());
  if (!(normalizer_ > 0.0)) throw ValidationError("kernels carry no mass inside the region");
}

double KernelDensity::operator()(const Vec2& x) const {
  const double hx = bandwidth_.x();
  const double hy = bandwidth_.y();
  double sum = 0.0;
  for (const auto& p : points_) {
    const double u = (x.x() - p.x()) / hx;
    const double v = (x.y() - p.y()) / hy;
    sum += std::exp(-0.5 * (u * u + v * v));
  }
  return sum / (2.0 * M_PI * hx * hy * static_cast<double>(points_.size()) * normalizer_);
}

// ---- free functions --------------------------------------------------------

const Region& density_region(const SpatialDensity& model) {
  return std::visit([](const auto& m) -> const Region& { return m.region(); }, model);
}

double eval_density(const SpatialDensity& model, const Vec2& point) {
  if (!contains(density_region(model), point, kRegionTol)) {
    throw ValidationError("point lies outside the density region");
  }
  return std::visit([&](const auto& m) { return m(point); }, model);
}

double integrate_region(const SpatialDensity& model, const Region& subregion) {
  if (!contains_region(density_region(model), subregion, kRegionTol)) {
    throw ValidationError("subregion extends outside the density region");
  }
  const double s = std::visit(
      overloaded{
          [&](const ParametricDensity& m) {
            double v = m.p0() * area(subregion);
            if (m.p1() > 0.0) v += m.p1() * bump_integral_over(m.center(), m.q(), subregion);
            return v;
          },
          [&](const KernelDensity& m) {
            double mass = 0.0;
            for (const auto& p : m.points()) mass += kernel_mass_over(p, m.bandwidth(), subregion);
            return mass / (static_cast<double>(m.points().size()) * m.normalizer());
          },
      },
      model);
  return std::clamp(s, 0.0, 1.0);
}

double log_likelihood(const SpatialDensity& model, std::span<const Vec2> points) {
  double ll = 0.0;
  for (const auto& x : points) ll += std::log(eval_density(model, x));
  return ll;
}

Vec2 sample_one(const SpatialDensity& model, Rng& rng) {
  return std::visit(
      overloaded{
          [&](const ParametricDensity& m) -> Vec2 {
            if (!rng.bernoulli(m.bump_mass())) return sample_uniform(m.region(), rng);
            const Mat2 cov = (2.0 * m.q()).inverse();
            const Mat2 l = Eigen::LLT<Mat2>(cov).matrixL();
            for (int attempt = 0; attempt < 10'000'000; ++attempt) {
              const double z0 = rng.normal();
              const double z1 = rng.normal();
              const Vec2 p = m.center() + l * Vec2(z0, z1);
              if (contains(m.region(), p)) return p;
            }
            throw std::runtime_error("bump sampling: rejection failed");
          },
          [&](const KernelDensity& m) -> Vec2 {
            for (int attempt = 0; attempt < 10'000'000; ++attempt) {
              const auto& c = m.points()[rng.below(m.points().size())];
              const double z0 = rng.normal();
              const double z1 = rng.normal();
              const Vec2 p(c.x() + m.bandwidth().x() * z0, c.y() + m.bandwidth().y() * z1);
              if (contains(m.region(), p)) return p;
            }
            throw std::runtime_error("kernel sampling: rejection failed");
          },
      },
      model);
}

std::vector<Vec2> sample(const SpatialDensity& model, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec2> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_one(model, rng));
  return out;
}

std::vector<Vec2> event_locations(const Catalog& catalog) {
  std::vector<Vec2> out;
  out.reserve(catalog.size());
  for (const auto& e : catalog.events()) out.push_back(e.location());
  return out;
}

MleFit fit_mle(std::span<const Vec2> points, const Region& region, const MleOptions& options) {
  if (points.size() < 10) {
    throw ValidationError("insufficient data for the parametric fit (need >= 10 events); "
                          "use the uniform model");
  }
  for (const auto& p : points) {
    if (!contains(region, p, kRegionTol)) throw ValidationError("event lies outside the region");
  }
  const double a = area(region);
  const LikelihoodModel model{points, region, a};

  Vec2 mean = Vec2::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  Mat2 cov = Mat2::Zero();
  for (const auto& p : points) cov += (p - mean) * (p - mean).transpose();
  cov /= static_cast<double>(points.size() - 1);
  if (!(cov.determinant() > 0.0)) throw ValidationError("degenerate event locations");

  const double sd = std::sqrt(0.5 * cov.trace());
  NelderMeadOptions nm;
  nm.max_iterations = options.max_iterations;
  nm.rel_tol = options.rel_tol;

  std::optional<NelderMeadResult> best;
  std::optional<ConvergenceError> failure;
  int iterations = 0;
  // Two starts: a bump a quarter of the data covariance, and one matching it.
  for (double shrink : {0.25, 1.0}) {
    const Mat2 q0 = (2.0 * shrink * cov).inverse();
    const auto theta0 = theta_from(mean, q0, 0.5);
    const std::vector<double> steps{0.25 * sd, 0.25 * sd, 0.3, 0.3, 0.3 * std::exp(theta0[2]), 0.2};
    try {
      auto r = nelder_mead([&](const auto& t) { return model.negative_ll(t); }, theta0, steps, nm);
      iterations += r.iterations;
      if (!best || r.value < best->value) best = std::move(r);
    } catch (const ConvergenceError& e) {
      iterations += nm.max_iterations;
      if (!failure || e.best_value() < failure->best_value()) failure = e;
    }
  }
  if (!best) throw *failure;

  const auto& t = best->x;
  const double uniform_ll = -static_cast<double>(points.size()) * std::log(a);
  MleFit fit{ParametricDensity::from_mass(Vec2(t[0], t[1]), q_from_theta(t), t[5], region),
             -best->value,
             uniform_ll,
             iterations,
             best->converged,
             Mat2::Constant(std::numeric_limits<double>::quiet_NaN()),
             {}};
  if (fit.log_likelihood < uniform_ll) {
    fit.density = ParametricDensity::from_mass(fit.density.center(), fit.density.q(), 0.0, region);
    fit.log_likelihood = uniform_ll;
  } else {
    const Mat2 q = fit.density.q();
    const std::vector<double> scales{std::sqrt(0.5 / q(0, 0)), std::sqrt(0.5 / q(1, 1)), 1.0, 1.0,
                                     std::max(std::abs(t[4]), std::exp(t[2])), 1.0};
    fit.center_covariance = center_covariance(model, t, scales);
  }
  fit.trace.reserve(best->trace.size());
  for (double v : best->trace) fit.trace.push_back(-v);
  return fit;
}

MleFit fit_mle(const Catalog& catalog, const MleOptions& options) {
  const auto pts = event_locations(catalog);
  return fit_mle(pts, catalog.region(), options);
}

Vec2 plugin_bandwidth(std::span<const Vec2> points) {
  if (points.size() < 2) throw ValidationError("kernel density needs at least 2 points");
  Vec2 mean = Vec2::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  Vec2 var = Vec2::Zero();
  for (const auto& p : points) var += (p - mean).cwiseAbs2();
  var /= static_cast<double>(points.size() - 1);
  if (!(var.x() > 0.0) || !(var.y() > 0.0)) {
    throw ValidationError("degenerate data: zero spread along an axis");
  }
  const double factor = std::pow(static_cast<double>(points.size()), -1.0 / 6.0);
  return var.cwiseSqrt() * factor;
}

KernelDensity fit_kde(std::span<const Vec2> points, const Region& region) {
  const Vec2 h = plugin_bandwidth(points);
  return KernelDensity(std::vector<Vec2>(points.begin(), points.end()), h, region);
}

KernelDensity fit_kde(const Catalog& catalog) {
  const auto pts = event_locations(catalog);
  return fit_kde(pts, catalog.region());
}

std::string density_to_json(const SpatialDensity& model, std::string_view points_ref) {
  ojson j = std::visit(overloaded{
                           [](const ParametricDensity& m) {
                             ojson o;
                             o["type"] = "parametric";
                             o["x_c"] = {m.center().x(), m.center().y()};
                             o["Q"] = {m.q()(0, 0), m.q()(0, 1), m.q()(1, 0), m.q()(1, 1)};
                             o["p0"] = m.p0();
                             o["p1"] = m.p1();
                             o["region"] = region_to_json(m.region());
                             return o;
                           },
                           [&](const KernelDensity& m) {
                             ojson o;
                             o["type"] = "kde";
                             const Vec2 h2 = m.bandwidth().cwiseAbs2();
                             o["bandwidth"] = {h2.x(), 0.0, 0.0, h2.y()};
                             o["points_ref"] = std::string(points_ref);
                             ojson pts = ojson::array();
                             for (const auto& p : m.points()) pts.push_back({p.x(), p.y()});
                             o["points"] = pts;
                             o["region"] = region_to_json(m.region());
                             return o;
                           },
                       },
                       model);
  return j.dump(2) + "\n";
}

SpatialDensity density_from_json(std::string_view json) {
  ojson j;
  try {
    j = ojson::parse(json);
  } catch (const ojson::parse_error& e) {
    throw ParseError(0, std::string("density JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw ParseError(0, "density JSON needs a string 'type'");
  if (!j.contains("region")) throw ParseError(0, "density JSON needs a 'region'");
  const Region region = region_from_json(j["region"]);
  const auto type = j["type"].get<std::string>();
  if (type == "parametric") {
    const Vec2 c = vec2_from_json(j.at("x_c"), "x_c");
    const auto& qj = j.at("Q");
    if (!qj.is_array() || qj.size() != 4) throw ParseError(0, "Q must have 4 entries (row-major)");
    Mat2 q;
    q << qj[0].get<double>(), qj[1].get<double>(), qj[2].get<double>(), qj[3].get<double>();
    const double p0 = number_from_json(j, "p0");
    auto d = ParametricDensity::from_amplitude(c, q, number_from_json(j, "p1"), region);
    if (std::abs(d.p0() - p0) * d.region_area() > 1e-6) {
      throw ValidationError("density JSON: p0 inconsistent with normalization over the region");
    }
    return d;
  }
  if (type == "kde") {
    const auto& bj = j.at("bandwidth");
    if (!bj.is_array() || bj.size() != 4) throw ParseError(0, "bandwidth must have 4 entries");
    if (bj[1].get<double>() != 0.0 || bj[2].get<double>() != 0.0)
      throw ValidationError("only diagonal bandwidth matrices are supported");
    std::vector<Vec2> pts;
    for (const auto& p : j.at("points")) pts.push_back(vec2_from_json(p, "point"));
    const double hxx = bj[0].get<double>();
    const double hyy = bj[3].get<double>();
    if (!(hxx > 0.0) || !(hyy > 0.0)) throw ValidationError("bandwidth must be positive definite");
    return KernelDensity(std::move(pts), Vec2(std::sqrt(hxx), std::sqrt(hyy)), region);
  }
  throw ParseError(0, "unknown density type '" + type + "'");
}

std::string density_grid_csv(const SpatialDensity& model, std::size_t nx, std::size_t ny) {
  if (nx < 2 || ny < 2) throw ValidationError("grid needs at least 2 points per axis");
  const Region& r = density_region(model);
  const Box bb = bounding_box(r);
  std::ostringstream out;
  out << "x,y,density\n";
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = bb.xmin + (bb.xmax - bb.xmin) * static_cast<double>(i) / static_cast<double>(nx - 1);
    for (std::size_t k = 0; k < ny; ++k) {
      const double y =
          bb.ymin + (bb.ymax - bb.ymin) * static_cast<double>(k) / static_cast<double>(ny - 1);
      const Vec2 p(x, y);
      if (!contains(r, p)) continue;
      out << text::format_double17(x) << ',' << text::format_double17(y) << ','
          << text::format_double17(std::visit([&](const auto& m) { return m(p); }, model)) << '\n';
    }
  }
  return out.str();
}

}  // namespace eqstat
