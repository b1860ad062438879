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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "mc.hpp"
#include "nulltest.hpp"
#include "precursor.hpp"
#include "spatial.hpp"

namespace {

using namespace eqstat;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Straightforward O(M^2) convolution for P(X >= k).
double oracle_tail(const std::vector<double>& p, long k) {
  std::vector<double> f{1.0};
  for (double q : p) {
    std::vector<double> g(f.size() + 1, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      g[i] += f[i] * (1.0 - q);
      g[i + 1] += f[i] * q;
    }
    f.swap(g);
  }
  double s = 0.0;
  for (std::size_t i = std::max<long>(k, 0); i < f.size(); ++i) s += f[i];
  return std::min(1.0, s);
}

Outcome criterion_clt_vs_exact() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> up(0.05, 0.4);
  std::uniform_real_distribution<double> shift(-2.0, 2.0);
  double worst = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    std::vector<double> p(50);
    for (auto& v : p) v = up(rng);
    const ChanceProbabilities probs(p);
    const long n = std::lround(probs.mean() + shift(rng) * std::sqrt(probs.variance()));
    const double clt = clt_significance(probs, n).significance;
    worst = std::max(worst, std::abs(clt - oracle_tail(p, n)));
  }
  const double t = seconds_since(start);
  return {worst <= 0.02 && t < 5.0, fmt("max |clt - exact| = %.4g (tol 0.02), %.2f s (limit 5)", worst, t)};
}

Outcome criterion_dp_vs_enumeration() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    const int m = 1 + inst % 12;
    std::vector<double> p(m);
    for (auto& v : p) v = u(rng);
    std::vector<double> brute(m + 1, 0.0);
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      double w = 1.0;
      for (int j = 0; j < m; ++j) w *= (mask >> j & 1u) ? p[j] : 1.0 - p[j];
      brute[__builtin_popcount(mask)] += w;
    }
    const auto pmf = poisson_binomial_pmf(p);
    for (int k = 0; k <= m; ++k) worst = std::max(worst, std::abs(pmf[k] - brute[k]));
  }
  return {worst <= 1e-12, fmt("max |dp - enumeration| = %.3g (tol 1e-12) over 200 instances", worst)};
}

Region square(double side) { return ConvexPolygon::box({0, 0, side, side}); }

// Non-overlapping windows, one per slot, with circles at staggered centres.
std::vector<Prediction> slot_predictions(std::size_t m, double span, double side, double fill,
                                         double r_min, double r_max, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Prediction> out;
  const double slot = span / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double r = r_min + (r_max - r_min) * u(rng);
    const double cx = r + (side - 2 * r) * u(rng);
    const double cy = r + (side - 2 * r) * u(rng);
    const double t0 = slot * static_cast<double>(j);
    out.push_back({t0, t0, t0 + fill * slot, make_circle(Vec2(cx, cy), r), 0.0});
  }
  return out;
}

NullModel uniform_null(std::size_t n, double span, double side, std::uint64_t seed) {
  return NullModel{.n_events = n,
                   .span = span,
                   .spatial = ParametricDensity::uniform(square(side)),
                   .clustering = std::nullopt,
                   .seed = seed};
}

Outcome criterion_null_calibration() {
  const auto start = Clock::now();
  // 800 predictions with chance probabilities of 0.2 to 0.4. The catalog is
  // large against the predicted space-time volume, so successes are close to
  // independent as the exact law assumes.
  const auto preds = slot_predictions(800, 800.0, 100.0, 1.0, 12.0, 18.0, 303);
  const auto sim = empirical_significance(uniform_null(5000, 800.0, 100.0, 304), preds, 10000);
  const double t = seconds_since(start);
  const double ks = sim.summary.ks_uniform.value_or(1.0);
  const double mean = sim.summary.mean;
  return {ks <= 0.05 && mean >= 0.48 && mean <= 0.52 && t < 60.0,
          fmt("KS = %.4f (tol 0.05), mean = %.4f (range [0.48, 0.52]), %.1f s (limit 60)", ks, mean,
              t)};
}

Outcome criterion_postcursor_contamination() {
  const double span = 3650.0;
  const double side = 300.0;
  auto model = uniform_null(2000, span, side, 405);
  model.clustering = ClusteringParams{0.3, 1.0, 5.0};
  // Ten-day windows and 30 km circles in both sets.
  const auto small = slot_predictions(50, span, side, 10.0 * 50.0 / span, 30.0, 30.0, 406);
  const auto large = slot_predictions(200, span, side, 10.0 * 200.0 / span, 30.0, 30.0, 406);
  const double m50 = empirical_significance(model, small, 1000).summary.mean;
  const double m200 = empirical_significance(model, large, 1000).summary.mean;
  return {m200 > m50,
          fmt("mean significance M=200: %.4f > M=50: %.4f (30%% postcursors, 1000 replicates)",
              m200, m50)};
}

// Independent quadrature of the delay law: density (N-1)/T (1-u/T)^(N-2) on
// [0, T-t) plus an atom (t/T)^(N-1) at T-t.
std::array<double, 2> quadrature_moments(double t, long n, double span) {
  using boost::math::quadrature::gauss_kronrod;
  const double b = span - t;
  const double atom = std::pow(t / span, static_cast<double>(n - 1));
  auto dens = [&](double u) {
    return (n - 1) / span * std::pow(1.0 - u / span, static_cast<double>(n - 2));
  };
  double m1 = atom * b, m2 = atom * b * b;
  if (b > 0.0) {
    m1 += gauss_kronrod<double, 61>::integrate([&](double u) { return u * dens(u); }, 0.0, b, 15,
                                               1e-14);
    m2 += gauss_kronrod<double, 61>::integrate([&](double u) { return u * u * dens(u); }, 0.0, b,
                                               15, 1e-14);
  }
  return {m1, m2 - m1 * m1};
}

Outcome criterion_tau_moments() {
  const double span = 3.0;
  double worst_rel = 0.0;
  double worst_se = 0.0;
  bool ok = true;
  for (long n : {2L, 5L, 20L, 100L}) {
    for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double t = a * span;
      const auto q = quadrature_moments(t, n, span);
      const double mean = tau_mean(t, n, span);
      const double var = tau_var(t, n, span);
      const auto rel = [](double x, double ref) {
        return ref == 0.0 ? std::abs(x) : std::abs(x - ref) / std::abs(ref);
      };
      worst_rel = std::max({worst_rel, rel(mean, q[0]), rel(var, q[1])});
      const auto mc = empirical_tau_moments(t, n, span, 1000000, 500 + n * 10 + std::lround(a * 4));
      const auto se_dist = [](double x, double ref, double se) {
        if (se == 0.0) return x == ref ? 0.0 : INFINITY;
        return std::abs(x - ref) / se;
      };
      worst_se = std::max({worst_se, se_dist(mc.mean, mean, mc.mean_std_error),
                           se_dist(mc.variance, var, mc.variance_std_error)});
    }
  }
  ok = worst_rel <= 1e-8 && worst_se <= 4.0;
  const bool end_exact = tau_mean(span, 7, span) == 0.0;
  const double v0 = tau_var(0.0, 7, span);
  const double v0_ref = span * span * 6.0 / (49.0 * 8.0);
  const bool start_exact = std::abs(v0 - v0_ref) <= 4 * std::numeric_limits<double>::epsilon() * v0_ref;
  return {ok && end_exact && start_exact,
          fmt("max rel vs quadrature = %.3g (tol 1e-8), max MC deviation = %.2f s.e. (tol 4), "
              "tau_mean(T)=0: %s, tau_var(0) identity: %s",
              worst_rel, worst_se, end_exact ? "yes" : "no", start_exact ? "yes" : "no")};
}

Outcome criterion_precursor_calibration() {
  PrecursorSimOptions null;
  null.m = 50;
  null.n = 100;
  null.span = 1.0;
  null.replicates = 10000;
  null.seed = 606;
  const auto a = empirical_precursor(null);
  const bool calib = std::abs(a.summary.mean) <= 0.05 && a.summary.variance >= 0.9 &&
                     a.summary.variance <= 1.1;

  auto shared = null;
  shared.mode = DelayNull::shared_catalog;
  const auto s = empirical_precursor(shared);

  PrecursorSimOptions ses;
  ses.m = 100;
  ses.n = 100;
  ses.span = 1.0;
  ses.replicates = 1000;
  ses.seed = 607;
  ses.mode = DelayNull::shared_catalog;
  ses.suppression_window = ses.span / static_cast<double>(ses.n);
  const auto e = empirical_precursor(ses);
  const bool trips = e.precursor_rate >= 0.95;
  return {calib && trips,
          fmt("null z mean = %.4f, var = %.4f (independent delays); shared-catalog var = %.4f "
              "(informational); suppression scenario flag rate = %.3f (need >= 0.95)",
              a.summary.mean, a.summary.variance, s.summary.variance, e.precursor_rate)};
}

Outcome criterion_c_min() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> up(0.02, 0.45);
  std::uniform_int_distribution<int> msize(20, 200);
  const boost::math::normal_distribution<double> std_normal;
  double worst = 0.0;
  int roots = 0;
  int ordered = 0;
  for (int inst = 0; inst < 100; ++inst) {
    std::vector<double> p(msize(rng));
    for (auto& v : p) v = up(rng);
    const ChanceProbabilities probs(p);
    const double mu = probs.mean();
    const double sigma = std::sqrt(probs.variance());
    // Observed counts 2 to 4 sigma above chance.
    const long n = std::lround(mu + (2.0 + 0.5 * (inst % 5)) * sigma);
    const auto b = min_consistent_c(probs, n, 0.05);
    if (!b.root_found) continue;
    ++roots;
    double s2 = 0.0;
    for (double q : p) s2 += b.c * q * (1.0 - b.c * q);
    const double pc = boost::math::cdf(boost::math::complement(
        std_normal, (static_cast<double>(n) - b.c * mu - 0.5) / std::sqrt(s2)));
    worst = std::max(worst, std::abs(pc - 0.05));
    if (b.c < static_cast<double>(n) / mu) ++ordered;
  }
  return {roots == 100 && worst <= 1e-6 && ordered == roots,
          fmt("roots found %d/100, max |P_c - alpha| = %.3g (tol 1e-6), c_min < c_hat in %d/%d", roots,
              worst, ordered, roots)};
}

Outcome criterion_mle_recovery() {
  const Region box = square(200.0);
  Mat2 q;
  q << 1.0 / (2 * 15.0 * 15.0), 0.0005, 0.0005, 1.0 / (2 * 25.0 * 25.0);
  const Vec2 truth(90.0, 110.0);
  const auto model = ParametricDensity::from_mass(truth, q, 0.7, box);
  int within = 0;
  int ll_ok = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto pts = sample(model, 2000, seed);
    const auto fit = fit_mle(pts, box);
    if (fit.log_likelihood >= fit.uniform_log_likelihood) ++ll_ok;
    const double tr = fit.center_covariance.trace();
    const double d2 = (fit.density.center() - truth).squaredNorm();
    if (std::isfinite(tr) && d2 <= 4.0 * tr) ++within;
  }
  return {within >= 45 && ll_ok == 50,
          fmt("centre within 2 s.e. (2DRMS) for %d/50 seeds (need 45), LL >= uniform for %d/50",
              within, ll_ok)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion_reproducibility() {
  const fs::path base = fs::temp_directory_path() / "eqstat_acceptance_repro";
  fs::remove_all(base);
  const std::string cli = EQSTAT_CLI_PATH;
  const std::string fx = EQSTAT_FIXTURE_DIR;
  const std::vector<std::string> runs = {
      "simulate --mode significance --earthquakes " + fx + "/earthquakes.csv --predictions " + fx +
          "/predictions.csv --replicates 200 --seed 11 --clustering 0.2",
      "simulate --mode precursor --replicates 2000 --seed 12 --shared-catalog",
      "significance --exact --earthquakes " + fx + "/earthquakes.csv --predictions " + fx +
          "/predictions.csv",
      "fit-density --model kde --earthquakes " + fx + "/earthquakes.csv --grid 20",
  };
  int identical = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::vector<std::string> captured;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = base / (std::to_string(i) + "_" + std::to_string(rep));
      fs::create_directories(dir);
      if (run(cli + " " + runs[i] + " --out " + dir.string() + " > /dev/null 2>&1") != 0) break;
      std::string all;
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) all += f.filename().string() + "\n" + slurp(f);
      captured.push_back(all);
    }
    if (captured.size() == 2 && !captured[0].empty() && captured[0] == captured[1]) ++identical;
  }
  fs::remove_all(base);
  return {identical == static_cast<int>(runs.size()),
          fmt("%d/%zu seeded CLI runs byte-identical across two executions", identical,
              runs.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"clt vs exact tail", criterion_clt_vs_exact},
      {"dp vs enumeration", criterion_dp_vs_enumeration},
      {"null calibration", criterion_null_calibration},
      {"postcursor contamination", criterion_postcursor_contamination},
      {"delay moments", criterion_tau_moments},
      {"precursor calibration", criterion_precursor_calibration},
      {"c_min root", criterion_c_min},
      {"mle recovery", criterion_mle_recovery},
      {"reproducibility", criterion_reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
