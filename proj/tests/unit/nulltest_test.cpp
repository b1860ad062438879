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

#include <gtest/gtest.h>

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "catalog.hpp"
#include "errors.hpp"
#include "normal.hpp"
#include "nulltest.hpp"
#include "spatial.hpp"

namespace eqstat {
namespace {

// P(X >= k) by summing over all 2^M outcomes.
std::vector<double> brute_force_pmf(const std::vector<double>& p) {
  const std::size_t m = p.size();
  std::vector<double> pmf(m + 1, 0.0);
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    double prob = 1.0;
    int k = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (1u << j)) {
        prob *= p[j];
        ++k;
      } else {
        prob *= 1.0 - p[j];
      }
    }
    pmf[k] += prob;
  }
  return pmf;
}

std::vector<double> uniform_probs(std::mt19937_64& gen, std::size_t m, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> p(m);
  for (auto& v : p) v = u(gen);
  return p;
}

Region square(double side) { return ConvexPolygon::box({0, 0, side, side}); }

Prediction circle_prediction(double start, double end, double cx, double cy, double r,
                             double min_mag = 0.0) {
  return Prediction{start, start, end, make_circle(Vec2(cx, cy), r), min_mag};
}

TEST(ChanceProbabilities, Validates) {
  EXPECT_THROW(ChanceProbabilities({}), ValidationError);
  EXPECT_THROW(ChanceProbabilities({0.2, 1.2}), ValidationError);
  EXPECT_THROW(ChanceProbabilities({-0.1}), ValidationError);
  EXPECT_THROW(ChanceProbabilities({NAN}), ValidationError);
  const ChanceProbabilities p({0.2, 0.5});
  EXPECT_DOUBLE_EQ(p.mean(), 0.7);
  EXPECT_DOUBLE_EQ(p.variance(), 0.16 + 0.25);
}

TEST(ChanceProb, FromMassExamples) {
  EXPECT_EQ(chance_prob_from_mass(1.0, 10.0, 10.0, 5), 1.0);
  EXPECT_EQ(chance_prob_from_mass(0.3, 0.0, 10.0, 5), 0.0);
  EXPECT_NEAR(chance_prob_from_mass(0.5, 1.0, 10.0, 10), 1.0 - std::pow(0.95, 10), 1e-15);
  EXPECT_NEAR(chance_prob_from_mass(0.5, 1.0, 10.0, 10), 0.40126306076162, 1e-12);
  EXPECT_THROW(chance_prob_from_mass(0.5, 11.0, 10.0, 10), ValidationError);
}

// Place 10 events uniformly in time and in a region of which the prediction
// covers half; count how often at least one lands in the window.
TEST(ChanceProb, MatchesMonteCarloPlacement) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int reps = 1000000;
  int hits = 0;
  for (int r = 0; r < reps; ++r) {
    bool hit = false;
    for (int e = 0; e < 10; ++e) {
      const double t = u(gen);
      const double x = u(gen);
      if (t < 0.1 && x < 0.5) hit = true;
    }
    hits += hit;
  }
  const double p = chance_prob_from_mass(0.5, 0.1, 1.0, 10);
  const double se = std::sqrt(p * (1 - p) / reps);
  EXPECT_NEAR(static_cast<double>(hits) / reps, p, 4.0 * se);
}

TEST(ChanceProb, FromPredictionAndDensity) {
  const Region region = square(10.0);
  const SpatialDensity uniform = ParametricDensity::uniform(region);
  std::vector<EarthquakeEvent> events;
  for (int i = 0; i < 10; ++i) events.push_back({10.0 * i, 1.0, 1.0, 5.0});
  const Catalog cat(events, 0.0, 100.0, region);
  Prediction half{0, 10, 20, ConvexPolygon::box({0, 0, 5, 10}), 4.0};
  EXPECT_NEAR(prediction_chance_prob(half, uniform, cat), 1.0 - std::pow(0.95, 10), 1e-9);
  half.window_end = half.window_start;
  EXPECT_EQ(prediction_chance_prob(half, uniform, cat), 0.0);
  Prediction whole{0, 0, 100, region, 4.0};
  EXPECT_NEAR(prediction_chance_prob(whole, uniform, cat), 1.0, 1e-12);
  whole.min_magnitude = 6.0;
  EXPECT_THROW(prediction_chance_prob(whole, uniform, cat), ValidationError);
}

TEST(CountSuccesses, Definition) {
  const Region region = square(100.0);
  const std::vector<Prediction> preds = {circle_prediction(10, 20, 50, 50, 5, 4.0)};
  EXPECT_EQ(count_successes(preds, Catalog({}, 0.0, 100.0, region)), 0u);
  EXPECT_EQ(count_successes(preds, Catalog({{15, 52, 50, 4.5}}, 0.0, 100.0, region)), 1u);
  EXPECT_EQ(count_successes(preds, Catalog({{15, 52, 50, 4.5}, {18, 50, 49, 5.0}}, 0.0, 100.0,
                                           region)),
            1u);
  // Outside in space, time, or magnitude.
  EXPECT_EQ(count_successes(preds, Catalog({{15, 60, 50, 4.5}}, 0.0, 100.0, region)), 0u);
  EXPECT_EQ(count_successes(preds, Catalog({{21, 50, 50, 4.5}}, 0.0, 100.0, region)), 0u);
  EXPECT_EQ(count_successes(preds, Catalog({{15, 50, 50, 3.9}}, 0.0, 100.0, region)), 0u);
  // Window ends are inclusive.
  EXPECT_EQ(count_successes(preds, Catalog({{20, 50, 50, 4.0}}, 0.0, 100.0, region)), 1u);
}

TEST(CltSignificance, Examples) {
  const ChanceProbabilities p4({0.5, 0.5, 0.5, 0.5});
  const auto r = clt_significance(p4, 2);
  EXPECT_DOUBLE_EQ(r.mu, 2.0);
  EXPECT_DOUBLE_EQ(r.sigma, 1.0);
  EXPECT_DOUBLE_EQ(r.z, -0.5);
  EXPECT_NEAR(r.significance, 0.69146246127401312, 1e-15);

  // N_M = mu + 1/2 is the symmetry point.
  const ChanceProbabilities odd({0.5, 0.5, 0.5});
  const auto s = clt_significance(odd, 2);
  EXPECT_DOUBLE_EQ(s.z, 0.0);
  EXPECT_DOUBLE_EQ(s.significance, 0.5);

  const ChanceProbabilities tenth(std::vector<double>(50, 0.1));
  EXPECT_NEAR(clt_significance(tenth, 10).significance, exact_poisson_binomial(tenth, 10), 0.02);

  EXPECT_THROW(clt_significance(ChanceProbabilities({0.0, 1.0}), 1), ValidationError);
}

TEST(CltSignificance, DecreasesWithSuccesses) {
  std::mt19937_64 gen(4);
  const ChanceProbabilities p(uniform_probs(gen, 40, 0.05, 0.5));
  double prev = 2.0;
  for (long n = 0; n <= 40; ++n) {
    const double s = clt_significance(p, n).significance;
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(ExactPoissonBinomial, Examples) {
  EXPECT_DOUBLE_EQ(exact_poisson_binomial(ChanceProbabilities({0.5, 0.5}), 1), 0.75);
  const auto pmf = poisson_binomial_pmf(std::vector<double>{0.2, 0.3});
  EXPECT_NEAR(pmf[0], 0.56, 1e-15);
  EXPECT_NEAR(pmf[1], 0.38, 1e-15);
  EXPECT_NEAR(pmf[2], 0.06, 1e-15);
  const ChanceProbabilities p({0.1, 0.7, 0.3});
  EXPECT_EQ(exact_poisson_binomial(p, 0), 1.0);
  EXPECT_EQ(exact_poisson_binomial(p, -3), 1.0);
  EXPECT_EQ(exact_poisson_binomial(p, 4), 0.0);
}

TEST(ExactPoissonBinomial, MatchesBruteForce) {
  std::mt19937_64 gen(8);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t m = 1 + rep % 12;
    const auto p = uniform_probs(gen, m, 0.0, 1.0);
    const auto dp = poisson_binomial_pmf(p);
    const auto bf = brute_force_pmf(p);
    for (std::size_t k = 0; k <= m; ++k) EXPECT_NEAR(dp[k], bf[k], 1e-12);
  }
}

TEST(ExactPoissonBinomial, MassSumsToOneAtScale) {
  std::mt19937_64 gen(9);
  const auto pmf = poisson_binomial_pmf(uniform_probs(gen, 10000, 0.0, 1.0));
  double s = 0.0;
  for (double v : pmf) s += v;
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_THROW(poisson_binomial_pmf(std::vector<double>(10001, 0.1)), ValidationError);
}

TEST(Enhancement, Examples) {
  const ChanceProbabilities p(std::vector<double>(10, 0.5));  // mu = 5
  EXPECT_DOUBLE_EQ(enhancement_estimate(p, 5), 1.0);
  EXPECT_DOUBLE_EQ(enhancement_estimate(p, 10), 2.0);
  EXPECT_DOUBLE_EQ(enhancement_estimate(p, 0), 0.0);
  EXPECT_THROW(enhancement_estimate(ChanceProbabilities({0.0, 0.0}), 1), ValidationError);
}

TEST(MinConsistentC, SolvesRootCondition) {
  const ChanceProbabilities p(std::vector<double>(100, 0.1));
  const auto b = min_consistent_c(p, 20, 0.05);
  ASSERT_TRUE(b.root_found);
  EXPECT_NEAR(inflated_significance(p, 20, b.c), 0.05, 1e-9);

  // Independent solve of (19.5 - 10c) / sqrt(10c(1 - 0.1c)) = z_0.95.
  const double z95 = 1.6448536269514722;
  const auto f = [&](double c) { return (19.5 - 10.0 * c) / std::sqrt(10.0 * c * (1.0 - 0.1 * c)) - z95; };
  boost::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(
      f, 0.5, 2.0, boost::math::tools::eps_tolerance<double>(50), iters);
  EXPECT_NEAR(b.c, 0.5 * (root.first + root.second), 1e-9);
  EXPECT_LT(b.c, 2.0);

  // Monte Carlo of Bernoulli(c p_j) trials: the tail is near alpha.
  std::mt19937_64 gen(17);
  std::binomial_distribution<int> x(100, b.c * 0.1);
  const int reps = 1000000;
  int hits = 0;
  for (int r = 0; r < reps; ++r) hits += x(gen) >= 20;
  EXPECT_NEAR(static_cast<double>(hits) / reps, 0.05, 0.01);
}

TEST(MinConsistentC, PropertiesOnRandomInstances) {
  std::mt19937_64 gen(21);
  int roots = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto pv = uniform_probs(gen, 60, 0.02, 0.45);
    const ChanceProbabilities p(pv);
    const long n = static_cast<long>(std::ceil(p.mean() + 1.0 + 3.0 * rep / 100.0 * std::sqrt(p.variance())));
    const auto b = min_consistent_c(p, n, 0.05);
    if (!b.root_found) continue;
    ++roots;
    EXPECT_NEAR(inflated_significance(p, n, b.c), 0.05, 1e-6);
    EXPECT_LT(b.c, enhancement_estimate(p, n));
    // Nonincreasing in alpha.
    const auto b10 = min_consistent_c(p, n, 0.10);
    const auto b01 = min_consistent_c(p, n, 0.01);
    if (b10.root_found) {
      EXPECT_GE(b10.c, b.c - 1e-12);
    }
    if (b01.root_found) {
      EXPECT_LE(b01.c, b.c + 1e-12);
    }
    // P_c increases with c where c p_j <= 1/2.
    const double top = std::min(b.upper, 0.5 / *std::max_element(pv.begin(), pv.end()));
    double prev = -1.0;
    for (int i = 1; i <= 50; ++i) {
      const double v = inflated_significance(p, n, top * i / 50.0);
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
  EXPECT_GT(roots, 80);
}

TEST(MinConsistentC, FlagsMissingRoot) {
  // Even at c = 1 / max p the observed count is out of reach.
  std::vector<double> q(30, 0.01);
  q[0] = 0.9;
  const ChanceProbabilities p(q);
  const auto b = min_consistent_c(p, 20, 0.05);
  EXPECT_FALSE(b.root_found);
  EXPECT_DOUBLE_EQ(b.c, b.upper);
  EXPECT_DOUBLE_EQ(b.upper, 1.0 / 0.9);
  EXPECT_GT(b.residual, 0.0);
  EXPECT_THROW(min_consistent_c(p, 0, 0.05), ValidationError);
  EXPECT_THROW(min_consistent_c(p, 5, 0.5), ValidationError);
}

TEST(OverlapFraction, CountsSpaceTimeOverlaps) {
  const std::vector<Prediction> preds = {circle_prediction(0, 10, 0, 0, 5),
                                         circle_prediction(5, 15, 8, 0, 5),
                                         circle_prediction(5, 15, 50, 50, 5),
                                         circle_prediction(20, 30, 0, 0, 5)};
  EXPECT_DOUBLE_EQ(overlap_fraction(preds), 0.5);
}

TEST(EvaluatePredictions, ReportIsConsistent) {
  const Region region = square(100.0);
  std::vector<EarthquakeEvent> events;
  std::mt19937_64 gen(30);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) events.push_back({1000.0 * u(gen), 100.0 * u(gen), 100.0 * u(gen), 4.0 + u(gen)});
  const Catalog cat(events, 0.0, 1000.0, region);
  std::vector<Prediction> preds;
  for (int j = 0; j < 40; ++j) {
    preds.push_back(circle_prediction(25.0 * j, 25.0 * j + 20.0, 20 + 60 * u(gen), 20 + 60 * u(gen),
                                      15.0, 4.2));
  }
  const SpatialDensity density = ParametricDensity::uniform(region);
  const auto r = evaluate_predictions(preds, density, cat, {.alpha = 0.05, .exact = true});
  EXPECT_EQ(r.n_predictions, 40u);
  EXPECT_EQ(r.n_successes, static_cast<long>(count_successes(preds, cat)));
  double mu = 0.0;
  for (std::size_t j = 0; j < preds.size(); ++j) {
    const double expect = chance_prob_from_mass(M_PI * 225.0 / 10000.0, 20.0, 1000.0,
                                                cat.count_at_or_above(4.2));
    EXPECT_NEAR(r.chance_prob[j], expect, 1e-9);
    mu += r.chance_prob[j];
  }
  EXPECT_NEAR(r.mu, mu, 1e-12);
  ASSERT_TRUE(r.exact_significance.has_value());
  EXPECT_NEAR(*r.exact_significance, r.significance, 0.05);
  ASSERT_TRUE(r.c_hat.has_value());
  EXPECT_DOUBLE_EQ(*r.c_hat, r.n_successes / r.mu);
  EXPECT_EQ(r.overlap_fraction, 0.0);

  // A filtered background lowers N_bg and therefore every p_j.
  std::vector<EarthquakeEvent> fewer(events.begin(), events.begin() + 100);
  const Catalog bg(fewer, 0.0, 1000.0, region);
  const auto rb = evaluate_predictions(preds, density, cat, {}, &bg);
  EXPECT_EQ(rb.n_successes, r.n_successes);
  EXPECT_LT(rb.mu, r.mu);

  EXPECT_THROW(evaluate_predictions({}, density, cat), ValidationError);
  try {
    evaluate_predictions({}, density, cat);
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "no predictions");
  }
}

}  // namespace
}  // namespace eqstat
