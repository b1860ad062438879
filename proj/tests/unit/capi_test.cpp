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

#include <cmath>
#include <string>
#include <vector>

#include "eqstat/eqstat.h"

namespace {

const std::string kCatalog =
    "time,x,y,magnitude\n"
    "0.5,1,1,4.2\n"
    "1.0,9,9,5.1\n"
    "1.2,9.5,9,4.0\n"
    "3.0,5,5,4.4\n"
    "8.0,2,7,4.8\n";

eqs_region square(double side, std::vector<double>& storage) {
  storage = {0, 0, side, 0, side, side, 0, side};
  eqs_region r{};
  r.kind = EQS_REGION_POLYGON;
  r.vertices = storage.data();
  r.n_vertices = 4;
  return r;
}

TEST(CApi, VersionAndLastError) {
  EXPECT_STRNE(eqs_version(), "");
  eqs_catalog* cat = nullptr;
  const std::string bad = "time,x,y,magnitude\n1,2,nan,4\n";
  EXPECT_EQ(eqs_catalog_parse(bad.data(), bad.size(), nullptr, &cat), EQS_ERR_PARSE);
  EXPECT_EQ(cat, nullptr);
  EXPECT_NE(std::string(eqs_last_error()).find("line 2"), std::string::npos);
}

TEST(CApi, NullArgumentsAreRejected) {
  EXPECT_EQ(eqs_catalog_parse(nullptr, 0, nullptr, nullptr), EQS_ERR_INVALID_ARGUMENT);
  double out = 0;
  EXPECT_EQ(eqs_tau_mean(0, 5, 1, nullptr), EQS_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(eqs_tau_mean(0, 1, 1, &out), EQS_ERR_INVALID_ARGUMENT);
  eqs_catalog_free(nullptr);
  eqs_buffer_free(nullptr);
}

TEST(CApi, CatalogRoundTrip) {
  std::vector<double> v;
  const eqs_region r = square(10, v);
  eqs_catalog_options opts{&r, 0.0, 1, 10.0};
  eqs_catalog* cat = nullptr;
  ASSERT_EQ(eqs_catalog_parse(kCatalog.data(), kCatalog.size(), &opts, &cat), EQS_OK)
      << eqs_last_error();
  EXPECT_EQ(eqs_catalog_size(cat), 5u);
  eqs_event e{};
  ASSERT_EQ(eqs_catalog_event(cat, 1, &e), EQS_OK);
  EXPECT_DOUBLE_EQ(e.magnitude, 5.1);
  EXPECT_EQ(eqs_catalog_event(cat, 5, &e), EQS_ERR_INVALID_ARGUMENT);
  double start = -1, end = -1;
  ASSERT_EQ(eqs_catalog_record(cat, &start, &end), EQS_OK);
  EXPECT_EQ(start, 0.0);
  EXPECT_EQ(end, 10.0);

  eqs_buffer* csv = nullptr;
  ASSERT_EQ(eqs_catalog_to_csv(cat, &csv), EQS_OK);
  eqs_catalog* again = nullptr;
  ASSERT_EQ(eqs_catalog_parse(eqs_buffer_data(csv), eqs_buffer_size(csv), &opts, &again), EQS_OK);
  ASSERT_EQ(eqs_catalog_size(again), 5u);
  for (size_t i = 0; i < 5; ++i) {
    eqs_event a{}, b{};
    eqs_catalog_event(cat, i, &a);
    eqs_catalog_event(again, i, &b);
    EXPECT_EQ(a.time, b.time);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.magnitude, b.magnitude);
  }
  eqs_buffer_free(csv);
  eqs_catalog_free(again);

  eqs_aftershock_policy policy{1.0, 2.0, 0.0};
  eqs_catalog* kept = nullptr;
  eqs_buffer* audit = nullptr;
  size_t n_excluded = 0;
  ASSERT_EQ(eqs_filter_aftershocks(cat, &policy, &kept, &audit, &n_excluded), EQS_OK);
  EXPECT_EQ(n_excluded, 1u);
  EXPECT_EQ(eqs_catalog_size(kept), 4u);
  EXPECT_NE(std::string(eqs_buffer_data(audit), eqs_buffer_size(audit)).find("excluded_by"),
            std::string::npos);
  eqs_buffer_free(audit);
  eqs_catalog_free(kept);
  eqs_catalog_free(cat);
}

TEST(CApi, SignificanceMatchesHandComputation) {
  const double p[] = {0.1, 0.2, 0.3, 0.4};
  double mu, sigma, z, s;
  ASSERT_EQ(eqs_clt_significance(p, 4, 2, &mu, &sigma, &z, &s), EQS_OK);
  EXPECT_NEAR(mu, 1.0, 1e-15);
  EXPECT_NEAR(sigma, std::sqrt(0.7), 1e-15);
  double tail = 0;
  ASSERT_EQ(eqs_exact_tail(p, 4, 0, &tail), EQS_OK);
  EXPECT_NEAR(tail, 1.0, 1e-15);
  ASSERT_EQ(eqs_exact_tail(p, 4, 4, &tail), EQS_OK);
  EXPECT_NEAR(tail, 0.1 * 0.2 * 0.3 * 0.4, 1e-15);
  double c = 0;
  ASSERT_EQ(eqs_enhancement(p, 4, 2, &c), EQS_OK);
  EXPECT_NEAR(c, 2.0, 1e-15);
  eqs_inflation inf{};
  ASSERT_EQ(eqs_min_consistent_c(p, 4, 3, 0.05, &inf), EQS_OK);
  EXPECT_TRUE(inf.root_found);
  EXPECT_EQ(eqs_min_consistent_c(p, 4, 3, 0.7, &inf), EQS_ERR_INVALID_ARGUMENT);
  const double badp[] = {0.5, 1.5};
  EXPECT_EQ(eqs_exact_tail(badp, 2, 1, &tail), EQS_ERR_INVALID_ARGUMENT);
}

TEST(CApi, DensityLifecycle) {
  std::vector<double> v;
  const eqs_region r = square(10, v);
  eqs_density* d = nullptr;
  ASSERT_EQ(eqs_density_uniform(&r, &d), EQS_OK);
  double val = 0;
  ASSERT_EQ(eqs_density_eval(d, 5, 5, &val), EQS_OK);
  EXPECT_NEAR(val, 0.01, 1e-15);
  eqs_region c{};
  c.kind = EQS_REGION_CIRCLE;
  c.cx = 5;
  c.cy = 5;
  c.radius = 2;
  ASSERT_EQ(eqs_density_integrate(d, &c, &val), EQS_OK);
  EXPECT_NEAR(val, M_PI * 4 / 100, 1e-9);

  eqs_buffer* json = nullptr;
  ASSERT_EQ(eqs_density_to_json(d, nullptr, &json), EQS_OK);
  eqs_density* back = nullptr;
  ASSERT_EQ(eqs_density_from_json(eqs_buffer_data(json), eqs_buffer_size(json), &back), EQS_OK)
      << eqs_last_error();
  ASSERT_EQ(eqs_density_eval(back, 1, 1, &val), EQS_OK);
  EXPECT_NEAR(val, 0.01, 1e-15);
  eqs_buffer_free(json);
  eqs_density_free(back);

  std::vector<double> xy(200);
  ASSERT_EQ(eqs_density_sample(d, 100, 7, xy.data()), EQS_OK);
  for (double a : xy) {
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 10.0);
  }
  const std::string bad = "{\"kind\":\"unknown\"}";
  EXPECT_NE(eqs_density_from_json(bad.data(), bad.size(), &back), EQS_OK);
  const double q[] = {1.0, 0.0, 0.0, -1.0};
  EXPECT_EQ(eqs_density_parametric(5, 5, q, 0.01, &r, &back), EQS_ERR_INVALID_ARGUMENT);
  eqs_density_free(d);
}

TEST(CApi, EndToEndSignificanceAndPrecursor) {
  std::vector<double> v;
  const eqs_region r = square(10, v);
  eqs_catalog_options opts{&r, 0.0, 0, 0.0};
  eqs_catalog* cat = nullptr;
  ASSERT_EQ(eqs_catalog_parse(kCatalog.data(), kCatalog.size(), &opts, &cat), EQS_OK);
  const std::string pcsv =
      "issue_time,window_start,window_end,cx,cy,radius,min_magnitude\n"
      "0,0,2,9,9,1,4.5\n"
      "2,2.5,4,1,1,1,4.0\n";
  eqs_predictions* preds = nullptr;
  ASSERT_EQ(eqs_predictions_parse(pcsv.data(), pcsv.size(), nullptr, 0, &preds), EQS_OK)
      << eqs_last_error();
  ASSERT_EQ(eqs_predictions_size(preds), 2u);
  eqs_density* d = nullptr;
  ASSERT_EQ(eqs_density_uniform(&r, &d), EQS_OK);
  eqs_significance_options so{0.05, 1};
  eqs_significance_report rep{};
  eqs_prediction_row rows[2];
  ASSERT_EQ(eqs_significance(cat, nullptr, preds, d, &so, &rep, rows), EQS_OK) << eqs_last_error();
  EXPECT_EQ(rep.n_successes, 1);
  EXPECT_EQ(rows[0].success, 1);
  EXPECT_EQ(rows[1].success, 0);
  EXPECT_TRUE(rep.has_exact);
  EXPECT_NEAR(rows[0].region_mass, M_PI / 100, 1e-9);

  eqs_precursor_options po{-2.5, 2.5};
  eqs_precursor_report pr{};
  eqs_delay_row drows[2];
  ASSERT_EQ(eqs_precursor(cat, preds, &po, &pr, drows), EQS_OK) << eqs_last_error();
  EXPECT_EQ(pr.m, 2u);
  EXPECT_EQ(pr.n, 5);
  EXPECT_DOUBLE_EQ(drows[0].tau_hat, 0.5);

  eqs_predictions_free(preds);
  eqs_density_free(d);
  eqs_catalog_free(cat);
}

TEST(CApi, MonteCarloEntryPoints) {
  std::vector<double> v;
  const eqs_region r = square(100, v);
  eqs_density* d = nullptr;
  ASSERT_EQ(eqs_density_uniform(&r, &d), EQS_OK);
  eqs_null_model model{200, 100.0, 0.0, 4.0, 1.0, 0.0, 1.0, 5.0, 42};
  eqs_catalog* sim = nullptr;
  ASSERT_EQ(eqs_simulate_catalog(&model, d, &sim), EQS_OK) << eqs_last_error();
  EXPECT_EQ(eqs_catalog_size(sim), 200u);
  eqs_catalog_free(sim);

  const std::string pcsv =
      "issue_time,window_start,window_end,cx,cy,radius,min_magnitude\n"
      "0,0,20,50,50,10,4\n"
      "20,20,40,30,30,10,4\n";
  eqs_predictions* preds = nullptr;
  ASSERT_EQ(eqs_predictions_parse(pcsv.data(), pcsv.size(), nullptr, 0, &preds), EQS_OK);
  eqs_sim_summary s{};
  std::vector<long> k(50);
  ASSERT_EQ(eqs_empirical_significance(&model, d, preds, 50, &s, k.data(), nullptr), EQS_OK);
  EXPECT_EQ(s.replicates, 50u);
  EXPECT_FALSE(s.has_ks);
  for (long x : k) EXPECT_LE(x, 2);

  eqs_precursor_sim_options po{20, 50, 1.0, 200, 3, 0, 0.0, -2.5, 2.5};
  double pre = 0, post = 0;
  ASSERT_EQ(eqs_empirical_precursor(&po, &s, &pre, &post, nullptr), EQS_OK);
  EXPECT_EQ(s.replicates, 200u);
  EXPECT_TRUE(s.has_ks == 0 || s.has_ks == 1);

  double m[4];
  ASSERT_EQ(eqs_empirical_tau_moments(0.0, 2, 1.0, 10000, 1, m), EQS_OK);
  EXPECT_NEAR(m[0], 0.5, 4 * m[2]);
  EXPECT_EQ(eqs_empirical_tau_moments(0.0, 2, 1.0, 10, 1, m), EQS_ERR_INVALID_ARGUMENT);

  eqs_predictions_free(preds);
  eqs_density_free(d);
}

}  // namespace
