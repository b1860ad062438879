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

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>

#include "normal.hpp"

namespace eqstat {
namespace {

TEST(Normal, PinnedValues) {
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-16);
  EXPECT_NEAR(normal_cdf(-0.5), 0.30853753872598688, 1e-15);
  EXPECT_NEAR(normal_cdf(1.96), 0.97500210485177952, 1e-15);
  EXPECT_NEAR(1.0 - normal_cdf(-0.5), 0.69146246127401312, 1e-15);
  EXPECT_NEAR(normal_quantile(0.95), 1.6448536269514722, 1e-13);
  EXPECT_NEAR(normal_quantile(0.975), 1.9599639845400540, 1e-13);
  EXPECT_NEAR(normal_sf(10.0) / 7.6198530241605260e-24, 1.0, 1e-12);
}

TEST(Normal, MatchesBoostOracle) {
  const boost::math::normal_distribution<double> n01;
  for (double z = -37.0; z <= 8.5; z += 0.01) {
    const double ref = boost::math::cdf(n01, z);
    EXPECT_NEAR(normal_cdf(z), ref, 1e-12 * std::max(ref, 1e-300) + 1e-300) << z;
    const double sref = boost::math::cdf(boost::math::complement(n01, z));
    EXPECT_NEAR(normal_sf(z), sref, 1e-12 * sref + 1e-300) << z;
  }
}

TEST(Normal, QuantileInvertsCdf) {
  const boost::math::normal_distribution<double> n01;
  for (double p : {1e-300, 1e-100, 1e-20, 1e-8, 1e-3, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.9, 0.97575,
                   0.999, 1.0 - 1e-8, 1.0 - 1e-15}) {
    const double ref = boost::math::quantile(n01, p);
    EXPECT_NEAR(normal_quantile(p), ref, 1e-12 * std::max(1.0, std::abs(ref))) << p;
  }
  EXPECT_EQ(normal_quantile(0.0), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(normal_quantile(1.0), std::numeric_limits<double>::infinity());
  EXPECT_TRUE(std::isnan(normal_quantile(-0.1)));
  EXPECT_TRUE(std::isnan(normal_quantile(1.5)));
}

}  // namespace
}  // namespace eqstat
