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

#pragma once

namespace eqstat {

// Standard normal CDF.
double normal_cdf(double z);

// 1 - normal_cdf(z), without cancellation for large z.
double normal_sf(double z);

// Inverse of normal_cdf on (0, 1); +-infinity at the endpoints, NaN outside.
double normal_quantile(double p);

}  // namespace eqstat
