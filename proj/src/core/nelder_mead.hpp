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

// Derivative-free simplex minimizer with restarts. Infeasible points are
// expressed by returning +infinity from the objective.

#pragma once

#include <functional>
#include <vector>

namespace eqstat {

struct NelderMeadOptions {
  int max_iterations = 10000;
  // Converged when (f_worst - f_best) <= rel_tol * (|f_best| + tiny) and a
  // fresh simplex around the best point cannot improve by more than that.
  double rel_tol = 1e-9;
  int max_restarts = 20;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int restarts = 0;
  bool converged = false;
  // Best objective value after each iteration; never increases.
  std::vector<double> trace;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Throws ValidationError if x0 is infeasible, ConvergenceError (carrying the
// best iterate) if the iteration cap is reached first.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const std::vector<double>& steps,
                             const NelderMeadOptions& options = {});

}  // namespace eqstat
