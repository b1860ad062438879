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

#include "nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "errors.hpp"

namespace eqstat {
namespace {

using Point = std::vector<double>;

struct Vertex {
  Point x;
  double f;
};

Point affine(const Point& a, const Point& b, double t) {
  // a + t * (b - a)
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

bool small_spread(const std::vector<Vertex>& s, double rel_tol) {
  const double best = s.front().f;
  const double worst = s.back().f;
  return std::isfinite(worst) && worst - best <= rel_tol * (std::abs(best) + 1e-300);
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const std::vector<double>& steps,
                             const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (steps.size() != n || n == 0) throw ValidationError("nelder_mead: step size mismatch");
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  NelderMeadResult result;
  Vertex best{x0, f(x0)};
  if (!std::isfinite(best.f)) throw ValidationError("nelder_mead: infeasible starting point");

  const auto build_simplex = [&](const Vertex& centre) {
    std::vector<Vertex> s{centre};
    for (std::size_t i = 0; i < n; ++i) {
      Point x = centre.x;
      x[i] += steps[i];
      double fx = f(x);
      if (!std::isfinite(fx)) {
        x[i] = centre.x[i] - steps[i];
        fx = f(x);
      }
      s.push_back({std::move(x), fx});
    }
    return s;
  };

  std::vector<Vertex> simplex = build_simplex(best);
  double restart_from = best.f;

  while (true) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    if (simplex.front().f < best.f) best = simplex.front();

    if (small_spread(simplex, options.rel_tol)) {
      const bool stalled = restart_from - best.f <= options.rel_tol * (std::abs(best.f) + 1e-300);
      if ((stalled && result.restarts > 0) || result.restarts >= options.max_restarts) {
        result.converged = true;
        break;
      }
      ++result.restarts;
      restart_from = best.f;
      simplex = build_simplex(best);
      continue;
    }
    if (result.iterations >= options.max_iterations) {
      throw ConvergenceError("nelder_mead: iteration cap reached", best.x, best.f);
    }
    ++result.iterations;

    Point centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i].x[k] / static_cast<double>(n);

    Vertex& worst = simplex.back();
    Point xr = affine(centroid, worst.x, -kReflect);
    const double fr = f(xr);
    if (fr < simplex.front().f) {
      Point xe = affine(centroid, worst.x, -kExpand);
      const double fe = f(xe);
      worst = fe < fr ? Vertex{std::move(xe), fe} : Vertex{std::move(xr), fr};
    } else if (fr < simplex[n - 1].f) {
      worst = {std::move(xr), fr};
    } else {
      const bool outside = fr < worst.f;
      Point xc = outside ? affine(centroid, xr, kContract) : affine(centroid, worst.x, kContract);
      const double fc = f(xc);
      if (fc < std::min(fr, worst.f)) {
        worst = {std::move(xc), fc};
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          simplex[i].x = affine(simplex.front().x, simplex[i].x, kShrink);
          simplex[i].f = f(simplex[i].x);
        }
      }
    }
    const double iter_best =
        std::min_element(simplex.begin(), simplex.end(),
                         [](const Vertex& a, const Vertex& b) { return a.f < b.f; })
            ->f;
    result.trace.push_back(std::min(iter_best, best.f));
  }

  result.x = best.x;
  result.value = best.f;
  return result;
}

}  // namespace eqstat
