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

// Planar regions (km, pre-projected coordinates). Every region is convex, so
// a vertical line cuts it in at most one interval; integration over a region
// is done as an outer integral in x over these chords.

#pragma once

#include <Eigen/Core>

#include <optional>
#include <variant>
#include <vector>

namespace eqstat {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

struct Box {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;
};

struct Circle {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};

class ConvexPolygon {
 public:
  // Vertices in counterclockwise order, closed implicitly (a repeated first
  // vertex at the end is dropped). Throws ValidationError unless the polygon
  // is convex, counterclockwise and of positive area.
  explicit ConvexPolygon(std::vector<Vec2> vertices);

  static ConvexPolygon box(const Box& b);

  const std::vector<Vec2>& vertices() const { return vertices_; }

 private:
  std::vector<Vec2> vertices_;
};

using Region = std::variant<Circle, ConvexPolygon>;

// Throws ValidationError for a non-positive or non-finite radius.
Circle make_circle(const Vec2& center, double radius);

double area(const Region& r);
Box bounding_box(const Region& r);

// Boundary points count as inside; `tol` widens the region by that distance.
bool contains(const Region& r, const Vec2& p, double tol = 0.0);

// Vertical section {y : (x, y) in r}, or nullopt when x misses the region.
std::optional<Interval> chord(const Region& r, double x);

// Sorted x-coordinates where the chord endpoints are not smooth (polygon
// vertices, circle extremes). First and last entries span the region.
std::vector<double> x_breakpoints(const Region& r);

bool contains_region(const Region& outer, const Region& inner, double tol = 1e-9);
bool intersects(const Region& a, const Region& b);

}  // namespace eqstat
