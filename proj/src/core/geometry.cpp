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

#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace eqstat {
namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

// Signed distance from p to the supporting line of edge a->b; positive on
// the interior side of a counterclockwise polygon.
double inward_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  return cross(ab, p - a) / ab.norm();
}

Interval project(const std::vector<Vec2>& pts, const Vec2& axis) {
  Interval out{std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity()};
  for (const auto& p : pts) {
    const double d = p.dot(axis);
    out.lo = std::min(out.lo, d);
    out.hi = std::max(out.hi, d);
  }
  return out;
}

bool polygons_separated(const ConvexPolygon& a, const ConvexPolygon& b) {
  const auto& va = a.vertices();
  for (std::size_t i = 0; i < va.size(); ++i) {
    const Vec2 e = va[(i + 1) % va.size()] - va[i];
    const Vec2 axis(-e.y(), e.x());
    const Interval pa = project(va, axis);
    const Interval pb = project(b.vertices(), axis);
    if (pa.hi < pb.lo || pb.hi < pa.lo) return true;
  }
  return false;
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() >= 2 && vertices_.front() == vertices_.back()) vertices_.pop_back();
  if (vertices_.size() < 3) throw ValidationError("polygon needs at least 3 vertices");
  for (const auto& v : vertices_) {
    if (!v.allFinite()) throw ValidationError("polygon vertex is not finite");
  }
  const std::size_t n = vertices_.size();
  double twice_area = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice_area += cross(vertices_[i], vertices_[(i + 1) % n]);
  if (!(twice_area > 0.0)) {
    throw ValidationError("polygon must have positive area with counterclockwise vertices");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[(i + 1) % n];
    const Vec2& c = vertices_[(i + 2) % n];
    if (cross(b - a, c - b) < 0.0) throw ValidationError("polygon is not convex");
  }
}

ConvexPolygon ConvexPolygon::box(const Box& b) {
  return ConvexPolygon({Vec2(b.xmin, b.ymin), Vec2(b.xmax, b.ymin), Vec2(b.xmax, b.ymax),
                        Vec2(b.xmin, b.ymax)});
}

Circle make_circle(const Vec2& center, double radius) {
  if (!center.allFinite()) throw ValidationError("circle center is not finite");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError("circle radius must be positive");
  }
  return Circle{center, radius};
}

double area(const Region& r) {
  return std::visit(overloaded{
                        [](const Circle& c) { return M_PI * c.radius * c.radius; },
                        [](const ConvexPolygon& p) {
                          const auto& v = p.vertices();
                          double s = 0.0;
                          for (std::size_t i = 0; i < v.size(); ++i)
                            s += cross(v[i], v[(i + 1) % v.size()]);
                          return 0.5 * s;
                        },
                    },
                    r);
}

Box bounding_box(const Region& r) {
  return std::visit(overloaded{
                        [](const Circle& c) {
                          return Box{c.center.x() - c.radius, c.center.y() - c.radius,
                                     c.center.x() + c.radius, c.center.y() + c.radius};
                        },
                        [](const ConvexPolygon& p) {
                          Box b{std::numeric_limits<double>::infinity(),
                                std::numeric_limits<double>::infinity(),
                                -std::numeric_limits<double>::infinity(),
                                -std::numeric_limits<double>::infinity()};
                          for (const auto& v : p.vertices()) {
                            b.xmin = std::min(b.xmin, v.x());
                            b.ymin = std::min(b.ymin, v.y());
                            b.xmax = std::max(b.xmax, v.x());
                            b.ymax = std::max(b.ymax, v.y());
                          }
                          return b;
                        },
                    },
                    r);
}

bool contains(const Region& r, const Vec2& p, double tol) {
  return std::visit(overloaded{
                        [&](const Circle& c) { return (p - c.center).norm() <= c.radius + tol; },
                        [&](const ConvexPolygon& poly) {
                          const auto& v = poly.vertices();
                          for (std::size_t i = 0; i < v.size(); ++i) {
                            if (inward_distance(p, v[i], v[(i + 1) % v.size()]) < -tol)
                              return false;
                          }
                          return true;
                        },
                    },
                    r);
}

std::optional<Interval> chord(const Region& r, double x) {
  return std::visit(
      overloaded{
          [&](const Circle& c) -> std::optional<Interval> {
            const double dx = x - c.center.x();
            const double h2 = c.radius * c.radius - dx * dx;
            if (h2 < 0.0) return std::nullopt;
            const double h = std::sqrt(h2);
            return Interval{c.center.y() - h, c.center.y() + h};
          },
          [&](const ConvexPolygon& poly) -> std::optional<Interval> {
            const auto& v = poly.vertices();
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t i = 0; i < v.size(); ++i) {
              const Vec2& a = v[i];
              const Vec2& b = v[(i + 1) % v.size()];
              const double x0 = std::min(a.x(), b.x());
              const double x1 = std::max(a.x(), b.x());
              if (x < x0 || x > x1) continue;
              if (a.x() == b.x()) {
                lo = std::min({lo, a.y(), b.y()});
                hi = std::max({hi, a.y(), b.y()});
              } else {
                const double t = (x - a.x()) / (b.x() - a.x());
                const double y = a.y() + t * (b.y() - a.y());
                lo = std::min(lo, y);
                hi = std::max(hi, y);
              }
            }
            if (lo > hi) return std::nullopt;
            return Interval{lo, hi};
          },
      },
      r);
}

std::vector<double> x_breakpoints(const Region& r) {
  std::vector<double> xs = std::visit(
      overloaded{
          [](const Circle& c) {
            return std::vector<double>{c.center.x() - c.radius, c.center.x() + c.radius};
          },
          [](const ConvexPolygon& p) {
            std::vector<double> out;
            for (const auto& v : p.vertices()) out.push_back(v.x());
            return out;
          },
      },
      r);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

bool contains_region(const Region& outer, const Region& inner, double tol) {
  return std::visit(
      overloaded{
          [&](const Circle& o, const Circle& i) {
            return (o.center - i.center).norm() + i.radius <= o.radius + tol;
          },
          [&](const Circle& o, const ConvexPolygon& i) {
            for (const auto& v : i.vertices())
              if ((v - o.center).norm() > o.radius + tol) return false;
            return true;
          },
          [&](const ConvexPolygon& o, const Circle& i) {
            const auto& v = o.vertices();
            for (std::size_t k = 0; k < v.size(); ++k) {
              if (inward_distance(i.center, v[k], v[(k + 1) % v.size()]) < i.radius - tol)
                return false;
            }
            return true;
          },
          [&](const ConvexPolygon& o, const ConvexPolygon& i) {
            for (const auto& v : i.vertices())
              if (!contains(Region(o), v, tol)) return false;
            return true;
          },
      },
      outer, inner);
}

bool intersects(const Region& a, const Region& b) {
  const auto circle_polygon = [](const Circle& c, const ConvexPolygon& p) {
    if (contains(Region(p), c.center)) return true;
    const auto& v = p.vertices();
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (point_segment_distance(c.center, v[k], v[(k + 1) % v.size()]) < c.radius) return true;
    }
    return false;
  };
  return std::visit(
      overloaded{
          [](const Circle& x, const Circle& y) {
            return (x.center - y.center).norm() < x.radius + y.radius;
          },
          [&](const Circle& x, const ConvexPolygon& y) { return circle_polygon(x, y); },
          [&](const ConvexPolygon& x, const Circle& y) { return circle_polygon(y, x); },
          [](const ConvexPolygon& x, const ConvexPolygon& y) {
            return !polygons_separated(x, y) && !polygons_separated(y, x);
          },
      },
      a, b);
}

}  // namespace eqstat
