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

#include "catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"
#include "text.hpp"

namespace eqstat {
namespace {

constexpr std::string_view kEarthquakeHeader = "time,x,y,magnitude";
constexpr std::string_view kPredictionHeader =
    "issue_time,window_start,window_end,cx,cy,radius,min_magnitude";

void check_header(std::size_t line_no, std::string_view line, std::string_view expected) {
  const auto got = text::split(line);
  const auto want = text::split(expected);
  if (got != want) {
    throw ParseError(line_no, "expected header '" + std::string(expected) + "'");
  }
}

double field(std::size_t line_no, std::string_view value, std::string_view name) {
  const auto v = text::parse_double(value);
  if (!v) {
    throw ParseError(line_no, "cannot parse " + std::string(name) + " '" + std::string(value) + "'");
  }
  if (!std::isfinite(*v)) {
    throw ParseError(line_no, std::string(name) + " is not finite ('" + std::string(value) + "')");
  }
  return *v;
}

Region parse_polygon(const nlohmann::json& j, std::size_t row) {
  if (!j.is_array()) throw ParseError(0, "polygon for row " + std::to_string(row) + " is not an array");
  std::vector<Vec2> vertices;
  for (const auto& v : j) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ParseError(0, "polygon for row " + std::to_string(row) + " has a malformed vertex");
    }
    vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
  }
  try {
    return ConvexPolygon(std::move(vertices));
  } catch (const ValidationError& e) {
    throw ValidationError("polygon for row " + std::to_string(row) + ": " + e.what());
  }
}

}  // namespace

Catalog::Catalog(std::vector<EarthquakeEvent> events, double record_start, double record_end,
                 Region region)
    : events_(std::move(events)),
      record_start_(record_start),
      record_end_(record_end),
      region_(std::move(region)) {
  if (!std::isfinite(record_start_) || !std::isfinite(record_end_) || record_start_ < 0.0 ||
      record_end_ < record_start_) {
    throw ValidationError("record bounds must satisfy 0 <= start <= end");
  }
  if (!(area(region_) > 0.0)) throw ValidationError("study region must have positive area");
  std::stable_sort(events_.begin(), events_.end(),
                   [](const auto& a, const auto& b) { return a.time < b.time; });
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const auto& e = events_[i];
    if (!std::isfinite(e.time) || !std::isfinite(e.x) || !std::isfinite(e.y) ||
        !std::isfinite(e.magnitude)) {
      throw ValidationError("event " + std::to_string(i) + " has a non-finite field");
    }
    if (e.time < record_start_ || e.time > record_end_) {
      throw ValidationError("event at t=" + text::format_double(e.time) +
                            " lies outside the record");
    }
    if (!contains(region_, e.location(), 1e-9)) {
      throw ValidationError("event at t=" + text::format_double(e.time) +
                            " lies outside the study region");
    }
  }
}

std::size_t Catalog::count_at_or_above(double min_magnitude) const {
  return static_cast<std::size_t>(std::count_if(
      events_.begin(), events_.end(), [&](const auto& e) { return e.magnitude >= min_magnitude; }));
}

Box default_study_box(const std::vector<EarthquakeEvent>& events) {
  if (events.empty()) return Box{0.0, 0.0, 1.0, 1.0};
  Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
        -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& e : events) {
    b.xmin = std::min(b.xmin, e.x);
    b.ymin = std::min(b.ymin, e.y);
    b.xmax = std::max(b.xmax, e.x);
    b.ymax = std::max(b.ymax, e.y);
  }
  if (b.xmax - b.xmin <= 0.0) {
    b.xmin -= 0.5;
    b.xmax += 0.5;
  }
  if (b.ymax - b.ymin <= 0.0) {
    b.ymin -= 0.5;
    b.ymax += 0.5;
  }
  return b;
}

Catalog parse_earthquakes(std::string_view csv, const CatalogOptions& options) {
  const auto rows = text::lines(csv);
  if (rows.empty()) throw ParseError(1, "missing header");
  check_header(rows.front().first, rows.front().second, kEarthquakeHeader);

  std::vector<EarthquakeEvent> events;
  events.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto [line_no, line] = rows[r];
    const auto cols = text::split(line);
    if (cols.size() != 4) throw ParseError(line_no, "expected 4 columns");
    EarthquakeEvent e;
    e.time = field(line_no, cols[0], "time");
    e.x = field(line_no, cols[1], "x");
    e.y = field(line_no, cols[2], "y");
    e.magnitude = field(line_no, cols[3], "magnitude");
    if (e.time < options.record_start) {
      throw ParseError(line_no, "time precedes the record start");
    }
    if (options.region && !contains(*options.region, e.location(), 1e-9)) {
      throw ParseError(line_no, "location lies outside the study region");
    }
    events.push_back(e);
  }

  double record_end = options.record_start;
  for (const auto& e : events) record_end = std::max(record_end, e.time);
  if (options.record_end) {
    if (*options.record_end < record_end) {
      throw ValidationError("record end precedes the last event");
    }
    record_end = *options.record_end;
  }
  Region region = options.region ? *options.region
                                 : Region(ConvexPolygon::box(default_study_box(events)));
  return Catalog(std::move(events), options.record_start, record_end, std::move(region));
}

std::string serialize_earthquakes(const Catalog& catalog) {
  std::ostringstream out;
  out << kEarthquakeHeader << '\n';
  for (const auto& e : catalog.events()) {
    out << text::format_double(e.time) << ',' << text::format_double(e.x) << ','
        << text::format_double(e.y) << ',' << text::format_double(e.magnitude) << '\n';
  }
  return out.str();
}

std::vector<Prediction> parse_predictions(std::string_view csv,
                                          std::optional<std::string_view> polygons_json) {
  const auto rows = text::lines(csv);
  if (rows.empty()) throw ParseError(1, "missing header");
  check_header(rows.front().first, rows.front().second, kPredictionHeader);

  nlohmann::json polygons;
  if (polygons_json) {
    try {
      polygons = nlohmann::json::parse(*polygons_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(0, std::string("polygon sidecar: ") + e.what());
    }
    if (!polygons.is_array() || polygons.size() != rows.size() - 1) {
      throw ParseError(0, "polygon sidecar must be an array with one entry per prediction row");
    }
  }

  std::vector<Prediction> out;
  out.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto [line_no, line] = rows[r];
    const auto cols = text::split(line);
    if (cols.size() != 7) throw ParseError(line_no, "expected 7 columns");
    Prediction p;
    p.issue_time = field(line_no, cols[0], "issue_time");
    p.window_start = field(line_no, cols[1], "window_start");
    p.window_end = field(line_no, cols[2], "window_end");
    p.min_magnitude = field(line_no, cols[6], "min_magnitude");
    if (p.issue_time < 0.0) throw ParseError(line_no, "issue_time is negative");
    if (p.issue_time > p.window_start) throw ParseError(line_no, "issue_time > window_start");
    if (p.window_start > p.window_end) throw ParseError(line_no, "window_start > window_end");

    const bool has_polygon = polygons_json && !polygons[r - 1].is_null();
    if (has_polygon) {
      try {
        p.region = parse_polygon(polygons[r - 1], r - 1);
      } catch (const ValidationError& e) {
        throw ParseError(line_no, e.what());
      }
    } else {
      const double cx = field(line_no, cols[3], "cx");
      const double cy = field(line_no, cols[4], "cy");
      const double radius = field(line_no, cols[5], "radius");
      if (!(radius > 0.0)) throw ParseError(line_no, "radius must be positive");
      p.region = Circle{Vec2(cx, cy), radius};
    }
    out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.issue_time < b.issue_time; });
  return out;
}

void validate_predictions(const std::vector<Prediction>& predictions, const Catalog& catalog) {
  for (std::size_t j = 0; j < predictions.size(); ++j) {
    const auto& p = predictions[j];
    if (p.window_end > catalog.record_end()) {
      throw ValidationError("prediction " + std::to_string(j) +
                            " has window_end after the record end");
    }
    if (p.window_start < catalog.record_start()) {
      throw ValidationError("prediction " + std::to_string(j) +
                            " has window_start before the record start");
    }
  }
}

AftershockFilterResult filter_aftershocks(const Catalog& catalog, const AftershockPolicy& policy) {
  if (!(policy.time_window >= 0.0) || !(policy.distance_window >= 0.0) ||
      !(policy.magnitude_delta >= 0.0)) {
    throw ValidationError("aftershock policy windows must be non-negative");
  }
  const auto& events = catalog.events();
  std::vector<bool> retained(events.size(), true);
  std::vector<EarthquakeEvent> kept;
  AftershockFilterResult result{catalog, {}, {}, {}};

  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    std::optional<std::size_t> mainshock;
    // Walk back over the time window; events are sorted by time.
    for (std::size_t k = i; k-- > 0;) {
      const auto& m = events[k];
      if (e.time - m.time > policy.time_window) break;
      if (!retained[k] || !(m.time < e.time) || !(m.magnitude > e.magnitude)) continue;
      if ((m.location() - e.location()).norm() > policy.distance_window) continue;
      if (!mainshock || m.magnitude > events[*mainshock].magnitude ||
          (m.magnitude == events[*mainshock].magnitude && k < *mainshock)) {
        mainshock = k;
      }
    }
    if (mainshock) {
      retained[i] = false;
      result.excluded.push_back(e);
      result.excluded_index.push_back(i);
      result.excluded_by.push_back(*mainshock);
    } else {
      kept.push_back(e);
    }
  }
  result.retained = Catalog(std::move(kept), catalog.record_start(), catalog.record_end(),
                            catalog.region());
  return result;
}

std::string serialize_exclusions(const AftershockFilterResult& result) {
  std::ostringstream out;
  out << kEarthquakeHeader << ",excluded_by\n";
  for (std::size_t i = 0; i < result.excluded.size(); ++i) {
    const auto& e = result.excluded[i];
    out << text::format_double(e.time) << ',' << text::format_double(e.x) << ','
        << text::format_double(e.y) << ',' << text::format_double(e.magnitude) << ','
        << result.excluded_by[i] << '\n';
  }
  return out.str();
}

}  // namespace eqstat
