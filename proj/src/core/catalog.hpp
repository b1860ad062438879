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

// Earthquake and prediction catalogs.
//
// Times are real-valued days since the record start; locations are planar km.
// Catalogs are immutable once constructed.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geometry.hpp"

namespace eqstat {

struct EarthquakeEvent {
  double time = 0.0;
  double x = 0.0;
  double y = 0.0;
  double magnitude = 0.0;

  Vec2 location() const { return Vec2(x, y); }
};

struct Prediction {
  double issue_time = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  Region region = Circle{};
  double min_magnitude = 0.0;

  double duration() const { return window_end - window_start; }
};

class Catalog {
 public:
  // Sorts events by time (stable, so equal timestamps keep input order) and
  // validates every invariant. Throws ValidationError.
  Catalog(std::vector<EarthquakeEvent> events, double record_start, double record_end,
          Region region);

  const std::vector<EarthquakeEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const EarthquakeEvent& operator[](std::size_t i) const { return events_[i]; }

  double record_start() const { return record_start_; }
  double record_end() const { return record_end_; }
  double span() const { return record_end_ - record_start_; }
  const Region& region() const { return region_; }

  // Number of events with magnitude >= `min_magnitude`.
  std::size_t count_at_or_above(double min_magnitude) const;

 private:
  std::vector<EarthquakeEvent> events_;
  double record_start_;
  double record_end_;
  Region region_;
};

struct CatalogOptions {
  // Study region; defaults to the bounding box of the events.
  std::optional<Region> region;
  double record_start = 0.0;
  // Defaults to the last event time.
  std::optional<double> record_end;
};

// CSV with mandatory header `time,x,y,magnitude`.
Catalog parse_earthquakes(std::string_view csv, const CatalogOptions& options = {});
std::string serialize_earthquakes(const Catalog& catalog);

// CSV with header `issue_time,window_start,window_end,cx,cy,radius,min_magnitude`.
// `polygons_json`, when given, is a JSON array with one entry per data row:
// null keeps the row's circle, an array of [x, y] pairs (counterclockwise)
// replaces it, in which case cx/cy/radius may be left empty.
// The result is stably sorted by issue time.
std::vector<Prediction> parse_predictions(std::string_view csv,
                                          std::optional<std::string_view> polygons_json = {});

// Checks predictions against the catalog record (window_end <= record end).
void validate_predictions(const std::vector<Prediction>& predictions, const Catalog& catalog);

// Default study region: the bounding box of the events, padded to keep a
// positive area when all events share a coordinate; unit box when empty.
Box default_study_box(const std::vector<EarthquakeEvent>& events);

struct AftershockPolicy {
  double time_window = 30.0;      // days
  double distance_window = 50.0;  // km
  double magnitude_delta = 0.0;   // reserved; not used by the rule
};

struct AftershockFilterResult {
  Catalog retained;
  std::vector<EarthquakeEvent> excluded;
  // Index (into the input catalog) of each excluded event and of the
  // mainshock that excluded it.
  std::vector<std::size_t> excluded_index;
  std::vector<std::size_t> excluded_by;
};

// Excludes an event iff an earlier retained event of strictly larger
// magnitude lies within time_window days (strictly earlier, so a zero window
// excludes nothing) and distance_window km of it. When several mainshocks
// qualify, `excluded_by` names the largest (earliest on ties).
AftershockFilterResult filter_aftershocks(const Catalog& catalog, const AftershockPolicy& policy);

// Audit CSV: `time,x,y,magnitude,excluded_by`.
std::string serialize_exclusions(const AftershockFilterResult& result);

}  // namespace eqstat
