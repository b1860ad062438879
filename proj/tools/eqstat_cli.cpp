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

// eqstat command-line tool.
//
//   eqstat fit-density        --earthquakes cat.csv [--model mle|kde] [--out DIR]
//   eqstat significance       --earthquakes cat.csv --predictions preds.csv [--density PATH|fit]
//   eqstat enhancement        (same inputs as significance)
//   eqstat precursor          --earthquakes cat.csv --predictions preds.csv
//   eqstat simulate           [--mode significance|precursor] --seed S --replicates R
//   eqstat filter-aftershocks --earthquakes cat.csv --aftershock-days D --aftershock-km K
//
// Reports are JSON with a fixed key order and 17 significant digits; with
// --out DIR they are written to DIR/report.json next to CSV audit tables,
// otherwise the report goes to stdout. Exit status: 0 success, 2 invalid
// input or usage, 1 internal failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eqstat/eqstat.h"

namespace {

using ojson = nlohmann::ordered_json;

// ---- errors ----------------------------------------------------------------

struct Failure {
  int exit_code;
  std::string message;
};

[[noreturn]] void invalid(const std::string& message) { throw Failure{2, message}; }

void check(eqs_status status) {
  if (status == EQS_OK) return;
  const int code = (status == EQS_ERR_INVALID_ARGUMENT || status == EQS_ERR_PARSE) ? 2 : 1;
  throw Failure{code, eqs_last_error()};
}

// ---- owned handles ---------------------------------------------------------

struct CatalogDeleter {
  void operator()(eqs_catalog* p) const { eqs_catalog_free(p); }
};
struct PredictionsDeleter {
  void operator()(eqs_predictions* p) const { eqs_predictions_free(p); }
};
struct DensityDeleter {
  void operator()(eqs_density* p) const { eqs_density_free(p); }
};
struct BufferDeleter {
  void operator()(eqs_buffer* p) const { eqs_buffer_free(p); }
};
using CatalogPtr = std::unique_ptr<eqs_catalog, CatalogDeleter>;
using PredictionsPtr = std::unique_ptr<eqs_predictions, PredictionsDeleter>;
using DensityPtr = std::unique_ptr<eqs_density, DensityDeleter>;
using BufferPtr = std::unique_ptr<eqs_buffer, BufferDeleter>;

std::string take(eqs_buffer* raw) {
  BufferPtr buffer(raw);
  return std::string(eqs_buffer_data(buffer.get()), eqs_buffer_size(buffer.get()));
}

// ---- output formatting -----------------------------------------------------

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_scalar(const ojson& j) { return !j.is_object() && !j.is_array(); }

void emit(const ojson& j, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close_pad(2 * depth, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + ojson(key).dump() + ": ";
      emit(value, out, depth + 1);
    }
    out += "\n" + close_pad + "}";
  } else if (j.is_array()) {
    const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
    if (j.empty() || flat) {
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        emit(j[i], out, depth + 1);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += pad;
      emit(j[i], out, depth + 1);
    }
    out += "\n" + close_pad + "]";
  } else if (j.is_number_float()) {
    out += format_number(j.get<double>());
  } else {
    out += j.dump();
  }
}

std::string to_report_text(const ojson& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

ojson optional_number(bool present, double v) { return present ? ojson(v) : ojson(nullptr); }

// ---- files -----------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Output {
 public:
  explicit Output(std::string dir) : dir_(std::move(dir)) {
    if (dir_.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) invalid("cannot create output directory " + dir_);
  }

  bool to_directory() const { return !dir_.empty(); }

  // Writes DIR/name; without a directory only the report is printed.
  void file(const std::string& name, const std::string& content) const {
    if (dir_.empty()) return;
    const auto path = std::filesystem::path(dir_) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) invalid("cannot write " + path.string());
    out << content;
    if (!out) invalid("cannot write " + path.string());
  }

  void report(const ojson& j) const {
    const auto text = to_report_text(j);
    if (dir_.empty()) {
      std::cout << text;
    } else {
      file("report.json", text);
    }
  }

 private:
  std::string dir_;
};

// ---- regions ---------------------------------------------------------------

// Box "xmin,ymin,xmax,ymax" or a JSON file holding [[x, y], ...]
// counterclockwise vertices.
struct RegionSpec {
  std::vector<double> vertices;
  eqs_region region{};
};

std::unique_ptr<RegionSpec> parse_region(const std::string& spec) {
  auto r = std::make_unique<RegionSpec>();
  std::vector<double> box;
  std::stringstream ss(spec);
  std::string field;
  bool numeric = spec.find(',') != std::string::npos;
  while (numeric && std::getline(ss, field, ',')) {
    try {
      std::size_t used = 0;
      box.push_back(std::stod(field, &used));
      numeric = used == field.size();
    } catch (const std::exception&) {
      numeric = false;
    }
  }
  if (numeric) {
    if (box.size() != 4 || !(box[2] > box[0]) || !(box[3] > box[1])) {
      invalid("--region box must be xmin,ymin,xmax,ymax with xmin < xmax and ymin < ymax");
    }
    r->vertices = {box[0], box[1], box[2], box[1], box[2], box[3], box[0], box[3]};
  } else {
    ojson j;
    try {
      j = ojson::parse(read_file(spec));
    } catch (const ojson::parse_error& e) {
      invalid("--region " + spec + ": " + e.what());
    }
    if (!j.is_array()) invalid("--region file must hold an array of [x, y] vertices");
    for (const auto& v : j) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        invalid("--region file must hold an array of [x, y] vertices");
      }
      r->vertices.push_back(v[0].get<double>());
      r->vertices.push_back(v[1].get<double>());
    }
  }
  r->region.kind = EQS_REGION_POLYGON;
  r->region.vertices = r->vertices.data();
  r->region.n_vertices = r->vertices.size() / 2;
  return r;
}

std::unique_ptr<RegionSpec> box_region(const eqs_box& b) {
  return parse_region(format_number(b.xmin) + "," + format_number(b.ymin) + "," +
                      format_number(b.xmax) + "," + format_number(b.ymax));
}

eqs_box union_box(const eqs_box& a, const eqs_box& b) {
  return {std::min(a.xmin, b.xmin), std::min(a.ymin, b.ymin), std::max(a.xmax, b.xmax),
          std::max(a.ymax, b.ymax)};
}

// ---- run configuration -----------------------------------------------------

struct RunConfig {
  std::string subcommand;
  std::string earthquakes;
  std::string predictions;
  std::string polygons;
  std::string density = "fit";
  std::string model = "mle";
  std::string region;
  double record_start = 0.0;
  std::optional<double> record_end;
  double alpha = 0.05;
  double threshold = 2.5;
  bool exact = false;
  bool post_filter_null = false;
  double aftershock_days = 30.0;
  double aftershock_km = 50.0;
  std::uint64_t seed = 0;
  std::size_t replicates = 1000;
  std::string mode = "significance";
  double clustering = 0.0;
  double cluster_decay = 1.0;
  double cluster_spread = 5.0;
  double b_value = 1.0;
  std::size_t grid = 100;
  // Precursor simulation.
  std::size_t sim_m = 50;
  long sim_n = 100;
  double sim_span = 1.0;
  bool shared_catalog = false;
  double suppression_window = 0.0;
  std::string out;
};

ojson config_json(const RunConfig& c) {
  ojson j;
  j["subcommand"] = c.subcommand;
  j["version"] = eqs_version();
  const auto& s = c.subcommand;
  const bool needs_predictions = s == "significance" || s == "enhancement" || s == "precursor" ||
                                 (s == "simulate" && c.mode == "significance");
  const bool needs_density = s == "significance" || s == "enhancement" ||
                             (s == "simulate" && c.mode == "significance");
  if (!(s == "simulate" && c.mode == "precursor")) {
    j["earthquakes"] = c.earthquakes;
    j["region"] = c.region.empty() ? ojson(nullptr) : ojson(c.region);
    j["record_start"] = c.record_start;
    j["record_end"] = c.record_end ? ojson(*c.record_end) : ojson(nullptr);
  }
  if (needs_predictions) {
    j["predictions"] = c.predictions;
    j["polygons"] = c.polygons.empty() ? ojson(nullptr) : ojson(c.polygons);
  }
  if (needs_density) {
    j["density"] = c.density;
    if (c.density == "fit") j["model"] = c.model;
  }
  if (s == "fit-density") {
    j["model"] = c.model;
    j["grid"] = c.grid;
  }
  if (s == "significance" || s == "enhancement") {
    j["alpha"] = c.alpha;
    j["exact"] = c.exact;
    j["post_filter_null"] = c.post_filter_null;
  }
  if (s == "filter-aftershocks" || ((s == "significance" || s == "enhancement") &&
                                    c.post_filter_null)) {
    j["aftershock_days"] = c.aftershock_days;
    j["aftershock_km"] = c.aftershock_km;
  }
  if (s == "precursor") j["threshold"] = c.threshold;
  if (s == "simulate") {
    j["mode"] = c.mode;
    j["seed"] = c.seed;
    j["replicates"] = c.replicates;
    if (c.mode == "significance") {
      j["clustering"] = c.clustering;
      j["cluster_decay"] = c.cluster_decay;
      j["cluster_spread"] = c.cluster_spread;
      j["b_value"] = c.b_value;
    } else {
      j["m"] = c.sim_m;
      j["n"] = c.sim_n;
      j["span"] = c.sim_span;
      j["shared_catalog"] = c.shared_catalog;
      j["suppression_window"] = c.suppression_window;
      j["threshold"] = c.threshold;
    }
  }
  return j;
}

// ---- shared loading --------------------------------------------------------

struct Inputs {
  CatalogPtr catalog;
  PredictionsPtr predictions;
  std::unique_ptr<RegionSpec> region;
};

PredictionsPtr load_predictions(const RunConfig& c) {
  if (c.predictions.empty()) invalid("--predictions is required");
  const auto csv = read_file(c.predictions);
  std::string sidecar;
  if (!c.polygons.empty()) sidecar = read_file(c.polygons);
  eqs_predictions* raw = nullptr;
  check(eqs_predictions_parse(csv.data(), csv.size(), c.polygons.empty() ? nullptr : sidecar.data(),
                              sidecar.size(), &raw));
  return PredictionsPtr(raw);
}

// Loads the catalog, by default over the box enclosing every event and every
// prediction region.
Inputs load_inputs(const RunConfig& c, bool with_predictions) {
  if (c.earthquakes.empty()) invalid("--earthquakes is required");
  Inputs in;
  const auto csv = read_file(c.earthquakes);
  if (with_predictions) in.predictions = load_predictions(c);

  eqs_catalog_options opts{};
  opts.record_start = c.record_start;
  opts.has_record_end = c.record_end.has_value();
  opts.record_end = c.record_end.value_or(0.0);
  if (!c.region.empty()) {
    in.region = parse_region(c.region);
  } else {
    eqs_catalog* raw = nullptr;
    check(eqs_catalog_parse(csv.data(), csv.size(), &opts, &raw));
    CatalogPtr provisional(raw);
    eqs_box box{};
    check(eqs_catalog_region_box(provisional.get(), &box));
    if (in.predictions && eqs_predictions_size(in.predictions.get()) > 0) {
      eqs_box pbox{};
      check(eqs_predictions_region_box(in.predictions.get(), &pbox));
      box = union_box(box, pbox);
    }
    in.region = box_region(box);
  }
  opts.region = &in.region->region;
  eqs_catalog* raw = nullptr;
  check(eqs_catalog_parse(csv.data(), csv.size(), &opts, &raw));
  in.catalog.reset(raw);
  return in;
}

DensityPtr load_density(const RunConfig& c, const eqs_catalog* catalog) {
  eqs_density* raw = nullptr;
  if (c.density != "fit") {
    const auto text = read_file(c.density);
    check(eqs_density_from_json(text.data(), text.size(), &raw));
  } else if (c.model == "kde") {
    check(eqs_density_fit_kde(catalog, nullptr, &raw));
  } else {
    check(eqs_density_fit_mle(catalog, nullptr, &raw));
  }
  return DensityPtr(raw);
}

ojson record_json(const eqs_catalog* catalog) {
  double start = 0.0;
  double end = 0.0;
  check(eqs_catalog_record(catalog, &start, &end));
  ojson j;
  j["n_events"] = eqs_catalog_size(catalog);
  j["record_start"] = start;
  j["record_end"] = end;
  return j;
}

ojson summary_json(const eqs_sim_summary& s) {
  ojson j;
  j["replicates"] = s.replicates;
  j["mean"] = s.mean;
  j["variance"] = s.variance;
  j["mean_std_error"] = s.mean_std_error;
  j["quantiles"] = {{"q05", s.quantiles[0]}, {"q25", s.quantiles[1]}, {"q50", s.quantiles[2]},
                    {"q75", s.quantiles[3]}, {"q95", s.quantiles[4]}};
  j["ks_uniform"] = optional_number(s.has_ks, s.ks_uniform);
  return j;
}

// ---- subcommands -----------------------------------------------------------

int run_fit_density(const RunConfig& c) {
  Output out(c.out);
  auto in = load_inputs(c, false);
  eqs_density* raw = nullptr;
  ojson fit;
  fit["model"] = c.model;
  if (c.model == "kde") {
    check(eqs_density_fit_kde(in.catalog.get(), nullptr, &raw));
  } else {
    eqs_mle_info info{};
    check(eqs_density_fit_mle(in.catalog.get(), &info, &raw));
    fit["log_likelihood"] = info.log_likelihood;
    fit["uniform_log_likelihood"] = info.uniform_log_likelihood;
    fit["iterations"] = info.iterations;
    fit["converged"] = info.converged != 0;
    ojson cov = ojson::array();
    for (double v : info.center_covariance) cov.push_back(v);
    fit["center_covariance"] = cov;
  }
  DensityPtr density(raw);
  eqs_buffer* buf = nullptr;
  check(eqs_density_to_json(density.get(), c.earthquakes.c_str(), &buf));
  const auto model_text = take(buf);
  check(eqs_density_grid_csv(density.get(), c.grid, c.grid, &buf));
  const auto grid = take(buf);

  ojson report;
  report["config"] = config_json(c);
  report["catalog"] = record_json(in.catalog.get());
  report["fit"] = fit;
  report["density"] = ojson::parse(model_text);
  out.file("density.json", model_text + "\n");
  out.file("density_grid.csv", grid);
  out.report(report);
  return 0;
}

struct SignificanceRun {
  eqs_significance_report report{};
  std::vector<eqs_prediction_row> rows;
  Inputs inputs;
  size_t n_excluded = 0;
};

SignificanceRun compute_significance(const RunConfig& c) {
  if (!(c.alpha > 0.0 && c.alpha < 0.5)) invalid("--alpha must lie in (0, 0.5)");
  SignificanceRun run;
  run.inputs = load_inputs(c, true);
  const auto density = load_density(c, run.inputs.catalog.get());
  CatalogPtr background;
  if (c.post_filter_null) {
    const eqs_aftershock_policy policy{c.aftershock_days, c.aftershock_km, 0.0};
    eqs_catalog* raw = nullptr;
    check(eqs_filter_aftershocks(run.inputs.catalog.get(), &policy, &raw, nullptr,
                                 &run.n_excluded));
    background.reset(raw);
  }
  const eqs_significance_options opts{c.alpha, c.exact ? 1 : 0};
  run.rows.resize(eqs_predictions_size(run.inputs.predictions.get()));
  check(eqs_significance(run.inputs.catalog.get(), background.get(), run.inputs.predictions.get(),
                         density.get(), &opts, &run.report, run.rows.data()));
  return run;
}

std::string predictions_audit_csv(const SignificanceRun& run) {
  std::string csv =
      "index,issue_time,window_start,window_end,min_magnitude,region_mass,chance_prob,"
      "n_background,success\n";
  for (size_t j = 0; j < run.rows.size(); ++j) {
    eqs_prediction p{};
    check(eqs_predictions_get(run.inputs.predictions.get(), j, &p));
    const auto& r = run.rows[j];
    csv += std::to_string(j) + "," + format_number(p.issue_time) + "," +
           format_number(p.window_start) + "," + format_number(p.window_end) + "," +
           format_number(p.min_magnitude) + "," + format_number(r.region_mass) + "," +
           format_number(r.chance_prob) + "," + std::to_string(r.n_background) + "," +
           std::to_string(r.success) + "\n";
  }
  return csv;
}

ojson c_min_json(const eqs_significance_report& r) {
  if (!r.has_c_min) return nullptr;
  ojson j;
  j["c"] = r.c_min.c;
  j["root_found"] = r.c_min.root_found != 0;
  j["residual"] = r.c_min.residual;
  j["upper"] = r.c_min.upper;
  return j;
}

int run_significance(const RunConfig& c) {
  Output out(c.out);
  const auto run = compute_significance(c);
  const auto& r = run.report;
  ojson res;
  res["n_predictions"] = r.n_predictions;
  res["n_successes"] = r.n_successes;
  res["mu"] = r.mu;
  res["sigma"] = r.sigma;
  res["z"] = r.z;
  res["significance"] = r.significance;
  res["exact_significance"] = optional_number(r.has_exact, r.exact_significance);
  res["c_hat"] = optional_number(r.has_c_hat, r.c_hat);
  res["c_min"] = c_min_json(r);
  res["alpha"] = r.alpha;
  res["overlap_fraction"] = r.overlap_fraction;
  if (c.post_filter_null) res["n_background_excluded"] = run.n_excluded;

  ojson report;
  report["config"] = config_json(c);
  report["catalog"] = record_json(run.inputs.catalog.get());
  report["result"] = res;
  out.file("predictions_audit.csv", predictions_audit_csv(run));
  out.report(report);
  return 0;
}

int run_enhancement(const RunConfig& c) {
  Output out(c.out);
  const auto run = compute_significance(c);
  const auto& r = run.report;
  ojson res;
  res["n_predictions"] = r.n_predictions;
  res["n_successes"] = r.n_successes;
  res["mu"] = r.mu;
  res["c_hat"] = optional_number(r.has_c_hat, r.c_hat);
  res["alpha"] = r.alpha;
  res["c_min"] = c_min_json(r);
  res["significance"] = r.significance;

  ojson report;
  report["config"] = config_json(c);
  report["catalog"] = record_json(run.inputs.catalog.get());
  report["result"] = res;
  out.file("predictions_audit.csv", predictions_audit_csv(run));
  out.report(report);
  return 0;
}

int run_precursor(const RunConfig& c) {
  if (!(c.threshold > 0.0)) invalid("--threshold must be positive");
  Output out(c.out);
  const auto in = load_inputs(c, true);
  const size_t m = eqs_predictions_size(in.predictions.get());
  if (m == 0) invalid("no predictions");
  std::vector<eqs_delay_row> rows(m);
  eqs_precursor_report r{};
  const eqs_precursor_options opts{-c.threshold, c.threshold};
  check(eqs_precursor(in.catalog.get(), in.predictions.get(), &opts, &r, rows.data()));

  std::string csv = "prediction_index,t,tau_hat,censored,tau_mean,tau_var\n";
  for (size_t i = 0; i < r.m; ++i) {
    const auto& o = rows[i];
    csv += std::to_string(o.prediction_index) + "," + format_number(o.t) + "," +
           format_number(o.tau_hat) + "," + std::to_string(o.censored) + "," +
           format_number(o.tau_mean) + "," + format_number(o.tau_var) + "\n";
  }
  ojson res;
  res["y_obs"] = r.y_obs;
  res["e_y"] = r.e_y;
  res["var_y"] = r.var_y;
  res["z"] = r.z;
  res["precursor_flag"] = r.precursor_flag != 0;
  res["postcursor_flag"] = r.postcursor_flag != 0;
  res["m"] = r.m;
  res["n"] = r.n;
  res["span"] = r.span;
  res["origin"] = r.origin;
  res["dropped_after_last_event"] = r.dropped_after_last_event;

  ojson report;
  report["config"] = config_json(c);
  report["catalog"] = record_json(in.catalog.get());
  report["result"] = res;
  out.file("delays.csv", csv);
  out.report(report);
  return 0;
}

int run_simulate(const RunConfig& c) {
  if (c.replicates == 0) invalid("--replicates must be at least 1");
  Output out(c.out);
  ojson report;
  report["config"] = config_json(c);
  eqs_sim_summary summary{};
  std::string csv;

  if (c.mode == "precursor") {
    if (!(c.threshold > 0.0)) invalid("--threshold must be positive");
    eqs_precursor_sim_options o{};
    o.m = c.sim_m;
    o.n = c.sim_n;
    o.span = c.sim_span;
    o.replicates = c.replicates;
    o.seed = c.seed;
    o.shared_catalog = c.shared_catalog ? 1 : 0;
    o.suppression_window = c.suppression_window;
    o.precursor_threshold = -c.threshold;
    o.postcursor_threshold = c.threshold;
    std::vector<double> z(c.replicates);
    double pre = 0.0;
    double post = 0.0;
    check(eqs_empirical_precursor(&o, &summary, &pre, &post, z.data()));
    csv = "replicate,z\n";
    for (size_t i = 0; i < z.size(); ++i) csv += std::to_string(i) + "," + format_number(z[i]) + "\n";
    ojson res = summary_json(summary);
    res["precursor_rate"] = pre;
    res["postcursor_rate"] = post;
    report["result"] = res;
  } else {
    auto in = load_inputs(c, true);
    const auto density = load_density(c, in.catalog.get());
    const size_t n = eqs_catalog_size(in.catalog.get());
    if (n == 0) invalid("catalog is empty");
    double start = 0.0;
    double end = 0.0;
    check(eqs_catalog_record(in.catalog.get(), &start, &end));
    double m_min = INFINITY;
    for (size_t i = 0; i < n; ++i) {
      eqs_event e{};
      check(eqs_catalog_event(in.catalog.get(), i, &e));
      m_min = std::min(m_min, e.magnitude);
    }
    eqs_null_model model{};
    model.n_events = n;
    model.span = end - start;
    model.record_start = start;
    model.magnitude_min = m_min;
    model.b_value = c.b_value;
    model.clustering_fraction = c.clustering;
    model.clustering_time_decay = c.cluster_decay;
    model.clustering_spatial_spread = c.cluster_spread;
    model.seed = c.seed;
    std::vector<long> successes(c.replicates);
    std::vector<double> significance(c.replicates);
    check(eqs_empirical_significance(&model, density.get(), in.predictions.get(), c.replicates,
                                     &summary, successes.data(), significance.data()));
    csv = "replicate,successes,significance\n";
    for (size_t i = 0; i < c.replicates; ++i) {
      csv += std::to_string(i) + "," + std::to_string(successes[i]) + "," +
             format_number(significance[i]) + "\n";
    }
    report["catalog"] = record_json(in.catalog.get());
    report["null_model"] = {{"n_events", model.n_events},
                            {"span", model.span},
                            {"record_start", model.record_start},
                            {"magnitude_min", model.magnitude_min},
                            {"b_value", model.b_value}};
    report["result"] = summary_json(summary);
  }
  out.file("replicates.csv", csv);
  out.report(report);
  return 0;
}

int run_filter_aftershocks(const RunConfig& c) {
  Output out(c.out);
  const auto in = load_inputs(c, false);
  const eqs_aftershock_policy policy{c.aftershock_days, c.aftershock_km, 0.0};
  eqs_catalog* raw = nullptr;
  eqs_buffer* excluded = nullptr;
  size_t n_excluded = 0;
  check(eqs_filter_aftershocks(in.catalog.get(), &policy, &raw, &excluded, &n_excluded));
  CatalogPtr retained(raw);
  const auto excluded_csv = take(excluded);
  eqs_buffer* retained_buf = nullptr;
  check(eqs_catalog_to_csv(retained.get(), &retained_buf));

  ojson res;
  res["n_input"] = eqs_catalog_size(in.catalog.get());
  res["n_retained"] = eqs_catalog_size(retained.get());
  res["n_excluded"] = n_excluded;
  ojson report;
  report["config"] = config_json(c);
  report["result"] = res;
  out.file("retained.csv", take(retained_buf));
  out.file("excluded.csv", excluded_csv);
  out.report(report);
  return 0;
}

// ---- argument wiring -------------------------------------------------------

constexpr const char* kPolicyNote =
    " Placeholder default: no standard postcursor window exists; set it for your catalog.";

void add_catalog_flags(CLI::App* app, RunConfig& c) {
  app->add_option("--earthquakes", c.earthquakes, "Earthquake catalog CSV (time,x,y,magnitude)")
      ->required();
  app->add_option("--region", c.region,
                  "Study region: box xmin,ymin,xmax,ymax or JSON file of [x, y] vertices "
                  "(default: box around events and prediction regions)");
  app->add_option("--record-start", c.record_start, "Start of the catalog record, days");
  app->add_option("--record-end", c.record_end,
                  "End of the catalog record, days (default: last event time)");
}

void add_prediction_flags(CLI::App* app, RunConfig& c) {
  app->add_option("--predictions", c.predictions,
                  "Predictions CSV (issue_time,window_start,window_end,cx,cy,radius,min_magnitude)")
      ->required();
  app->add_option("--polygons", c.polygons,
                  "JSON array, one entry per prediction row: null or [[x, y], ...] polygon");
}

void add_density_flags(CLI::App* app, RunConfig& c) {
  app->add_option("--density", c.density, "Density model JSON, or 'fit' to fit from the catalog")
      ->capture_default_str();
  app->add_option("--model", c.model, "Model to fit when --density fit")
      ->check(CLI::IsMember({"mle", "kde"}))
      ->capture_default_str();
}

void add_policy_flags(CLI::App* app, RunConfig& c) {
  app->add_option("--aftershock-days", c.aftershock_days,
                  std::string("Aftershock time window, days.") + kPolicyNote)
      ->capture_default_str();
  app->add_option("--aftershock-km", c.aftershock_km,
                  std::string("Aftershock distance window, km.") + kPolicyNote)
      ->capture_default_str();
}

void add_out_flag(CLI::App* app, RunConfig& c) {
  app->add_option("--out", c.out, "Output directory (default: report to stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistical evaluation of earthquake predictions", "eqstat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(eqs_version()));
  RunConfig c;

  auto* fit = app.add_subcommand("fit-density", "Fit a spatial density to a catalog");
  add_catalog_flags(fit, c);
  fit->add_option("--model", c.model, "Density model")
      ->check(CLI::IsMember({"mle", "kde"}))
      ->capture_default_str();
  fit->add_option("--grid", c.grid, "Grid resolution per axis for density_grid.csv")
      ->check(CLI::Range(std::size_t{2}, std::size_t{10000}))
      ->capture_default_str();
  add_out_flag(fit, c);

  for (const char* name : {"significance", "enhancement"}) {
    auto* sub = app.add_subcommand(
        name, std::string(name) == "significance"
                  ? "Test whether predictions succeed more often than chance"
                  : "Estimate the enhancement factor over chance and its lower bound");
    add_catalog_flags(sub, c);
    add_prediction_flags(sub, c);
    add_density_flags(sub, c);
    sub->add_option("--alpha", c.alpha, "Significance level for c_min")->capture_default_str();
    sub->add_flag("--exact", c.exact, "Also compute the exact Poisson-binomial tail");
    sub->add_flag("--post-filter-null", c.post_filter_null,
                  "Count background events N_bg after aftershock filtering");
    add_policy_flags(sub, c);
    add_out_flag(sub, c);
  }

  auto* pre = app.add_subcommand("precursor", "Test whether signals precede earthquakes");
  add_catalog_flags(pre, c);
  add_prediction_flags(pre, c);
  pre->add_option("--threshold", c.threshold, "Flag when |z| reaches this value")
      ->capture_default_str();
  add_out_flag(pre, c);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo under the null hypothesis");
  sim->add_option("--mode", c.mode, "Statistic to simulate")
      ->check(CLI::IsMember({"significance", "precursor"}))
      ->capture_default_str();
  sim->add_option("--earthquakes", c.earthquakes, "Catalog CSV (significance mode)");
  sim->add_option("--region", c.region, "Study region (see significance)");
  sim->add_option("--record-start", c.record_start, "Start of the catalog record, days");
  sim->add_option("--record-end", c.record_end, "End of the catalog record, days");
  sim->add_option("--predictions", c.predictions, "Predictions CSV (significance mode)");
  sim->add_option("--polygons", c.polygons, "Polygon sidecar JSON (significance mode)");
  add_density_flags(sim, c);
  sim->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  sim->add_option("--replicates", c.replicates, "Number of replicates")->capture_default_str();
  sim->add_option("--clustering", c.clustering,
                  "Fraction of injected postcursors in simulated catalogs, in [0, 1)")
      ->capture_default_str();
  sim->add_option("--cluster-decay", c.cluster_decay, "Mean postcursor delay, days")
      ->capture_default_str();
  sim->add_option("--cluster-spread", c.cluster_spread, "Postcursor offset per axis, km")
      ->capture_default_str();
  sim->add_option("--b-value", c.b_value, "Gutenberg-Richter b-value of simulated magnitudes")
      ->capture_default_str();
  sim->add_option("--m", c.sim_m, "Signals per replicate (precursor mode)")->capture_default_str();
  sim->add_option("--n", c.sim_n, "Earthquakes per replicate (precursor mode)")
      ->capture_default_str();
  sim->add_option("--span", c.sim_span, "Record length (precursor mode)")->capture_default_str();
  sim->add_flag("--shared-catalog", c.shared_catalog,
                "All signals in a replicate share one catalog (precursor mode)");
  sim->add_option("--suppression-window", c.suppression_window,
                  "Redraw signals this soon after an earthquake (precursor mode)")
      ->capture_default_str();
  sim->add_option("--threshold", c.threshold, "Flag threshold (precursor mode)")
      ->capture_default_str();
  add_out_flag(sim, c);

  auto* filt = app.add_subcommand("filter-aftershocks", "Remove aftershocks from a catalog");
  add_catalog_flags(filt, c);
  add_policy_flags(filt, c);
  add_out_flag(filt, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "eqstat: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    for (auto* sub : app.get_subcommands()) c.subcommand = sub->get_name();
    if (c.subcommand == "fit-density") return run_fit_density(c);
    if (c.subcommand == "significance") return run_significance(c);
    if (c.subcommand == "enhancement") return run_enhancement(c);
    if (c.subcommand == "precursor") return run_precursor(c);
    if (c.subcommand == "simulate") {
      if (c.mode == "significance" && (c.earthquakes.empty() || c.predictions.empty())) {
        invalid("simulate --mode significance needs --earthquakes and --predictions");
      }
      return run_simulate(c);
    }
    if (c.subcommand == "filter-aftershocks") return run_filter_aftershocks(c);
    invalid("unknown subcommand");
  } catch (const Failure& f) {
    std::cerr << "eqstat: error: " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "eqstat: internal error: " << e.what() << "\n";
    return 1;
  }
}
