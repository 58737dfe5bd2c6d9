#include "risdeploy/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "risdeploy/errors.hpp"

namespace risdeploy {

using nlohmann::json;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

namespace {

std::vector<double> arange(double start, double stop, double step) {
  std::vector<double> v;
  for (int k = 0;; ++k) {
    const double x = start + step * k;
    if (x > stop + 1e-9) break;
    v.push_back(x);
  }
  return v;
}

// One JSON object in the document; remembers which keys were consumed.
class Section {
 public:
  Section(const json& doc, std::string path) : path_(std::move(path)) {
    if (!doc.is_object()) throw ConfigError(fmt::format("{}: expected an object", path_));
    obj_ = &doc;
  }

  template <class T>
  bool read(const char* key, T& dst) {
    seen_.insert(key);
    auto it = obj_->find(key);
    if (it == obj_->end()) return false;
    try {
      dst = it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(fmt::format("{}.{}: {}", path_, key, e.what()));
    }
    return true;
  }

  bool has_child(const char* key) const { return obj_->contains(key); }

  Section child(const char* key) {
    seen_.insert(key);
    return Section(obj_->at(key), path_ + "." + key);
  }

  void reject_unknown() const {
    for (const auto& [key, value] : obj_->items()) {
      if (!seen_.count(key)) throw ConfigError(fmt::format("{}: unknown key '{}'", path_, key));
    }
  }

 private:
  const json* obj_ = nullptr;
  std::string path_;
  std::set<std::string> seen_;
};

Metric parse_metric(const std::string& s) {
  if (s == "area_avg_rate") return Metric::AreaAvgRate;
  if (s == "coverage_ratio") return Metric::CoverageRatio;
  throw ConfigError(fmt::format("search.metric: unknown metric '{}'", s));
}

std::string metric_name(Metric m) {
  return m == Metric::AreaAvgRate ? "area_avg_rate" : "coverage_ratio";
}

SweepMode parse_sweep_mode(const std::string& s) {
  if (s == "optimized") return SweepMode::OptimizedPlacement;
  if (s == "fixed") return SweepMode::Fixed;
  throw ConfigError(fmt::format("search.sweep_mode: unknown mode '{}'", s));
}

}  // namespace

SearchSpec ScenarioFile::resolved_search() const {
  SearchSpec s = search;
  s.n_draws = run.n_draws;
  s.seed = run.seed;
  s.blocker_density = blocker_density;
  return s;
}

ScenarioFile default_scenario() {
  ScenarioFile s;
  s.ris.elem_a = s.layout.wavelength / 2.0;
  s.ris.elem_b = s.layout.wavelength / 2.0;
  s.search.x_values = arange(-40.0, 40.0, 10.0);
  s.search.h_values = arange(6.0, 20.0, 1.0);
  return s;
}

ScenarioFile parse_scenario(const json& doc) {
  ScenarioFile s = default_scenario();
  Section root(doc, "scenario");

  if (root.has_child("layout")) {
    Section sec = root.child("layout");
    SceneLayout& l = s.layout;
    sec.read("bs_height", l.bs_height);
    sec.read("road_halfwidth", l.road_halfwidth);
    sec.read("ris_y", l.ris_y);
    sec.read("blocker_lane_y", l.blocker_lane_y);
    sec.read("blocker_height", l.blocker_height);
    sec.read("blocker_length", l.blocker_length);
    sec.read("wavelength", l.wavelength);
    sec.read("gains_tx_rx", l.gains_tx_rx);
    double snr_db = 0.0;
    if (sec.read("snr_db", snr_db)) l.snr = db_to_linear(snr_db);
    sec.read("pl_threshold", l.pl_threshold);
    sec.read("grid_resolution", l.grid_resolution);
    sec.reject_unknown();
  }
  s.layout.validate();

  s.ris.elem_a = s.layout.wavelength / 2.0;
  s.ris.elem_b = s.layout.wavelength / 2.0;
  if (root.has_child("ris")) {
    Section sec = root.child("ris");
    RisConfig& r = s.ris;
    sec.read("x", r.x);
    sec.read("height", r.height);
    double tilt_deg = 0.0;
    if (sec.read("tilt_deg", tilt_deg)) r.tilt = deg_to_rad(tilt_deg);
    sec.read("n_rows", r.n_rows);
    sec.read("n_cols", r.n_cols);
    sec.read("element_a", r.elem_a);
    sec.read("element_b", r.elem_b);
    sec.read("pattern_exponent", r.pattern_exponent);
    sec.read("element_gain", r.element_gain);
    sec.reject_unknown();
  }
  s.ris.validate(s.layout);

  if (root.has_child("blockers")) {
    Section sec = root.child("blockers");
    sec.read("density", s.blocker_density);
    sec.read("snapshot_x", s.snapshot_blockers);
    sec.reject_unknown();
  }
  if (!(s.blocker_density >= 0.0)) throw ConfigError("blockers.density must be non-negative");

  if (root.has_child("search")) {
    Section sec = root.child("search");
    std::string text;
    if (sec.read("metric", text)) s.search.metric = parse_metric(text);
    sec.read("x_values", s.search.x_values);
    sec.read("h_values", s.search.h_values);
    double res_deg = 0.0;
    if (sec.read("tilt_resolution_deg", res_deg)) s.search.tilt_resolution = deg_to_rad(res_deg);
    if (sec.read("sweep_mode", text)) s.search.sweep_mode = parse_sweep_mode(text);
    sec.read("nested_draws", s.search.nested_draws);
    sec.reject_unknown();
  }
  if (s.search.x_values.empty()) throw ConfigError("search.x_values must not be empty");
  if (s.search.h_values.empty()) throw ConfigError("search.h_values must not be empty");
  if (!(s.search.tilt_resolution > 0.0)) throw ConfigError("search.tilt_resolution_deg must be positive");
  if (s.search.nested_draws < 1) throw ConfigError("search.nested_draws must be at least 1");

  if (root.has_child("run")) {
    Section sec = root.child("run");
    sec.read("draws", s.run.n_draws);
    sec.read("seed", s.run.seed);
    sec.read("threads", s.run.threads);
    sec.read("out", s.run.out_dir);
    sec.reject_unknown();
  }
  if (s.run.n_draws < 1) throw ConfigError("run.draws must be at least 1");

  root.reject_unknown();
  return s;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open scenario file {}", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return parse_scenario(doc);
}

json to_json(const ScenarioFile& s) {
  const SceneLayout& l = s.layout;
  const RisConfig& r = s.ris;
  json doc;
  doc["layout"] = {{"bs_height", l.bs_height},
                   {"road_halfwidth", l.road_halfwidth},
                   {"ris_y", l.ris_y},
                   {"blocker_lane_y", l.blocker_lane_y},
                   {"blocker_height", l.blocker_height},
                   {"blocker_length", l.blocker_length},
                   {"wavelength", l.wavelength},
                   {"gains_tx_rx", l.gains_tx_rx},
                   {"snr_db", linear_to_db(l.snr)},
                   {"pl_threshold", l.pl_threshold},
                   {"grid_resolution", l.grid_resolution}};
  doc["ris"] = {{"x", r.x},
                {"height", r.height},
                {"tilt_deg", rad_to_deg(r.tilt)},
                {"n_rows", r.n_rows},
                {"n_cols", r.n_cols},
                {"element_a", r.elem_a},
                {"element_b", r.elem_b},
                {"pattern_exponent", r.pattern_exponent},
                {"element_gain", r.element_gain}};
  doc["blockers"] = {{"density", s.blocker_density}, {"snapshot_x", s.snapshot_blockers}};
  doc["search"] = {{"metric", metric_name(s.search.metric)},
                   {"x_values", s.search.x_values},
                   {"h_values", s.search.h_values},
                   {"tilt_resolution_deg", rad_to_deg(s.search.tilt_resolution)},
                   {"sweep_mode", s.search.sweep_mode == SweepMode::Fixed ? "fixed" : "optimized"},
                   {"nested_draws", s.search.nested_draws}};
  doc["run"] = {{"draws", s.run.n_draws}, {"seed", s.run.seed}};
  return doc;
}

}  // namespace risdeploy
