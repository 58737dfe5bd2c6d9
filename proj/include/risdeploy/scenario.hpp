#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "risdeploy/optimizer.hpp"
#include "risdeploy/scene.hpp"

namespace risdeploy {

struct RunControls {
  std::size_t n_draws = 500;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out_dir = "out";
};

// Everything a CLI run needs. Defaults reproduce the reference 60 GHz
// street deployment (14 m street, 0.5 m x 0.5 m panel of 200 x 200
// half-wavelength elements, lambda_B = 1).
struct ScenarioFile {
  SceneLayout layout;
  RisConfig ris;
  double blocker_density = 1.0;
  std::vector<double> snapshot_blockers{-15.0, 2.5, 13.8, 30.0};
  SearchSpec search;
  RunControls run;

  // SearchSpec with the run controls folded in.
  SearchSpec resolved_search() const;
  MonteCarloSpec monte_carlo() const { return {blocker_density, run.n_draws, run.seed}; }
};

ScenarioFile default_scenario();

// Schema:
//   layout:   bs_height, road_halfwidth, ris_y, blocker_lane_y, blocker_height,
//             blocker_length, wavelength, gains_tx_rx, snr_db, pl_threshold,
//             grid_resolution
//   ris:      x, height, tilt_deg, n_rows, n_cols, element_a, element_b,
//             pattern_exponent, element_gain   (element_a/b default lambda/2)
//   blockers: density, snapshot_x
//   search:   metric ("area_avg_rate" | "coverage_ratio"), x_values, h_values,
//             tilt_resolution_deg, sweep_mode ("optimized" | "fixed"), nested_draws
//   run:      draws, seed, threads, out
// Every key is optional; unknown keys raise ConfigError naming the path.
ScenarioFile parse_scenario(const nlohmann::json& doc);
ScenarioFile load_scenario(const std::filesystem::path& path);

// Full parameter echo. Execution-only controls (threads, out) are left out
// so outputs do not depend on them.
nlohmann::json to_json(const ScenarioFile& scenario);

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace risdeploy
