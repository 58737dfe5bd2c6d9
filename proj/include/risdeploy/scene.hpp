#pragma once

#include <cstddef>
#include <vector>

#include "risdeploy/geometry.hpp"

namespace risdeploy {

// Static cell geometry and radio constants. The BS array center sits at
// (0, 0, bs_height); users live on C = [-R, R] x (0, ris_y) at z = 0.
struct SceneLayout {
  double bs_height = 10.0;
  double road_halfwidth = 50.0;
  double ris_y = 14.0;
  double blocker_lane_y = 6.0;
  double blocker_height = 2.0;
  double blocker_length = 4.8;
  double wavelength = 0.005;
  double gains_tx_rx = 100.0;  // G_t * G_r, linear
  double snr = 1e9;            // linear
  double pl_threshold = 2.5e8; // linear path-loss ceiling
  double grid_resolution = 0.5;
  bool ris_present = true;     // false forces the cascade link off everywhere

  Vec3 bs_position() const { return {0.0, 0.0, bs_height}; }

  // Throws ConfigError when an invariant is violated.
  void validate() const;
};

struct RisConfig {
  double x = 0.0;
  double height = 10.0;
  double tilt = 0.5235987755982988;  // radians, downtilt from vertical
  std::size_t n_rows = 200;
  std::size_t n_cols = 200;
  double elem_a = 0.0025;
  double elem_b = 0.0025;
  double pattern_exponent = 3.0;
  double element_gain = 8.0;

  std::size_t element_count() const { return n_rows * n_cols; }
  Vec3 center(const SceneLayout& layout) const { return {x, layout.ris_y, height}; }

  // Throws ConfigError when an invariant is violated, including a tilt
  // outside the open feasibility interval (0, max_feasible_tilt).
  void validate(const SceneLayout& layout) const;
};

// Upper end of the open tilt interval: pi/2 - arccos(y_RIS / d1), with d1
// the BS to RIS-center distance.
double max_feasible_tilt(const RisConfig& ris, const SceneLayout& layout);

// A vehicle as a vertical screen [x, x + length] x [0, height] in y = lane_y.
struct Blocker {
  double x = 0.0;
  double lane_y = 6.0;
  double length = 4.8;
  double height = 2.0;
};

struct BlockerRealization {
  std::vector<Blocker> blockers;

  std::size_t count() const { return blockers.size(); }
};

// Realization with one screen per x position, shaped by the layout.
BlockerRealization make_realization(const SceneLayout& layout, const std::vector<double>& xs);

// Element centers of the RIS panel. Element (i, j) is stored at index
// j * n_cols + i; i runs along the row axis (global x), j along the column
// axis (panel "up", rotated toward the street by the tilt).
struct ElementLattice {
  std::vector<Vec3> positions;
  Vec3 normal;
  Vec3 row_axis;
  Vec3 col_axis;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  double elem_a = 0.0;
  double elem_b = 0.0;
  double pattern_exponent = 3.0;

  const Vec3& at(std::size_t i, std::size_t j) const { return positions[j * n_cols + i]; }
};

ElementLattice build_lattice(const RisConfig& ris, const SceneLayout& layout);

// True iff the open segment tx -> rx crosses the closed screen rectangle.
// Endpoints on the same side of the screen plane never block.
bool is_blocked(const Vec3& tx, const Vec3& rx, const Blocker& blocker);

bool is_link_blocked(const Vec3& tx, const Vec3& rx, const BlockerRealization& realization);

}  // namespace risdeploy
