#include "risdeploy/scene.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "risdeploy/errors.hpp"

namespace risdeploy {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(fmt::format("{} must be a positive finite number (got {})", name, v));
  }
}

}  // namespace

void SceneLayout::validate() const {
  require_positive(bs_height, "bs_height");
  require_positive(road_halfwidth, "road_halfwidth");
  require_positive(ris_y, "ris_y");
  require_positive(blocker_lane_y, "blocker_lane_y");
  require_positive(blocker_height, "blocker_height");
  require_positive(blocker_length, "blocker_length");
  require_positive(wavelength, "wavelength");
  require_positive(gains_tx_rx, "gains_tx_rx");
  require_positive(pl_threshold, "pl_threshold");
  require_positive(grid_resolution, "grid_resolution");
  if (!(snr >= 0.0) || !std::isfinite(snr)) {
    throw ConfigError(fmt::format("snr must be non-negative and finite (got {})", snr));
  }
  if (!(blocker_lane_y < ris_y)) {
    throw ConfigError("blocker lane must lie strictly between the BS (y = 0) and the RIS wall");
  }
  if (!(bs_height > blocker_height)) {
    throw ConfigError("BS must be higher than the blockers");
  }
  if (grid_resolution > std::min(road_halfwidth, ris_y)) {
    throw ConfigError("grid_resolution exceeds the cell extent");
  }
}

double max_feasible_tilt(const RisConfig& ris, const SceneLayout& layout) {
  const double d1 = distance(layout.bs_position(), ris.center(layout));
  const double ratio = std::clamp(layout.ris_y / d1, -1.0, 1.0);
  return kPi / 2.0 - std::acos(ratio);
}

void RisConfig::validate(const SceneLayout& layout) const {
  if (!(height > layout.blocker_height)) {
    throw ConfigError("RIS must be mounted higher than the blockers");
  }
  if (n_rows < 1 || n_cols < 1) {
    throw ConfigError("RIS needs at least one element per lattice axis");
  }
  require_positive(elem_a, "elem_a");
  require_positive(elem_b, "elem_b");
  require_positive(element_gain, "element_gain");
  if (!(pattern_exponent >= 0.0)) {
    throw ConfigError("pattern_exponent must be non-negative");
  }
  if (!std::isfinite(x)) {
    throw ConfigError("RIS x must be finite");
  }
  const double upper = max_feasible_tilt(*this, layout);
  if (!(tilt >= 0.0) || !(tilt < upper)) {
    throw ConfigError(fmt::format(
        "tilt {:.6f} rad outside feasible interval [0, {:.6f}) for this RIS placement", tilt,
        upper));
  }
}

BlockerRealization make_realization(const SceneLayout& layout, const std::vector<double>& xs) {
  BlockerRealization r;
  r.blockers.reserve(xs.size());
  for (double x : xs) {
    r.blockers.push_back({x, layout.blocker_lane_y, layout.blocker_length, layout.blocker_height});
  }
  return r;
}

ElementLattice build_lattice(const RisConfig& ris, const SceneLayout& layout) {
  ris.validate(layout);

  ElementLattice lat;
  lat.n_rows = ris.n_rows;
  lat.n_cols = ris.n_cols;
  lat.elem_a = ris.elem_a;
  lat.elem_b = ris.elem_b;
  lat.pattern_exponent = ris.pattern_exponent;
  const double s = std::sin(ris.tilt);
  const double c = std::cos(ris.tilt);
  lat.row_axis = {1.0, 0.0, 0.0};
  lat.col_axis = {0.0, -s, c};
  lat.normal = {0.0, -c, -s};

  const Vec3 center = ris.center(layout);
  const double i_mid = (static_cast<double>(ris.n_cols) - 1.0) / 2.0;
  const double j_mid = (static_cast<double>(ris.n_rows) - 1.0) / 2.0;
  lat.positions.reserve(ris.element_count());
  for (std::size_t j = 0; j < ris.n_rows; ++j) {
    const double v = (static_cast<double>(j) - j_mid) * ris.elem_b;
    for (std::size_t i = 0; i < ris.n_cols; ++i) {
      const double u = (static_cast<double>(i) - i_mid) * ris.elem_a;
      lat.positions.push_back(center + lat.row_axis * u + lat.col_axis * v);
    }
  }
  return lat;
}

bool is_blocked(const Vec3& tx, const Vec3& rx, const Blocker& blocker) {
  // Orient the segment by y so swapping endpoints gives the identical
  // floating-point evaluation.
  const bool swap = rx.y < tx.y || (rx.y == tx.y && rx.z > tx.z);
  const Vec3& p = swap ? rx : tx;
  const Vec3& q = swap ? tx : rx;

  const double dy = q.y - p.y;
  if (dy == 0.0) return false;
  const double t = (blocker.lane_y - p.y) / dy;
  if (!(t > 0.0 && t < 1.0)) return false;

  const double xc = p.x + t * (q.x - p.x);
  const double zc = p.z + t * (q.z - p.z);
  return xc >= blocker.x && xc <= blocker.x + blocker.length && zc >= 0.0 &&
         zc <= blocker.height;
}

bool is_link_blocked(const Vec3& tx, const Vec3& rx, const BlockerRealization& realization) {
  return std::any_of(realization.blockers.begin(), realization.blockers.end(),
                     [&](const Blocker& b) { return is_blocked(tx, rx, b); });
}

}  // namespace risdeploy
