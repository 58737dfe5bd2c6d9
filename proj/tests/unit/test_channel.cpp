#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "risdeploy/channel.hpp"
#include "risdeploy/errors.hpp"

using namespace risdeploy;

namespace {

// One element at (0, 0, 10) looking straight down.
ElementLattice single_element(double a = 0.0025, double b = 0.0025) {
  ElementLattice lat;
  lat.positions = {{0.0, 0.0, 10.0}};
  lat.normal = {0.0, 0.0, -1.0};
  lat.row_axis = {1.0, 0.0, 0.0};
  lat.col_axis = {0.0, 1.0, 0.0};
  lat.n_rows = lat.n_cols = 1;
  lat.elem_a = a;
  lat.elem_b = b;
  return lat;
}

RisConfig panel(std::size_t n, double tilt_deg) {
  RisConfig r;
  r.n_rows = r.n_cols = n;
  r.tilt = deg_to_rad(tilt_deg);
  return r;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("element pattern") {
  CHECK(element_pattern(0.0, 3.0) == 1.0);
  CHECK(element_pattern(kPi / 3.0, 3.0) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(element_pattern(0.6 * kPi, 3.0) == 0.0);
  CHECK(element_pattern(kPi / 2.0, 3.0) < 1e-45);
  CHECK(element_pattern(0.7, 0.0) == 1.0);
}

TEST_CASE("incidence and reflection angles") {
  const Vec3 down{0.0, 0.0, -1.0};
  const ElementAngles bore = element_angles({0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 10.0}, down);
  CHECK(bore.theta_i == doctest::Approx(0.0));
  CHECK(bore.d1 == doctest::Approx(10.0));
  CHECK(bore.theta_r == doctest::Approx(std::atan(0.1)));

  const Vec3 elem{0.0, 14.0, 10.0};
  const ElementAngles axis = element_angles({0.0, 0.0, 10.0}, {0.0, 7.0, 0.0}, elem, {0.0, -1.0, 0.0});
  CHECK(axis.theta_i == doctest::Approx(0.0));
  CHECK(axis.d1 == doctest::Approx(14.0));

  const double c30 = std::cos(deg_to_rad(30.0)), s30 = std::sin(deg_to_rad(30.0));
  const ElementAngles tilted = element_angles({0.0, 0.0, 10.0}, {0.0, 7.0, 0.0}, elem, {0.0, -c30, -s30});
  CHECK(rad_to_deg(tilted.theta_i) == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(tilted.d1 == doctest::Approx(14.0));

  CHECK_THROWS_AS(element_angles(elem, {0.0, 7.0, 0.0}, elem, down), GeometryError);
}

TEST_CASE("single element cascade path loss") {
  SceneLayout layout;
  const ElementLattice lat = single_element();
  // 64 pi^3 (d1 d2)^2 / (GtGr G a b lambda^2) with d1 = d2 = 10
  const long double pi = std::numbers::pi_v<long double>;
  const long double oracle =
      64.0L * pi * pi * pi * 1e4L / (100.0L * 8.0L * 0.0025L * 0.0025L * 0.005L * 0.005L);
  const PathLoss pl = pl_ris({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, lat, layout, 8.0);
  REQUIRE_FALSE(pl.is_unservable());
  CHECK(rel(pl.value(), static_cast<double>(oracle)) < 1e-14);
  CHECK(pl.value() == doctest::Approx(1.5875e14).epsilon(1e-4));

  // doubling both distances: element at z = 20, endpoints at z = 0
  ElementLattice far = lat;
  far.positions[0].z = 20.0;
  const PathLoss pl16 = pl_ris({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, far, layout, 8.0);
  CHECK(rel(pl16.value(), 16.0 * pl.value()) < 1e-14);
}

TEST_CASE("panel facing away from both ends is unservable") {
  SceneLayout layout;
  const ElementLattice lat = single_element();
  const PathLoss pl = pl_ris({0.0, 0.0, 20.0}, {1.0, 0.0, 30.0}, lat, layout, 8.0);
  CHECK(pl.is_unservable());
  CHECK_FALSE(pl.within(1e300));
}

TEST_CASE("direct path loss") {
  SceneLayout layout;
  const PathLoss p50 = pl_bs({0.0, 0.0, 10.0}, {0.0, 50.0, 10.0}, layout);
  CHECK(p50.value() == doctest::Approx(1.5791e8).epsilon(1e-4));
  const PathLoss p100 = pl_bs({0.0, 0.0, 10.0}, {0.0, 100.0, 10.0}, layout);
  CHECK(rel(p100.value(), 4.0 * p50.value()) < 1e-14);

  // farthest corner of a 30 m street
  const PathLoss corner = pl_bs({0.0, 0.0, 10.0}, {50.0, 30.0, 0.0}, layout);
  CHECK(corner.value() == doctest::Approx(2.211e8).epsilon(1e-3));
  CHECK(corner.within(layout.pl_threshold));
}

TEST_CASE("direct path loss matches an independent evaluation") {
  SceneLayout layout;
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(-60.0, 60.0);
  for (int k = 0; k < 1000; ++k) {
    const Vec3 bs{u(gen), u(gen), std::abs(u(gen)) + 1.0};
    const Vec3 user{u(gen), u(gen), 0.0};
    const long double dx = bs.x - user.x, dy = bs.y - user.y, dz = bs.z - user.z;
    const long double k4 = 4.0L * std::numbers::pi_v<long double> / 0.005L;
    const long double oracle = k4 * k4 * (dx * dx + dy * dy + dz * dz) / 100.0L;
    REQUIRE(rel(pl_bs(bs, user, layout).value(), static_cast<double>(oracle)) < 1e-14);
  }
}

TEST_CASE("phase configuration") {
  const double lambda = 0.005;
  CHECK(phase_config(0.5, 0.5, lambda) == 0.0);
  CHECK(phase_config(0.004, 0.0035, lambda) == doctest::Approx(kPi).epsilon(1e-12));
  // (14.0037 + 7.0021) / 0.005 = 4201.16 turns
  CHECK(std::abs(phase_config(14.0037, 7.0021, lambda) - 0.32 * kPi) < 1e-9);
  for (double d : {0.1, 3.7, 21.0001, 99.99}) {
    const double psi = phase_config(d, 1.0, lambda);
    CHECK(psi >= 0.0);
    CHECK(psi < 2.0 * kPi);
  }
}

TEST_CASE("fraunhofer distance") {
  CHECK(fraunhofer_distance(0.0, 0.0025, 0.0025, 0.005) == 0.0);
  CHECK(fraunhofer_distance(1.0, 3.0, 4.0, 2.0) == doctest::Approx(5.0));
  // 2 * 40000 * 0.0025 * sqrt(2) / 0.005 = 40000 sqrt(2)
  CHECK(fraunhofer_distance(40000.0, 0.0025, 0.0025, 0.005) ==
        doctest::Approx(40000.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(fraunhofer_distance(40000.0, 0.0025, 0.0025, 0.005) == doctest::Approx(56568.5).epsilon(1e-6));
}

TEST_CASE("configured phases make the cascade sum coherent") {
  SceneLayout layout;
  const ElementLattice lat = build_lattice(panel(20, 30.0), layout);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> ux(-50.0, 50.0), uy(0.25, 13.75);
  for (int k = 0; k < 25; ++k) {
    const Vec3 user{ux(gen), uy(gen), 0.0};
    const double mag = std::abs(phased_cascade_sum(layout.bs_position(), user, lat, layout.wavelength));
    // amplitude recovered from the reference path loss
    const PathLoss pl = pl_ris(layout.bs_position(), user, lat, layout, 8.0);
    const double amp = std::sqrt(cascade_prefactor(layout, 8.0, lat.elem_a, lat.elem_b) / pl.value());
    CHECK(rel(mag, amp) < 1e-9);
  }
}

TEST_CASE("cascade path loss is reciprocal") {
  SceneLayout layout;
  const ElementLattice lat = build_lattice(panel(16, 25.0), layout);
  const Vec3 bs = layout.bs_position();
  for (const Vec3 user : {Vec3{0.0, 7.0, 0.0}, Vec3{-31.0, 2.0, 0.0}, Vec3{44.0, 12.5, 0.0}}) {
    const double a = pl_ris(bs, user, lat, layout, 8.0).value();
    const double b = pl_ris(user, bs, lat, layout, 8.0).value();
    CHECK(rel(a, b) < 1e-12);
  }
}

TEST_CASE("duplicating every element quarters the path loss") {
  SceneLayout layout;
  const ElementLattice lat = build_lattice(panel(10, 30.0), layout);
  ElementLattice twice = lat;
  twice.positions.insert(twice.positions.end(), lat.positions.begin(), lat.positions.end());
  const Vec3 user{5.0, 4.0, 0.0};
  const double one = pl_ris(layout.bs_position(), user, lat, layout, 8.0).value();
  const double two = pl_ris(layout.bs_position(), user, twice, layout, 8.0).value();
  CHECK(rel(one, 4.0 * two) < 1e-12);
}

TEST_CASE("cascade path loss grows along rays leaving the panel") {
  // A ray from the panel center keeps every element's reflection angle
  // nearly fixed, so only the 1/d2 spreading is left. Along the ground the
  // cos^3 pattern gain still rises while the user approaches boresight.
  SceneLayout layout;
  const RisConfig r = panel(12, 30.0);
  const ElementLattice lat = build_lattice(r, layout);
  const double diag = std::hypot(r.n_cols * r.elem_a, r.n_rows * r.elem_b);
  const Vec3 c = r.center(layout);
  for (const Vec3 dir : {Vec3{0.0, -1.0, -0.6}, Vec3{0.7, -1.0, -0.4}, Vec3{-1.0, -0.5, -0.1},
                         Vec3{0.2, -0.3, -1.0}}) {
    const Vec3 unit = dir * (1.0 / dir.norm());
    double prev = 0.0;
    for (double s = 2.0 * diag; s < 120.0; s *= 1.05) {
      const PathLoss pl = pl_ris(layout.bs_position(), c + unit * s, lat, layout, 8.0);
      REQUIRE_FALSE(pl.is_unservable());
      CHECK(pl.value() >= prev);
      prev = pl.value();
    }
  }
}

TEST_CASE("path loss sentinel semantics") {
  CHECK(PathLoss::linear(3.0).within(3.0));
  CHECK_FALSE(PathLoss::linear(3.1).within(3.0));
  CHECK(PathLoss::unservable().is_unservable());
  CHECK(cascade_path_loss(1.0, 0.0).is_unservable());
  CHECK(cascade_path_loss(4.0, 2.0).value() == 1.0);
}
