#pragma once

#include <complex>
#include <cstddef>

#include "risdeploy/geometry.hpp"
#include "risdeploy/scene.hpp"

namespace risdeploy {

// Linear path loss, or the "unservable" sentinel (infinite loss).
class PathLoss {
 public:
  constexpr PathLoss() = default;
  static constexpr PathLoss linear(double value) { return PathLoss(value, false); }
  static constexpr PathLoss unservable() { return PathLoss(0.0, true); }

  constexpr bool is_unservable() const { return unservable_; }
  // Only meaningful when !is_unservable().
  constexpr double value() const { return value_; }
  constexpr bool within(double threshold) const { return !unservable_ && value_ <= threshold; }

  constexpr bool operator==(const PathLoss&) const = default;

 private:
  constexpr PathLoss(double v, bool u) : value_(v), unservable_(u) {}
  double value_ = 0.0;
  bool unservable_ = true;
};

struct LinkBudget {
  PathLoss pl_ris;
  PathLoss pl_bs;
};

struct ElementAngles {
  double theta_i = 0.0;
  double phi_i = 0.0;
  double theta_r = 0.0;
  double phi_r = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// cos^exponent(theta) on [0, pi/2], zero behind the panel.
double element_pattern(double theta, double exponent);

// Incidence/reflection angles at one element. Elevations are measured from
// the element normal; azimuths are measured in the panel plane from the
// projection of the global x axis. Throws GeometryError on zero distances.
ElementAngles element_angles(const Vec3& bs, const Vec3& user, const Vec3& elem_pos,
                             const Vec3& normal);

// Path loss of the BS-RIS-user cascade with optimal phases, evaluated
// element by element. This is the literal reference formula; raster code
// uses CascadeTables (cascade.hpp).
PathLoss pl_ris(const Vec3& bs, const Vec3& user, const ElementLattice& lattice,
                const SceneLayout& layout, double element_gain);

// Prefactor (1 / (GtGr G)) * 64 pi^3 / (a b lambda^2) shared by all cascade
// path losses; PL = prefactor / amplitude^2.
double cascade_prefactor(const SceneLayout& layout, double element_gain, double elem_a,
                         double elem_b);

// Maps a coherent amplitude sum to a path loss (zero amplitude -> unservable).
PathLoss cascade_path_loss(double prefactor, double amplitude);

PathLoss pl_bs(const Vec3& bs, const Vec3& user, const SceneLayout& layout);

// Optimal phase shift of one element, in [0, 2 pi).
double phase_config(double d1, double d2, double wavelength);

// Complex cascade sum with per-element propagation phase -2 pi (d1 + d2) / lambda
// compensated by phase_config. Its magnitude is the coherent amplitude.
std::complex<double> phased_cascade_sum(const Vec3& bs, const Vec3& user,
                                        const ElementLattice& lattice, double wavelength);

// 2 N sqrt(a^2 + b^2) / lambda.
double fraunhofer_distance(double n_elements, double a, double b, double wavelength);

}  // namespace risdeploy
