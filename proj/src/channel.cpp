#include "risdeploy/channel.hpp"

#include <algorithm>
#include <cmath>

#include "risdeploy/errors.hpp"

namespace risdeploy {

double element_pattern(double theta, double exponent) {
  if (theta > kPi / 2.0) return 0.0;
  const double c = std::max(0.0, std::cos(theta));
  return std::pow(c, exponent);
}

namespace {

double safe_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

// In-plane reference axes: the projection of global x (or y when x is
// parallel to the normal) and its right-handed complement.
void panel_axes(const Vec3& normal, Vec3& u, Vec3& w) {
  Vec3 ref{1.0, 0.0, 0.0};
  if (std::abs(normal.dot(ref)) > 0.999) ref = {0.0, 1.0, 0.0};
  u = ref - normal * normal.dot(ref);
  u = u * (1.0 / u.norm());
  w = normal.cross(u);
}

}  // namespace

ElementAngles element_angles(const Vec3& bs, const Vec3& user, const Vec3& elem_pos,
                             const Vec3& normal) {
  const Vec3 to_bs = bs - elem_pos;
  const Vec3 to_user = user - elem_pos;
  ElementAngles a;
  a.d1 = to_bs.norm();
  a.d2 = to_user.norm();
  if (!(a.d1 > 0.0) || !(a.d2 > 0.0)) {
    throw GeometryError("element coincides with the BS or the user");
  }
  a.theta_i = safe_acos(normal.dot(to_bs) / a.d1);
  a.theta_r = safe_acos(normal.dot(to_user) / a.d2);

  Vec3 u, w;
  panel_axes(normal, u, w);
  a.phi_i = std::atan2(to_bs.dot(w), to_bs.dot(u));
  a.phi_r = std::atan2(to_user.dot(w), to_user.dot(u));
  return a;
}

double cascade_prefactor(const SceneLayout& layout, double element_gain, double elem_a,
                         double elem_b) {
  const double lambda = layout.wavelength;
  return 64.0 * kPi * kPi * kPi /
         (layout.gains_tx_rx * element_gain * elem_a * elem_b * lambda * lambda);
}

PathLoss cascade_path_loss(double prefactor, double amplitude) {
  if (!(amplitude > 0.0)) return PathLoss::unservable();
  return PathLoss::linear(prefactor / (amplitude * amplitude));
}

PathLoss pl_ris(const Vec3& bs, const Vec3& user, const ElementLattice& lattice,
                const SceneLayout& layout, double element_gain) {
  const double exponent = lattice.pattern_exponent;
  double amplitude = 0.0;
  for (const Vec3& p : lattice.positions) {
    const ElementAngles a = element_angles(bs, user, p, lattice.normal);
    const double f =
        element_pattern(a.theta_i, exponent) * element_pattern(a.theta_r, exponent);
    if (f == 0.0) continue;
    amplitude += std::sqrt(f) / (a.d1 * a.d2);
  }
  return cascade_path_loss(
      cascade_prefactor(layout, element_gain, lattice.elem_a, lattice.elem_b), amplitude);
}

PathLoss pl_bs(const Vec3& bs, const Vec3& user, const SceneLayout& layout) {
  const Vec3 d = bs - user;
  const double k = 4.0 * kPi / layout.wavelength;
  return PathLoss::linear(k * k * d.dot(d) / layout.gains_tx_rx);
}

double phase_config(double d1, double d2, double wavelength) {
  const double turns = (d1 + d2) / wavelength;
  double frac = turns - std::floor(turns);
  if (frac >= 1.0) frac = 0.0;
  return 2.0 * kPi * frac;
}

std::complex<double> phased_cascade_sum(const Vec3& bs, const Vec3& user,
                                        const ElementLattice& lattice, double wavelength) {
  const double exponent = lattice.pattern_exponent;
  std::complex<double> sum{0.0, 0.0};
  for (const Vec3& p : lattice.positions) {
    const ElementAngles a = element_angles(bs, user, p, lattice.normal);
    const double f =
        element_pattern(a.theta_i, exponent) * element_pattern(a.theta_r, exponent);
    if (f == 0.0) continue;
    const double propagation = -2.0 * kPi * (a.d1 + a.d2) / wavelength;
    const double psi = phase_config(a.d1, a.d2, wavelength);
    sum += std::polar(std::sqrt(f) / (a.d1 * a.d2), propagation + psi);
  }
  return sum;
}

double fraunhofer_distance(double n_elements, double a, double b, double wavelength) {
  return 2.0 * n_elements * std::sqrt(a * a + b * b) / wavelength;
}

}  // namespace risdeploy
