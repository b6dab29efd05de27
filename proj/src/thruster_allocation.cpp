#include "fbstt/thruster_allocation.hpp"

#include <algorithm>
#include <stdexcept>

namespace fbstt {

void ThrusterGeometry::validate() const {
  if (!(alpha > 0.0 && alpha < M_PI / 2.0)) {
    throw std::invalid_argument("thrusters.alpha: must lie in (0, pi/2)");
  }
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("thrusters.a: must be positive");
  }
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw std::invalid_argument("thrusters.b: must be positive");
  }
}

bool AllocationResult::any_saturated() const {
  return std::any_of(saturated.begin(), saturated.end(), [](bool s) { return s; });
}

const Mat45& mixing_matrix() {
  static const Mat45 b = [] {
    Mat45 m;
    m << 0.25,  0.25,  0.25,  0.25, 0.0,
         0.25, -0.25,  0.25, -0.25, 0.0,
         0.0,   0.0,   0.0,   0.0,  1.0,
         0.25, -0.25, -0.25,  0.25, 0.0;
    return m;
  }();
  return b;
}

const Mat54& mixing_pseudo_inverse() {
  static const Mat54 pinv = mixing_matrix().transpose() * Vec4(4.0, 4.0, 1.0, 4.0).asDiagonal();
  return pinv;
}

Mat45 transition_matrix(const ThrusterGeometry& geom) {
  const double c = std::cos(geom.alpha);
  const double s = std::sin(geom.alpha);
  const double arm = geom.moment_arm();
  Mat45 m;
  m << c,    c,    c,    c,   0.0,
       s,   -s,    s,   -s,   0.0,
       0.0,  0.0,  0.0,  0.0, 1.0,
       arm, -arm, -arm,  arm, 0.0;
  return m;
}

Wrench torques_from_forces(const ThrusterGeometry& geom, const ThrusterForces& forces) {
  return Wrench::from(transition_matrix(geom) * forces.force);
}

TorqueLimits max_torques(const ThrusterGeometry& geom, double thrust_max) {
  if (!(thrust_max > 0.0) || !std::isfinite(thrust_max)) {
    throw std::invalid_argument("thrusters.thrust_max: must be positive");
  }
  TorqueLimits lim;
  lim.thrust_max = thrust_max;
  lim.tau_max = {4.0 * thrust_max * std::cos(geom.alpha), 4.0 * thrust_max * std::sin(geom.alpha),
                 thrust_max, 4.0 * thrust_max * geom.moment_arm()};
  return lim;
}

AllocationResult allocate_and_saturate(const Wrench& tau_demand, const TorqueLimits& limits) {
  AllocationResult out;
  const Vec4 tau_max = limits.tau_max.vec();
  const Vec4 tau_bar = tau_demand.vec().cwiseQuotient(tau_max);
  out.demanded = mixing_pseudo_inverse() * tau_bar;
  for (int i = 0; i < 5; ++i) {
    const double t = out.demanded[i];
    out.applied[i] = std::clamp(t, -1.0, 1.0);
    out.saturated[i] = out.applied[i] != t;
  }
  out.tau_bar_realized = mixing_matrix() * out.applied;
  out.tau_realized = Wrench::from(out.tau_bar_realized.cwiseProduct(tau_max));
  return out;
}

}  // namespace fbstt
