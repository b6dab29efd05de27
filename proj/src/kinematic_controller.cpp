#include "fbstt/kinematic_controller.hpp"

#include <stdexcept>

namespace fbstt {

void KinematicGains::validate() const {
  if (!(k > 0.0)) throw std::invalid_argument("kinematic.k: must be positive");
  if (!(k_z > 0.0)) throw std::invalid_argument("kinematic.k_z: must be positive");
  if (!(k_psi > 0.0)) throw std::invalid_argument("kinematic.k_psi: must be positive");
  if (!(v_max.array() > 0.0).all() || !all_finite(v_max)) {
    throw std::invalid_argument("kinematic.v_max: every entry must be positive");
  }
}

double fuzzify(double error) { return error / (std::abs(error) + 1.0); }

double infer(double mu, double error) {
  const double m = std::abs(mu);
  if (m <= kDeadZone) return 0.0;
  if (m < kSaturationZone) return mu;
  return error > 0.0 ? 1.0 : (error < 0.0 ? -1.0 : 0.0);
}

Vec4 fuzzy_velocity(const Vec4& inference, const Vec4& v_max) { return inference.cwiseProduct(v_max); }

FuzzyOutput fuzzy_refine(const TrajectoryError& e, const Vec4& v_max) {
  FuzzyOutput out;
  const Vec4 err = e.vec();
  for (int i = 0; i < 4; ++i) {
    out.inference[i] = infer(fuzzify(err[i]), err[i]);
  }
  out.velocity = fuzzy_velocity(out.inference, v_max);
  return out;
}

Vec4 refined_error(Mode mode, const TrajectoryError& e, const Vec4& v_max) {
  if (mode == Mode::kBstt) return e.vec();
  return fuzzy_refine(e, v_max).velocity;
}

BodyVelocity backstepping_law(const Vec4& ve, double psi, const BodyVelocity& desired,
                              const KinematicGains& gains) {
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  const double cy = std::cos(ve[kPsi]);
  const double sy = std::sin(ve[kPsi]);
  BodyVelocity vc;
  vc.u = gains.k * (ve[kX] * c + ve[kY] * s) + desired.u * cy - desired.v * sy;
  vc.v = gains.k * (-ve[kX] * s + ve[kY] * c) + desired.u * sy - desired.v * cy;
  vc.w = desired.w + gains.k_z * ve[kZ];
  vc.r = desired.r + gains.k_psi * ve[kPsi];
  return vc;
}

BodyVelocity control_velocity(Mode mode, const TrajectoryError& e, double psi,
                              const BodyVelocity& desired, const KinematicGains& gains) {
  return backstepping_law(refined_error(mode, e, gains.v_max), psi, desired, gains);
}

double lyapunov_gamma0(const TrajectoryError& e) { return 0.5 * e.vec().squaredNorm(); }

}  // namespace fbstt
