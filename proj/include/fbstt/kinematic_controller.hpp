#pragma once

#include "fbstt/types.hpp"

namespace fbstt {

struct KinematicGains {
  double k = 2.5;      // horizontal-plane gain
  double k_z = 1.0;    // heave gain
  double k_psi = 1.0;  // yaw gain
  Vec4 v_max = Vec4(1.5, 1.5, 0.7, 0.15);  // m/s, m/s, m/s, rad/s

  void validate() const;
};

struct FuzzyOutput {
  Vec4 inference = Vec4::Zero();  // M_f, each entry in [-1, 1]
  Vec4 velocity = Vec4::Zero();   // v_e = M_f .* v_max
};

// Rule-base thresholds in membership space.
inline constexpr double kDeadZone = 0.01;
inline constexpr double kSaturationZone = 0.99;

// mu = e / (|e| + 1), odd and strictly increasing onto (-1, 1).
double fuzzify(double error);

// 0 if |mu| <= 0.01, mu if 0.01 < |mu| < 0.99, sign(e) if |mu| >= 0.99.
// The jumps at both thresholds are intentional.
double infer(double mu, double error);

Vec4 fuzzy_velocity(const Vec4& inference, const Vec4& v_max);

FuzzyOutput fuzzy_refine(const TrajectoryError& e, const Vec4& v_max);

// Error signal fed to the backstepping law: the fuzzy output in FBSTT mode,
// the raw trajectory error in BSTT mode.
Vec4 refined_error(Mode mode, const TrajectoryError& e, const Vec4& v_max);

// Backstepping control velocity
//   u_c = k(ve_x cos psi + ve_y sin psi) + u_d cos ve_psi - v_d sin ve_psi
//   v_c = k(-ve_x sin psi + ve_y cos psi) + u_d sin ve_psi - v_d cos ve_psi
//   w_c = w_d + k_z ve_z
//   r_c = r_d + k_psi ve_psi
// The "- v_d cos ve_psi" term is kept as given; helix scenarios have v_d = 0.
BodyVelocity backstepping_law(const Vec4& ve, double psi, const BodyVelocity& desired,
                              const KinematicGains& gains);

BodyVelocity control_velocity(Mode mode, const TrajectoryError& e, double psi,
                              const BodyVelocity& desired, const KinematicGains& gains);

// Gamma_0 = (e_x^2 + e_y^2 + e_z^2 + e_psi^2) / 2.
double lyapunov_gamma0(const TrajectoryError& e);

}  // namespace fbstt
