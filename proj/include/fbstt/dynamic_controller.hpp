#pragma once

#include "fbstt/types.hpp"
#include "fbstt/vehicle_model.hpp"

namespace fbstt {

// Orientation of the switching term relative to s, where s is built from
// e_v = v_c - v.
//
//  kPlantSurface: tau_c is evaluated on -s, the surface of v - v_c, so that the
//                 switching action drives v towards v_c. Default.
//  kLiteral:      tau_c is evaluated on s directly. With e_v = v_c - v this is
//                 positive feedback and the closed loop diverges; kept so the
//                 behaviour can be reproduced.
enum class SwitchingConvention { kPlantSurface, kLiteral };

struct SmcGains {
  double lambda = 0.4;
  Vec4 k1 = Vec4::Constant(50.0);  // diagonal of K1
  Vec4 k2 = Vec4::Constant(50.0);  // diagonal of K2
  double r_exp = 0.5;              // exponent of |s|, in (0, 1)
  double gamma_adapt = 5.0;        // adaptation rate of tau_est
  double k_fb = 1.0;               // e_v_ddot ~= -k_fb * e_v_dot
  SwitchingConvention switching = SwitchingConvention::kPlantSurface;

  void validate() const;
};

// Controller-side model: same shape as the plant, typically a scaled copy.
using PlantEstimate = PlantParams;

// Per-instance controller memory. Derivatives are backward differences over
// the fixed step and are zero on the first sample; the integral is
// trapezoidal and starts at zero.
struct SlidingState {
  Vec4 e_v = Vec4::Zero();
  Vec4 e_v_dot = Vec4::Zero();
  Vec4 e_v_int = Vec4::Zero();
  Vec4 s = Vec4::Zero();
  Vec4 tau_est = Vec4::Zero();
  Vec4 v_c_dot = Vec4::Zero();

  Vec4 prev_e_v = Vec4::Zero();
  Vec4 prev_v_c = Vec4::Zero();
  bool primed = false;

  // Feed the current control velocity and body velocity; recomputes e_v,
  // its derivative and integral, v_c_dot and s.
  void observe(const BodyVelocity& v_c, const BodyVelocity& v, double dt, double lambda);
};

// s = e_v_dot + 2 lambda e_v + lambda^2 int(e_v).
Vec4 sliding_surface(const Vec4& e_v, const Vec4& e_v_dot, const Vec4& e_v_int, double lambda);

// Model-based part:
//   M^(v_c_dot - k_fb e_v_dot / (2 lambda) + lambda/2 e_v) + C^ v + D^ v + g^.
Vec4 tau_major(const PlantEstimate& est, const Vec4& v_c_dot, const Vec4& e_v, const Vec4& e_v_dot,
               const BodyVelocity& v, const Pose& pose, const SmcGains& gains);

// tau_c = -K1 s - K2 |s|^r sign(s), componentwise.
Vec4 tau_switch(const Vec4& s, const SmcGains& gains);

// One explicit Euler step of tau_est' = gamma * s.
Vec4 adaptive_update(const SlidingState& state, const SmcGains& gains, double dt);

// Argument handed to tau_switch under the configured convention.
Vec4 switching_argument(const Vec4& s, SwitchingConvention convention);

// tau = tau_major + tau_est + tau_switch(switching_argument(s)). Saturation is
// applied downstream by the allocator.
Wrench control_torque(const SlidingState& state, const PlantEstimate& est, const BodyVelocity& v,
                      const Pose& pose, const SmcGains& gains);

}  // namespace fbstt
