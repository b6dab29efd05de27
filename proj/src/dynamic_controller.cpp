#include "fbstt/dynamic_controller.hpp"

#include <stdexcept>

namespace fbstt {

void SmcGains::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("smc.lambda: must be positive");
  if (!(k1.array() > 0.0).all() || !all_finite(k1)) throw std::invalid_argument("smc.k1: must be positive");
  if (!(k2.array() > 0.0).all() || !all_finite(k2)) throw std::invalid_argument("smc.k2: must be positive");
  if (!(r_exp > 0.0 && r_exp < 1.0)) throw std::invalid_argument("smc.r_exp: must lie in (0, 1)");
  if (!(gamma_adapt > 0.0) || !std::isfinite(gamma_adapt)) {
    throw std::invalid_argument("smc.gamma: must be positive");
  }
  if (!(k_fb > 0.0) || !std::isfinite(k_fb)) throw std::invalid_argument("smc.k_fb: must be positive");
}

void SlidingState::observe(const BodyVelocity& v_c, const BodyVelocity& v, double dt, double lambda) {
  const Vec4 vc = v_c.vec();
  e_v = vc - v.vec();
  if (primed) {
    e_v_dot = (e_v - prev_e_v) / dt;
    v_c_dot = (vc - prev_v_c) / dt;
    e_v_int += 0.5 * (e_v + prev_e_v) * dt;
  } else {
    e_v_dot.setZero();
    v_c_dot.setZero();
    primed = true;
  }
  prev_e_v = e_v;
  prev_v_c = vc;
  s = sliding_surface(e_v, e_v_dot, e_v_int, lambda);
}

Vec4 sliding_surface(const Vec4& e_v, const Vec4& e_v_dot, const Vec4& e_v_int, double lambda) {
  return e_v_dot + 2.0 * lambda * e_v + lambda * lambda * e_v_int;
}

Vec4 tau_major(const PlantEstimate& est, const Vec4& v_c_dot, const Vec4& e_v, const Vec4& e_v_dot,
               const BodyVelocity& v, const Pose& pose, const SmcGains& gains) {
  const Vec4 reference_accel =
      v_c_dot - gains.k_fb * e_v_dot / (2.0 * gains.lambda) + 0.5 * gains.lambda * e_v;
  return est.mass * reference_accel + plant_bias(est, pose, v);
}

Vec4 tau_switch(const Vec4& s, const SmcGains& gains) {
  Vec4 out;
  for (int i = 0; i < 4; ++i) {
    const double sign = s[i] > 0.0 ? 1.0 : (s[i] < 0.0 ? -1.0 : 0.0);
    out[i] = -gains.k1[i] * s[i] - gains.k2[i] * std::pow(std::abs(s[i]), gains.r_exp) * sign;
  }
  return out;
}

Vec4 adaptive_update(const SlidingState& state, const SmcGains& gains, double dt) {
  return state.tau_est + gains.gamma_adapt * state.s * dt;
}

Vec4 switching_argument(const Vec4& s, SwitchingConvention convention) {
  return convention == SwitchingConvention::kPlantSurface ? Vec4(-s) : s;
}

Wrench control_torque(const SlidingState& state, const PlantEstimate& est, const BodyVelocity& v,
                      const Pose& pose, const SmcGains& gains) {
  const Vec4 major = tau_major(est, state.v_c_dot, state.e_v, state.e_v_dot, v, pose, gains);
  const Vec4 sw = tau_switch(switching_argument(state.s, gains.switching), gains);
  return Wrench::from(major + state.tau_est + sw);
}

}  // namespace fbstt
