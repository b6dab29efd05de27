#pragma once

#include <Eigen/Dense>

#include <cmath>

namespace fbstt {

using Vec4 = Eigen::Matrix<double, 4, 1>;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Mat45 = Eigen::Matrix<double, 4, 5>;
using Mat54 = Eigen::Matrix<double, 5, 4>;

// Ordering of every 4-vector in this library: surge/x, sway/y, heave/z, yaw/psi.
enum Axis : int { kX = 0, kY = 1, kZ = 2, kPsi = 3 };

enum class Mode { kFbstt, kBstt };

const char* to_string(Mode mode);

// World-frame configuration. psi is never wrapped so psi_d - psi stays continuous.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double psi = 0.0;

  Vec4 vec() const { return {x, y, z, psi}; }
  static Pose from(const Vec4& p) { return {p[0], p[1], p[2], p[3]}; }
};

// Body-frame rates (u, v, w, r). Also used for control velocities and the
// fuzzy-refined error signal.
struct BodyVelocity {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
  double r = 0.0;

  Vec4 vec() const { return {u, v, w, r}; }
  static BodyVelocity from(const Vec4& b) { return {b[0], b[1], b[2], b[3]}; }
};

// Generalized force (N, N, N, N*m).
struct Wrench {
  double tau_x = 0.0;
  double tau_y = 0.0;
  double tau_z = 0.0;
  double tau_psi = 0.0;

  Vec4 vec() const { return {tau_x, tau_y, tau_z, tau_psi}; }
  static Wrench from(const Vec4& t) { return {t[0], t[1], t[2], t[3]}; }
};

// e = p_d - p, componentwise.
struct TrajectoryError {
  double e_x = 0.0;
  double e_y = 0.0;
  double e_z = 0.0;
  double e_psi = 0.0;

  Vec4 vec() const { return {e_x, e_y, e_z, e_psi}; }
  static TrajectoryError from(const Vec4& e) { return {e[0], e[1], e[2], e[3]}; }
  static TrajectoryError between(const Pose& desired, const Pose& actual) {
    return from(desired.vec() - actual.vec());
  }
};

template <typename V>
bool all_finite(const V& v) {
  return v.array().isFinite().all();
}

}  // namespace fbstt
