#pragma once

#include "fbstt/types.hpp"

namespace fbstt {

// Physical parameters of the 4-DOF (surge, sway, heave, yaw) vehicle.
//
// The defaults are Falcon-class stand-ins; the vehicle's real hydrodynamic
// coefficients are not published, so every entry is overridable from the
// scenario file.
struct PlantParams {
  Mat4 mass = Vec4(120.0, 150.0, 140.0, 35.0).asDiagonal();
  Mat4 linear_drag = Vec4(40.0, 60.0, 60.0, 15.0).asDiagonal();
  Mat4 quadratic_drag = Vec4(25.0, 35.0, 35.0, 10.0).asDiagonal();
  Vec4 restoring = Vec4::Zero();
  // Surge and sway mass terms (rigid body + added mass) that generate C(v).
  double coriolis_mass_u = 120.0;
  double coriolis_mass_v = 150.0;

  // Uniform scaling of every coefficient, used to build controller estimates.
  PlantParams scaled(double factor) const;

  // Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

struct PlantMatrices {
  Mat4 coriolis;
  Mat4 damping;
};

// p_dot = J(psi) v: planar rotation on (u, v), identity on (w, r).
Mat4 rotation_jacobian(double psi);
Vec4 kinematic_transform(const Pose& pose, const BodyVelocity& vel);

// C(v) in skew-symmetric form (v^T C v = 0) and D(v) = D_lin + D_quad diag|v|.
PlantMatrices plant_matrices(const PlantParams& params, const BodyVelocity& vel);

// C(v)v + D(v)v + g, the velocity-dependent side of M v_dot + ... = tau.
Vec4 plant_bias(const PlantParams& params, const Pose& pose, const BodyVelocity& vel);

// Dynamic model with M^-1 factored once.
class VehicleModel {
 public:
  explicit VehicleModel(PlantParams params);

  const PlantParams& params() const { return params_; }
  const Mat4& mass_inverse() const { return mass_inv_; }

  // v_dot = M^-1 (tau - C(v)v - D(v)v - g(p)).
  Vec4 acceleration(const Pose& pose, const BodyVelocity& vel, const Wrench& tau) const;

 private:
  PlantParams params_;
  Mat4 mass_inv_;
};

}  // namespace fbstt
