#include "fbstt/vehicle_model.hpp"

#include <stdexcept>
#include <string>

namespace fbstt {

const char* to_string(Mode mode) { return mode == Mode::kFbstt ? "fbstt" : "bstt"; }

PlantParams PlantParams::scaled(double factor) const {
  PlantParams out = *this;
  out.mass *= factor;
  out.linear_drag *= factor;
  out.quadratic_drag *= factor;
  out.restoring *= factor;
  out.coriolis_mass_u *= factor;
  out.coriolis_mass_v *= factor;
  return out;
}

void PlantParams::validate() const {
  if (!all_finite(mass) || !all_finite(linear_drag) || !all_finite(quadratic_drag) ||
      !all_finite(restoring) || !std::isfinite(coriolis_mass_u) || !std::isfinite(coriolis_mass_v)) {
    throw std::invalid_argument("plant: all coefficients must be finite");
  }
  if (!mass.isApprox(mass.transpose(), 1e-12)) {
    throw std::invalid_argument("plant.mass: must be symmetric");
  }
  Eigen::LLT<Mat4> llt(mass);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("plant.mass: must be positive definite");
  }
  for (int i = 0; i < 4; ++i) {
    if (linear_drag(i, i) < 0.0) {
      throw std::invalid_argument("plant.linear_drag: diagonal entry " + std::to_string(i) +
                                  " is negative");
    }
    if (quadratic_drag(i, i) < 0.0) {
      throw std::invalid_argument("plant.quadratic_drag: diagonal entry " + std::to_string(i) +
                                  " is negative");
    }
  }
}

Mat4 rotation_jacobian(double psi) {
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  Mat4 j;
  j << c, -s, 0, 0,
       s,  c, 0, 0,
       0,  0, 1, 0,
       0,  0, 0, 1;
  return j;
}

Vec4 kinematic_transform(const Pose& pose, const BodyVelocity& vel) {
  return rotation_jacobian(pose.psi) * vel.vec();
}

PlantMatrices plant_matrices(const PlantParams& params, const BodyVelocity& vel) {
  // Horizontal-plane Coriolis/centripetal terms; heave does not couple.
  const double mu = params.coriolis_mass_u * vel.u;
  const double mv = params.coriolis_mass_v * vel.v;
  Mat4 c = Mat4::Zero();
  c(kX, kPsi) = -mv;
  c(kY, kPsi) = mu;
  c(kPsi, kX) = mv;
  c(kPsi, kY) = -mu;

  const Vec4 speed = vel.vec().cwiseAbs();
  Mat4 d = params.linear_drag + params.quadratic_drag * speed.asDiagonal();
  return {c, d};
}

Vec4 plant_bias(const PlantParams& params, const Pose& /*pose*/, const BodyVelocity& vel) {
  const auto [c, d] = plant_matrices(params, vel);
  const Vec4 v = vel.vec();
  // g(p) is a constant residual here; roll and pitch are not modelled.
  return c * v + d * v + params.restoring;
}

VehicleModel::VehicleModel(PlantParams params) : params_(std::move(params)) {
  params_.validate();
  Eigen::FullPivLU<Mat4> lu(params_.mass);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("plant.mass: not invertible");
  }
  mass_inv_ = lu.inverse();
}

Vec4 VehicleModel::acceleration(const Pose& pose, const BodyVelocity& vel, const Wrench& tau) const {
  return mass_inv_ * (tau.vec() - plant_bias(params_, pose, vel));
}

}  // namespace fbstt
