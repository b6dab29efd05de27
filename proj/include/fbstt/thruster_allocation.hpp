#pragma once

#include "fbstt/types.hpp"

#include <array>

namespace fbstt {

// Four horizontal thrusters canted by alpha at the hull edges (T1..T4) and one
// vertical thruster at the centre (T5).
struct ThrusterGeometry {
  double alpha = M_PI / 4.0;  // rad
  double a = 1.0;             // m, body length span
  double b = 1.0;             // m, body width span

  // Yaw moment arm, always derived from the current alpha/a/b.
  double moment_arm() const { return 0.5 * a * std::cos(alpha) + 0.5 * b * std::sin(alpha); }

  void validate() const;
};

struct ThrusterForces {
  Vec5 force = Vec5::Zero();  // N, or dimensionless when normalized by T_m
};

struct TorqueLimits {
  double thrust_max = 0.0;  // T_m, N per thruster
  Wrench tau_max;           // per-axis maxima
};

struct AllocationResult {
  Vec5 demanded = Vec5::Zero();  // normalized, before clamping
  Vec5 applied = Vec5::Zero();   // normalized, clamped to [-1, 1]
  std::array<bool, 5> saturated{};
  Vec4 tau_bar_realized = Vec4::Zero();  // normalized realized wrench
  Wrench tau_realized;                   // physical realized wrench

  bool any_saturated() const;
};

// Normalized mixing matrix: tau_bar = B_bar * T_bar. Independent of geometry.
//
// The yaw row is (1/4, -1/4, -1/4, 1/4, 0) as in the normalized relation;
// the component form of the unnormalized yaw torque uses (A, -A, A, -A)
// instead. torques_from_forces follows the matrix form so that the physical
// and normalized paths agree.
const Mat45& mixing_matrix();

// Minimum-norm generalized inverse of mixing_matrix(). The rows of B_bar are
// mutually orthogonal with squared norms (1/4, 1/4, 1, 1/4), so the
// pseudo-inverse is B_bar^T diag(4, 4, 1, 4).
const Mat54& mixing_pseudo_inverse();

// Physical torque-force transition matrix (4x5) for the given geometry.
Mat45 transition_matrix(const ThrusterGeometry& geom);

Wrench torques_from_forces(const ThrusterGeometry& geom, const ThrusterForces& forces);

TorqueLimits max_torques(const ThrusterGeometry& geom, double thrust_max);

// tau_bar = tau / tau_m, T_bar = B_bar^+ tau_bar, clamp each T_bar_i to
// [-1, 1], then recompute the wrench the clamped thrusters actually produce.
AllocationResult allocate_and_saturate(const Wrench& tau_demand, const TorqueLimits& limits);

}  // namespace fbstt
