#pragma once

#include "fbstt/dynamic_controller.hpp"
#include "fbstt/kinematic_controller.hpp"
#include "fbstt/thruster_allocation.hpp"
#include "fbstt/types.hpp"
#include "fbstt/vehicle_model.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbstt {

struct NoiseConfig {
  double amplitude = 0.0;             // uniform in [-amplitude, amplitude], per pose component
  double filter_time_constant = 0.1;  // s; 0 disables the low-pass stage
};

struct ScenarioConfig {
  std::string name = "default";
  Mode mode = Mode::kFbstt;
  double dt = 0.01;
  double duration = 100.0;
  Pose initial_pose{0.0, -10.0, 0.0, 0.0};
  BodyVelocity initial_velocity;
  std::uint64_t seed = 1;
  NoiseConfig noise;

  PlantParams plant;
  double estimate_factor = 0.9;  // controller model = factor * plant
  ThrusterGeometry thrusters;
  double thrust_max = 500.0;  // N
  KinematicGains kinematic;
  SmcGains smc;

  std::size_t step_count() const;
  void validate() const;
};

struct ReferenceSample {
  Pose pose;
  BodyVelocity body_velocity;
};

// x_d = 10 sin 0.1t, y_d = 10 - 10 cos 0.1t, z_d = 0.5t, psi_d = 0.1t with
// constant body velocity (1, 0, 0.5, 0.1).
ReferenceSample helix_reference(double t);

// Deterministic noise source: std::mt19937_64 (fully specified by the C++
// standard) with an explicit 53-bit mantissa mapping, so sequences do not
// depend on the standard library's distribution implementations.
class UniformNoise {
 public:
  explicit UniformNoise(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double unit();
  // Uniform in [-amplitude, amplitude).
  double symmetric(double amplitude) { return amplitude * (2.0 * unit() - 1.0); }

 private:
  std::mt19937_64 engine_;
};

// Measurement noise plus a first-order low-pass "virtual sensor". With zero
// amplitude the true pose passes straight through.
class SensorModel {
 public:
  SensorModel(const NoiseConfig& cfg, std::uint64_t seed, double dt);

  Pose measure(const Pose& truth);

 private:
  NoiseConfig cfg_;
  UniformNoise noise_;
  double blend_;
  Vec4 filtered_ = Vec4::Zero();
  bool primed_ = false;
};

struct TraceRecord {
  double t = 0.0;
  Pose pose;
  Pose pose_d;
  TrajectoryError e;  // true tracking error p_d - p
  BodyVelocity v;
  BodyVelocity v_c;
  Wrench tau_demand;
  Vec5 t_bar = Vec5::Zero();  // normalized thruster demand before clamping
  std::array<bool, 5> saturated{};

  // Diagnostics not written to trace.csv.
  Pose measured;
  TrajectoryError e_measured;  // error actually seen by the controller
  Vec4 v_e = Vec4::Zero();     // refined error fed to the backstepping law
  Vec4 s = Vec4::Zero();
  Vec4 tau_est = Vec4::Zero();
  Vec4 tau_bar_realized = Vec4::Zero();
};

using Trace = std::vector<TraceRecord>;

class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(double t);
  double time() const { return time_; }

 private:
  double time_;
};

inline constexpr double kDivergenceLimit = 1e6;

// Classic fourth-order Runge-Kutta on the (pose, body velocity) state with the
// wrench held constant over the step.
void integrate_plant(const VehicleModel& model, Pose& pose, BodyVelocity& vel, const Wrench& tau, double dt);

// Closed loop: reference -> sensor -> error -> kinematic law -> SMC ->
// allocation/saturation -> plant.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig cfg);

  const ScenarioConfig& config() const { return cfg_; }
  const TorqueLimits& limits() const { return limits_; }
  std::size_t steps_taken() const { return step_; }
  bool done() const { return step_ >= cfg_.step_count(); }
  double time() const { return static_cast<double>(step_) * cfg_.dt; }

  const Pose& pose() const { return pose_; }
  const BodyVelocity& velocity() const { return vel_; }
  const SlidingState& sliding_state() const { return smc_; }

  // Throws DivergenceError if the state leaves the finite/bounded region.
  TraceRecord step();

 private:
  ScenarioConfig cfg_;
  VehicleModel model_;
  PlantEstimate estimate_;
  TorqueLimits limits_;
  SensorModel sensor_;
  Pose pose_;
  BodyVelocity vel_;
  SlidingState smc_;
  std::size_t step_ = 0;
};

Trace run(const ScenarioConfig& cfg);

// Kinematics-only loop: the vehicle follows p_dot = J(p) v_c exactly (v_c held
// over each step, RK4 on the kinematics). Noise-free.
struct KinematicRecord {
  double t = 0.0;
  TrajectoryError e;
  Vec4 v_e = Vec4::Zero();
  BodyVelocity v_c;
  double gamma0 = 0.0;
};

std::vector<KinematicRecord> run_kinematic_loop(const ScenarioConfig& cfg);

struct ErrorStats {
  double window_start = 0.0;  // time of the first record in the window
  std::size_t samples = 0;
  double mean_position_error = 0.0;  // mean of |(e_x, e_y, e_z)|
  double max_position_error = 0.0;
  Vec4 mean_abs_error = Vec4::Zero();
  Vec4 max_abs_error = Vec4::Zero();
};

// Statistics of the true error over records with t >= t_from.
ErrorStats error_stats(const Trace& trace, double t_from);

struct Metrics {
  std::size_t records = 0;
  Vec4 max_abs_vc = Vec4::Zero();
  Vec4 peak_vc = Vec4::Zero();  // signed value at the max |v_c|
  Vec5 max_abs_t_bar = Vec5::Zero();
  Vec5 peak_t_bar = Vec5::Zero();  // signed value at the max |T_bar|
  std::size_t saturated_steps = 0;
  ErrorStats final_window;  // last 10% of the run
};

// Throws std::invalid_argument on an empty trace.
Metrics metrics(const Trace& trace);

}  // namespace fbstt
