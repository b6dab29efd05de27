#include "fbstt/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fbstt {

namespace {

using State8 = Eigen::Matrix<double, 8, 1>;

template <typename F>
State8 rk4(const F& f, const State8& x, double dt) {
  const State8 k1 = f(x);
  const State8 k2 = f(x + 0.5 * dt * k1);
  const State8 k3 = f(x + 0.5 * dt * k2);
  const State8 k4 = f(x + dt * k3);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

bool bounded(const Pose& p, const BodyVelocity& v) {
  const Vec4 pv = p.vec();
  const Vec4 vv = v.vec();
  return all_finite(pv) && all_finite(vv) && pv.cwiseAbs().maxCoeff() <= kDivergenceLimit &&
         vv.cwiseAbs().maxCoeff() <= kDivergenceLimit;
}

}  // namespace

std::size_t ScenarioConfig::step_count() const {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

void ScenarioConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt: must be positive");
  if (!(duration >= dt) || !std::isfinite(duration)) {
    throw std::invalid_argument("duration: must be at least dt");
  }
  if (!all_finite(initial_pose.vec())) throw std::invalid_argument("initial_pose: must be finite");
  if (!all_finite(initial_velocity.vec())) throw std::invalid_argument("initial_velocity: must be finite");
  if (!(noise.amplitude >= 0.0) || !std::isfinite(noise.amplitude)) {
    throw std::invalid_argument("noise.amplitude: must be non-negative");
  }
  if (!(noise.filter_time_constant >= 0.0) || !std::isfinite(noise.filter_time_constant)) {
    throw std::invalid_argument("noise.filter_time_constant: must be non-negative");
  }
  if (!(estimate_factor > 0.0) || !std::isfinite(estimate_factor)) {
    throw std::invalid_argument("smc.estimate_factor: must be positive");
  }
  plant.validate();
  thrusters.validate();
  if (!(thrust_max > 0.0) || !std::isfinite(thrust_max)) {
    throw std::invalid_argument("thrusters.thrust_max: must be positive");
  }
  kinematic.validate();
  smc.validate();
}

ReferenceSample helix_reference(double t) {
  ReferenceSample ref;
  ref.pose = {10.0 * std::sin(0.1 * t), 10.0 - 10.0 * std::cos(0.1 * t), 0.5 * t, 0.1 * t};
  ref.body_velocity = {1.0, 0.0, 0.5, 0.1};
  return ref;
}

double UniformNoise::unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

SensorModel::SensorModel(const NoiseConfig& cfg, std::uint64_t seed, double dt)
    : cfg_(cfg), noise_(seed), blend_(dt / (cfg.filter_time_constant + dt)) {}

Pose SensorModel::measure(const Pose& truth) {
  if (cfg_.amplitude == 0.0) return truth;
  Vec4 raw = truth.vec();
  for (int i = 0; i < 4; ++i) raw[i] += noise_.symmetric(cfg_.amplitude);
  if (!primed_) {
    filtered_ = raw;
    primed_ = true;
  } else {
    filtered_ += blend_ * (raw - filtered_);
  }
  return Pose::from(filtered_);
}

DivergenceError::DivergenceError(double t)
    : std::runtime_error("simulation diverged at t=" + std::to_string(t) + " s"), time_(t) {}

void integrate_plant(const VehicleModel& model, Pose& pose, BodyVelocity& vel, const Wrench& tau, double dt) {
  const auto deriv = [&](const State8& x) {
    const Pose p = Pose::from(x.head<4>());
    const BodyVelocity v = BodyVelocity::from(x.tail<4>());
    State8 dx;
    dx.head<4>() = kinematic_transform(p, v);
    dx.tail<4>() = model.acceleration(p, v, tau);
    return dx;
  };
  State8 x;
  x << pose.vec(), vel.vec();
  x = rk4(deriv, x, dt);
  pose = Pose::from(x.head<4>());
  vel = BodyVelocity::from(x.tail<4>());
}

Simulation::Simulation(ScenarioConfig cfg)
    : cfg_((cfg.validate(), std::move(cfg))),
      model_(cfg_.plant),
      estimate_(cfg_.plant.scaled(cfg_.estimate_factor)),
      limits_(max_torques(cfg_.thrusters, cfg_.thrust_max)),
      sensor_(cfg_.noise, cfg_.seed, cfg_.dt),
      pose_(cfg_.initial_pose),
      vel_(cfg_.initial_velocity) {}

TraceRecord Simulation::step() {
  const double t = time();
  TraceRecord rec;
  rec.t = t;

  const ReferenceSample ref = helix_reference(t);
  rec.pose = pose_;
  rec.pose_d = ref.pose;
  rec.v = vel_;
  rec.e = TrajectoryError::between(ref.pose, pose_);

  rec.measured = sensor_.measure(pose_);
  rec.e_measured = TrajectoryError::between(ref.pose, rec.measured);

  rec.v_e = refined_error(cfg_.mode, rec.e_measured, cfg_.kinematic.v_max);
  rec.v_c = backstepping_law(rec.v_e, rec.measured.psi, ref.body_velocity, cfg_.kinematic);

  smc_.observe(rec.v_c, vel_, cfg_.dt, cfg_.smc.lambda);
  rec.tau_demand = control_torque(smc_, estimate_, vel_, rec.measured, cfg_.smc);
  rec.s = smc_.s;
  rec.tau_est = smc_.tau_est;
  smc_.tau_est = adaptive_update(smc_, cfg_.smc, cfg_.dt);

  const AllocationResult alloc = allocate_and_saturate(rec.tau_demand, limits_);
  rec.t_bar = alloc.demanded;
  rec.saturated = alloc.saturated;
  rec.tau_bar_realized = alloc.tau_bar_realized;

  integrate_plant(model_, pose_, vel_, alloc.tau_realized, cfg_.dt);
  ++step_;
  if (!bounded(pose_, vel_)) throw DivergenceError(t);
  return rec;
}

Trace run(const ScenarioConfig& cfg) {
  Simulation sim(cfg);
  Trace trace;
  trace.reserve(sim.config().step_count());
  while (!sim.done()) trace.push_back(sim.step());
  return trace;
}

std::vector<KinematicRecord> run_kinematic_loop(const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<KinematicRecord> out;
  const std::size_t n = cfg.step_count();
  out.reserve(n + 1);
  Vec4 p = cfg.initial_pose.vec();
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const ReferenceSample ref = helix_reference(t);
    KinematicRecord rec;
    rec.t = t;
    rec.e = TrajectoryError::between(ref.pose, Pose::from(p));
    rec.gamma0 = lyapunov_gamma0(rec.e);
    rec.v_e = refined_error(cfg.mode, rec.e, cfg.kinematic.v_max);
    rec.v_c = backstepping_law(rec.v_e, p[kPsi], ref.body_velocity, cfg.kinematic);
    out.push_back(rec);
    if (k == n) break;

    const Vec4 vc = rec.v_c.vec();
    const auto f = [&](const Vec4& x) -> Vec4 { return rotation_jacobian(x[kPsi]) * vc; };
    const Vec4 k1 = f(p);
    const Vec4 k2 = f(p + 0.5 * cfg.dt * k1);
    const Vec4 k3 = f(p + 0.5 * cfg.dt * k2);
    const Vec4 k4 = f(p + cfg.dt * k3);
    p += cfg.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!all_finite(p) || p.cwiseAbs().maxCoeff() > kDivergenceLimit) throw DivergenceError(t);
  }
  return out;
}

ErrorStats error_stats(const Trace& trace, double t_from) {
  ErrorStats st;
  st.window_start = t_from;
  for (const auto& rec : trace) {
    if (rec.t < t_from) continue;
    if (st.samples == 0) st.window_start = rec.t;
    const Vec4 e = rec.e.vec();
    const double pos = e.head<3>().norm();
    st.mean_position_error += pos;
    st.max_position_error = std::max(st.max_position_error, pos);
    st.mean_abs_error += e.cwiseAbs();
    st.max_abs_error = st.max_abs_error.cwiseMax(e.cwiseAbs());
    ++st.samples;
  }
  if (st.samples > 0) {
    st.mean_position_error /= static_cast<double>(st.samples);
    st.mean_abs_error /= static_cast<double>(st.samples);
  }
  return st;
}

Metrics metrics(const Trace& trace) {
  if (trace.empty()) throw std::invalid_argument("metrics: empty trace");
  Metrics m;
  m.records = trace.size();
  for (const auto& rec : trace) {
    const Vec4 vc = rec.v_c.vec();
    for (int i = 0; i < 4; ++i) {
      if (std::abs(vc[i]) > m.max_abs_vc[i]) {
        m.max_abs_vc[i] = std::abs(vc[i]);
        m.peak_vc[i] = vc[i];
      }
    }
    for (int i = 0; i < 5; ++i) {
      if (std::abs(rec.t_bar[i]) > m.max_abs_t_bar[i]) {
        m.max_abs_t_bar[i] = std::abs(rec.t_bar[i]);
        m.peak_t_bar[i] = rec.t_bar[i];
      }
    }
    if (std::any_of(rec.saturated.begin(), rec.saturated.end(), [](bool s) { return s; })) {
      ++m.saturated_steps;
    }
  }
  const double step = trace.size() > 1 ? trace[1].t - trace[0].t : 0.0;
  const double span = trace.back().t - trace.front().t + step;
  m.final_window = error_stats(trace, trace.front().t + 0.9 * span - 1e-9);
  return m;
}

}  // namespace fbstt
