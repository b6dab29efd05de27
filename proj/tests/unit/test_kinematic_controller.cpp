#include <doctest.h>

#include "fbstt/kinematic_controller.hpp"
#include "fbstt/simulation.hpp"
#include "oracles.hpp"

#include <random>

using namespace fbstt;

TEST_CASE("fuzzify and infer") {
  CHECK(fuzzify(0.0) == 0.0);
  CHECK(fuzzify(1.0) == doctest::Approx(0.5));
  CHECK(fuzzify(-3.0) == doctest::Approx(-0.75));

  CHECK(infer(fuzzify(0.005), 0.005) == 0.0);        // dead zone
  CHECK(infer(fuzzify(1.0), 1.0) == doctest::Approx(0.5));
  CHECK(infer(fuzzify(200.0), 200.0) == 1.0);        // mu = 0.995
  CHECK(infer(fuzzify(-200.0), -200.0) == -1.0);
  CHECK(infer(fuzzify(0.0), 0.0) == 0.0);

  const Vec4 ve = fuzzy_velocity(Vec4(1, -0.5, 0, 0.5), Vec4(1.5, 1.5, 0.7, 0.15));
  CHECK((ve - Vec4(1.5, -0.75, 0, 0.075)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("fuzzy map is odd, monotone, bounded and sign-preserving") {
  const double vmax = 1.5;
  double prev = -vmax;
  for (int i = 0; i < 10000; ++i) {
    // Dense near zero, reaching |e| = 1000 at the ends.
    const double x = -1.0 + 2.0 * i / 9999.0;
    const double e = std::copysign(1000.0 * x * x * x * x, x);
    const double f = fuzzy_refine(TrajectoryError{e, 0, 0, 0}, Vec4::Constant(vmax)).velocity[0];
    const double g = fuzzy_refine(TrajectoryError{-e, 0, 0, 0}, Vec4::Constant(vmax)).velocity[0];
    CHECK(f == -g);
    CHECK(f >= prev);
    CHECK(std::abs(f) <= vmax);
    CHECK(e * f >= 0.0);
    CHECK(f == doctest::Approx(oracle::fuzzy(e, vmax)).epsilon(1e-15));
    prev = f;
  }
}

TEST_CASE("refined error by mode") {
  const TrajectoryError e{3.0, -0.5, 0.001, 40.0};
  const Vec4 vm(1.5, 1.5, 0.7, 0.15);
  CHECK(refined_error(Mode::kBstt, e, vm) == e.vec());
  const Vec4 f = refined_error(Mode::kFbstt, e, vm);
  for (int i = 0; i < 4; ++i) CHECK(f[i] == doctest::Approx(oracle::fuzzy(e.vec()[i], vm[i])));
}

TEST_CASE("backstepping law") {
  const KinematicGains g;
  const BodyVelocity vc = backstepping_law(Vec4(1, 0, 0, 0), 0.0, {1, 0, 0, 0}, g);
  CHECK(vc.u == doctest::Approx(3.5));
  CHECK(vc.v == doctest::Approx(0.0));

  const BodyVelocity heave = backstepping_law(Vec4(0, 0, 0.3, 0), 1.0, {0, 0, 0.5, 0}, g);
  CHECK(heave.w == doctest::Approx(0.8));

  // Straight-line evaluation of every row.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int n = 0; n < 200; ++n) {
    const Vec4 ve{d(rng), d(rng), d(rng), d(rng)};
    const double psi = 3.0 * d(rng);
    const BodyVelocity des{d(rng), d(rng), d(rng), d(rng)};
    const BodyVelocity out = backstepping_law(ve, psi, des, g);
    const double c = std::cos(psi), s = std::sin(psi), cp = std::cos(ve[3]), sp = std::sin(ve[3]);
    CHECK(out.u == doctest::Approx(2.5 * (ve[0] * c + ve[1] * s) + des.u * cp - des.v * sp));
    CHECK(out.v == doctest::Approx(2.5 * (-ve[0] * s + ve[1] * c) + des.u * sp - des.v * cp));
    CHECK(out.w == doctest::Approx(des.w + ve[2]));
    CHECK(out.r == doctest::Approx(des.r + ve[3]));
  }
}

TEST_CASE("lyapunov gamma0") {
  CHECK(lyapunov_gamma0({0, -10, 0, 0}) == 50.0);
  CHECK(lyapunov_gamma0({1, 1, 1, 1}) == 2.0);
  CHECK(lyapunov_gamma0({}) == 0.0);
}

TEST_CASE("kinematic gain validation") {
  KinematicGains g;
  CHECK_NOTHROW(g.validate());
  g.k = 0.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = {};
  g.v_max[2] = -1.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("kinematic-only loop decreases gamma0") {
  const auto recs = run_kinematic_loop(ScenarioConfig{});
  REQUIRE(recs.size() == 10001);
  CHECK(recs.front().gamma0 == doctest::Approx(50.0));
  for (std::size_t i = 2; i < recs.size(); ++i) CHECK(recs[i].gamma0 <= recs[i - 1].gamma0 + 1e-9);
  CHECK(recs.back().gamma0 < 1e-3);
}

TEST_CASE("FBSTT control velocity bound and contrast with BSTT") {
  ScenarioConfig cfg;
  const Trace fb = run(cfg);
  cfg.mode = Mode::kBstt;
  const Trace bs = run(cfg);

  const KinematicGains g;
  const double bound_u = g.k * (g.v_max[0] + g.v_max[1]) + 1.0 + 0.0;  // |u_d| + |v_d|
  double fb_max = 0.0, bs_max = 0.0;
  for (const auto& r : fb) {
    CHECK(std::abs(r.v_c.u) <= bound_u);
    CHECK(std::abs(r.v_c.v) <= bound_u);
    fb_max = std::max(fb_max, r.v_c.vec().cwiseAbs().maxCoeff());
  }
  for (const auto& r : bs) bs_max = std::max(bs_max, r.v_c.vec().cwiseAbs().maxCoeff());
  CHECK(bs_max > fb_max);
}
