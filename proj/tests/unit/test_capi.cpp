#include <doctest.h>

#include "fbstt/fbstt.h"

#include <cstring>
#include <filesystem>
#include <string>

namespace {

struct Scenario {
  fbstt_scenario* p = nullptr;
  ~Scenario() { fbstt_scenario_free(p); }
};

struct Run {
  fbstt_run* p = nullptr;
  ~Run() { fbstt_run_free(p); }
};

}  // namespace

TEST_CASE("c api: argument and error reporting") {
  CHECK(fbstt_scenario_default(nullptr) == FBSTT_E_INVALID_ARGUMENT);
  CHECK(std::strlen(fbstt_last_error()) > 0);
  CHECK(std::string(fbstt_status_string(FBSTT_E_DIVERGED)) == "simulation diverged");

  Scenario s;
  CHECK(fbstt_scenario_load("/nonexistent/x.yaml", &s.p) == FBSTT_E_IO);
  CHECK(s.p == nullptr);
  CHECK(fbstt_scenario_parse("dt: [", &s.p) == FBSTT_E_SYNTAX);
  CHECK(fbstt_scenario_parse("nope: 1", &s.p) == FBSTT_E_CONFIG);
  CHECK(std::string(fbstt_last_error()).find("nope") != std::string::npos);
  CHECK(fbstt_scenario_parse("dt: -1", &s.p) == FBSTT_E_CONFIG);
  CHECK(std::string(fbstt_last_error()).find("dt") != std::string::npos);
}

TEST_CASE("c api: scenario overrides") {
  Scenario s;
  REQUIRE(fbstt_scenario_load(FBSTT_SOURCE_DIR "/scenarios/helix_bstt.yaml", &s.p) == FBSTT_OK);
  fbstt_mode mode = FBSTT_MODE_FBSTT;
  CHECK(fbstt_scenario_get_mode(s.p, &mode) == FBSTT_OK);
  CHECK(mode == FBSTT_MODE_BSTT);

  size_t steps = 0;
  CHECK(fbstt_scenario_step_count(s.p, &steps) == FBSTT_OK);
  CHECK(steps == 10000);
  CHECK(fbstt_scenario_set_dt(s.p, -1.0) == FBSTT_E_CONFIG);
  CHECK(fbstt_scenario_step_count(s.p, &steps) == FBSTT_OK);
  CHECK(steps == 10000);  // rejected override left the scenario intact
  CHECK(fbstt_scenario_set_duration(s.p, 5.0) == FBSTT_OK);
  CHECK(fbstt_scenario_step_count(s.p, &steps) == FBSTT_OK);
  CHECK(steps == 500);
  CHECK(fbstt_scenario_set_mode(s.p, static_cast<fbstt_mode>(7)) == FBSTT_E_INVALID_ARGUMENT);
  CHECK(fbstt_scenario_set_value(s.p, "smc.lambda", "0.6") == FBSTT_OK);
  CHECK(fbstt_scenario_set_value(s.p, "smc.lambdaa", "0.6") == FBSTT_E_CONFIG);
  CHECK(fbstt_scenario_set_noise(s.p, -0.1) == FBSTT_E_CONFIG);
  CHECK(fbstt_scenario_set_seed(s.p, 99) == FBSTT_OK);
  uint64_t seed = 0;
  CHECK(fbstt_scenario_get_seed(s.p, &seed) == FBSTT_OK);
  CHECK(seed == 99);

  char small[4];
  size_t needed = 0;
  CHECK(fbstt_scenario_to_json(s.p, small, sizeof small, &needed) == FBSTT_E_RANGE);
  std::string json(needed, '\0');
  CHECK(fbstt_scenario_to_json(s.p, json.data(), json.size(), nullptr) == FBSTT_OK);
  CHECK(json.find("\"lambda\": 0.6") != std::string::npos);

  char name[64];
  CHECK(fbstt_scenario_name(s.p, name, sizeof name, nullptr) == FBSTT_OK);
  CHECK(std::string(name) == "helix_bstt");
  char sum[17];
  CHECK(fbstt_scenario_checksum(s.p, sum, sizeof sum) == FBSTT_OK);
  CHECK(std::strlen(sum) == 16);

  Scenario copy;
  CHECK(fbstt_scenario_clone(s.p, &copy.p) == FBSTT_OK);
  char sum2[17];
  CHECK(fbstt_scenario_checksum(copy.p, sum2, sizeof sum2) == FBSTT_OK);
  CHECK(std::string(sum) == sum2);
}

TEST_CASE("c api: runs") {
  Scenario s;
  REQUIRE(fbstt_scenario_default(&s.p) == FBSTT_OK);
  REQUIRE(fbstt_scenario_set_duration(s.p, 10.0) == FBSTT_OK);
  REQUIRE(fbstt_scenario_set_mode(s.p, FBSTT_MODE_BSTT) == FBSTT_OK);
  Run r;
  REQUIRE(fbstt_run_execute(s.p, &r.p) == FBSTT_OK);
  CHECK(fbstt_run_record_count(r.p) == 1000);
  CHECK(fbstt_run_diverged(r.p, nullptr) == 0);

  fbstt_record rec;
  CHECK(fbstt_run_record(r.p, 0, &rec) == FBSTT_OK);
  CHECK(rec.t == 0.0);
  CHECK(rec.pose[1] == -10.0);
  CHECK(rec.error[1] == 10.0);
  CHECK(rec.saturated[0] == 1);
  CHECK(rec.refined_error[1] == 10.0);  // raw error in BSTT mode
  CHECK(fbstt_run_record(r.p, 1000, &rec) == FBSTT_E_RANGE);

  fbstt_summary sum;
  CHECK(fbstt_run_summary(r.p, &sum) == FBSTT_OK);
  CHECK(sum.records == 1000);
  CHECK(sum.max_abs_t_bar[0] > 1.0);
  CHECK(sum.final_window_start == doctest::Approx(9.0));
}

TEST_CASE("c api: divergence hands back the partial run") {
  Scenario s;
  REQUIRE(fbstt_scenario_parse("smc: {switching: literal}\nthrusters: {thrust_max: 1.0e9}", &s.p) == FBSTT_OK);
  Run r;
  CHECK(fbstt_run_execute(s.p, &r.p) == FBSTT_E_DIVERGED);
  REQUIRE(r.p != nullptr);
  double at = -1.0;
  CHECK(fbstt_run_diverged(r.p, &at) == 1);
  CHECK(at > 0.0);
  CHECK(fbstt_run_record_count(r.p) < 10000);
  CHECK(std::string(fbstt_last_error()).find("diverged") != std::string::npos);
}

TEST_CASE("c api: files and benchmark") {
  Scenario s;
  REQUIRE(fbstt_scenario_default(&s.p) == FBSTT_OK);
  REQUIRE(fbstt_scenario_set_duration(s.p, 1.0) == FBSTT_OK);
  const auto dir = std::filesystem::temp_directory_path() / "fbstt_unit_capi";
  std::filesystem::remove_all(dir);
  CHECK(fbstt_run_to_directory(s.p, dir.c_str(), nullptr) == FBSTT_OK);
  CHECK(std::filesystem::exists(dir / "trace.csv"));
  CHECK(std::filesystem::exists(dir / "manifest.json"));
  std::filesystem::remove_all(dir);

  fbstt_bench_report rep;
  CHECK(fbstt_benchmark(s.p, s.p, 1, &rep) == FBSTT_E_INVALID_ARGUMENT);
  CHECK(fbstt_benchmark(s.p, s.p, 3, &rep) == FBSTT_OK);
  CHECK(rep.repetitions == 3);
  CHECK(rep.fbstt_median_s > 0.0);
}
