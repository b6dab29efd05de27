#include "fbstt/fbstt.h"

#include "fbstt/config.hpp"
#include "fbstt/runner.hpp"

#include <cstring>
#include <exception>
#include <new>
#include <string>

struct fbstt_scenario {
  fbstt::ScenarioConfig cfg;
};

struct fbstt_run {
  fbstt::RunOutcome outcome;
};

namespace {

thread_local std::string g_last_error;

fbstt_status fail(fbstt_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

// Maps exceptions escaping the core onto status codes.
template <typename F>
fbstt_status guarded(F&& body) {
  try {
    return body();
  } catch (const fbstt::ConfigError& e) {
    switch (e.kind()) {
      case fbstt::ConfigError::Kind::kIo: return fail(FBSTT_E_IO, e.what());
      case fbstt::ConfigError::Kind::kSyntax: return fail(FBSTT_E_SYNTAX, e.what());
      case fbstt::ConfigError::Kind::kConstraint: return fail(FBSTT_E_CONFIG, e.what());
    }
    return fail(FBSTT_E_INTERNAL, e.what());
  } catch (const fbstt::DivergenceError& e) {
    return fail(FBSTT_E_DIVERGED, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(FBSTT_E_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FBSTT_E_INTERNAL, "out of memory");
  } catch (const std::runtime_error& e) {
    return fail(FBSTT_E_IO, e.what());
  } catch (const std::exception& e) {
    return fail(FBSTT_E_INTERNAL, e.what());
  } catch (...) {
    return fail(FBSTT_E_INTERNAL, "unknown error");
  }
}

fbstt_status null_arg(const char* what) { return fail(FBSTT_E_INVALID_ARGUMENT, std::string(what) + " is NULL"); }

fbstt_status copy_out(const std::string& s, char* buf, std::size_t len, std::size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf || len < s.size() + 1) return fail(FBSTT_E_RANGE, "buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return FBSTT_OK;
}

template <typename Setter>
fbstt_status override_field(fbstt_scenario* sc, Setter&& set) {
  if (!sc) return null_arg("scenario");
  return guarded([&] {
    fbstt::ScenarioConfig next = sc->cfg;
    set(next);
    next.validate();
    sc->cfg = std::move(next);
    return FBSTT_OK;
  });
}

void copy4(const fbstt::Vec4& v, double* out) {
  for (int i = 0; i < 4; ++i) out[i] = v[i];
}

fbstt_status make_scenario(fbstt::ScenarioConfig cfg, fbstt_scenario** out) {
  *out = new fbstt_scenario{std::move(cfg)};
  return FBSTT_OK;
}

fbstt_status finish_run(fbstt::RunOutcome outcome, fbstt_run** out) {
  const bool diverged = outcome.diverged();
  const double at = outcome.manifest.diverged_at;
  if (out) {
    *out = new fbstt_run{std::move(outcome)};
  }
  if (diverged) return fail(FBSTT_E_DIVERGED, "simulation diverged at t=" + std::to_string(at) + " s");
  return FBSTT_OK;
}

}  // namespace

extern "C" {

const char* fbstt_version(void) { return "1.0.0"; }

const char* fbstt_status_string(fbstt_status status) {
  switch (status) {
    case FBSTT_OK: return "ok";
    case FBSTT_E_INVALID_ARGUMENT: return "invalid argument";
    case FBSTT_E_IO: return "i/o error";
    case FBSTT_E_SYNTAX: return "syntax error";
    case FBSTT_E_CONFIG: return "invalid configuration";
    case FBSTT_E_DIVERGED: return "simulation diverged";
    case FBSTT_E_RANGE: return "out of range";
    case FBSTT_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* fbstt_last_error(void) { return g_last_error.c_str(); }

fbstt_status fbstt_scenario_default(fbstt_scenario** out) {
  if (!out) return null_arg("out");
  return guarded([&] { return make_scenario(fbstt::ScenarioConfig{}, out); });
}

fbstt_status fbstt_scenario_load(const char* path, fbstt_scenario** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] { return make_scenario(fbstt::parse_config(path), out); });
}

fbstt_status fbstt_scenario_parse(const char* text, fbstt_scenario** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guarded([&] { return make_scenario(fbstt::parse_config_text(text), out); });
}

fbstt_status fbstt_scenario_clone(const fbstt_scenario* src, fbstt_scenario** out) {
  if (!src) return null_arg("scenario");
  if (!out) return null_arg("out");
  return guarded([&] { return make_scenario(src->cfg, out); });
}

void fbstt_scenario_free(fbstt_scenario* scenario) { delete scenario; }

fbstt_status fbstt_scenario_set_mode(fbstt_scenario* scenario, fbstt_mode mode) {
  if (mode != FBSTT_MODE_FBSTT && mode != FBSTT_MODE_BSTT) {
    return fail(FBSTT_E_INVALID_ARGUMENT, "mode: expected FBSTT_MODE_FBSTT or FBSTT_MODE_BSTT");
  }
  return override_field(scenario, [&](fbstt::ScenarioConfig& c) {
    c.mode = mode == FBSTT_MODE_FBSTT ? fbstt::Mode::kFbstt : fbstt::Mode::kBstt;
  });
}

fbstt_status fbstt_scenario_set_seed(fbstt_scenario* scenario, uint64_t seed) {
  return override_field(scenario, [&](fbstt::ScenarioConfig& c) { c.seed = seed; });
}

fbstt_status fbstt_scenario_set_duration(fbstt_scenario* scenario, double seconds) {
  return override_field(scenario, [&](fbstt::ScenarioConfig& c) { c.duration = seconds; });
}

fbstt_status fbstt_scenario_set_dt(fbstt_scenario* scenario, double seconds) {
  return override_field(scenario, [&](fbstt::ScenarioConfig& c) { c.dt = seconds; });
}

fbstt_status fbstt_scenario_set_noise(fbstt_scenario* scenario, double amplitude) {
  return override_field(scenario, [&](fbstt::ScenarioConfig& c) { c.noise.amplitude = amplitude; });
}

fbstt_status fbstt_scenario_set_value(fbstt_scenario* scenario, const char* key, const char* value) {
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  return override_field(scenario, [&](fbstt::ScenarioConfig& c) { c = fbstt::with_override(c, key, value); });
}

fbstt_status fbstt_scenario_get_mode(const fbstt_scenario* scenario, fbstt_mode* mode) {
  if (!scenario) return null_arg("scenario");
  if (!mode) return null_arg("mode");
  *mode = scenario->cfg.mode == fbstt::Mode::kFbstt ? FBSTT_MODE_FBSTT : FBSTT_MODE_BSTT;
  return FBSTT_OK;
}

fbstt_status fbstt_scenario_get_seed(const fbstt_scenario* scenario, uint64_t* seed) {
  if (!scenario) return null_arg("scenario");
  if (!seed) return null_arg("seed");
  *seed = scenario->cfg.seed;
  return FBSTT_OK;
}

fbstt_status fbstt_scenario_step_count(const fbstt_scenario* scenario, size_t* steps) {
  if (!scenario) return null_arg("scenario");
  if (!steps) return null_arg("steps");
  *steps = scenario->cfg.step_count();
  return FBSTT_OK;
}

fbstt_status fbstt_scenario_name(const fbstt_scenario* scenario, char* buf, size_t len, size_t* needed) {
  if (!scenario) return null_arg("scenario");
  return copy_out(scenario->cfg.name, buf, len, needed);
}

fbstt_status fbstt_scenario_to_json(const fbstt_scenario* scenario, char* buf, size_t len, size_t* needed) {
  if (!scenario) return null_arg("scenario");
  return guarded([&] { return copy_out(fbstt::to_json_string(scenario->cfg), buf, len, needed); });
}

fbstt_status fbstt_scenario_checksum(const fbstt_scenario* scenario, char* buf, size_t len) {
  if (!scenario) return null_arg("scenario");
  return guarded([&] { return copy_out(fbstt::config_checksum(scenario->cfg), buf, len, nullptr); });
}

fbstt_status fbstt_run_execute(const fbstt_scenario* scenario, fbstt_run** out) {
  if (!scenario) return null_arg("scenario");
  if (!out) return null_arg("out");
  return guarded([&] { return finish_run(fbstt::execute(scenario->cfg), out); });
}

fbstt_status fbstt_run_to_directory(const fbstt_scenario* scenario, const char* out_dir, fbstt_run** out) {
  if (!scenario) return null_arg("scenario");
  if (!out_dir) return null_arg("out_dir");
  return guarded([&] { return finish_run(fbstt::run_scenario(scenario->cfg, out_dir), out); });
}

void fbstt_run_free(fbstt_run* run) { delete run; }

size_t fbstt_run_record_count(const fbstt_run* run) { return run ? run->outcome.trace.size() : 0; }

fbstt_status fbstt_run_record(const fbstt_run* run, size_t index, fbstt_record* out) {
  if (!run) return null_arg("run");
  if (!out) return null_arg("out");
  const auto& trace = run->outcome.trace;
  if (index >= trace.size()) return fail(FBSTT_E_RANGE, "record index out of range");
  const fbstt::TraceRecord& r = trace[index];
  out->t = r.t;
  copy4(r.pose.vec(), out->pose);
  copy4(r.pose_d.vec(), out->pose_d);
  copy4(r.e.vec(), out->error);
  copy4(r.v.vec(), out->velocity);
  copy4(r.v_c.vec(), out->control_velocity);
  copy4(r.tau_demand.vec(), out->tau_demand);
  for (int i = 0; i < 5; ++i) {
    out->t_bar[i] = r.t_bar[i];
    out->saturated[i] = r.saturated[i] ? 1 : 0;
  }
  copy4(r.tau_bar_realized, out->tau_bar_realized);
  copy4(r.v_e, out->refined_error);
  copy4(r.e_measured.vec(), out->measured_error);
  return FBSTT_OK;
}

fbstt_status fbstt_run_summary(const fbstt_run* run, fbstt_summary* out) {
  if (!run) return null_arg("run");
  if (!out) return null_arg("out");
  if (!run->outcome.metrics) return fail(FBSTT_E_RANGE, "run has no records");
  const fbstt::Metrics& m = *run->outcome.metrics;
  out->records = m.records;
  copy4(m.max_abs_vc, out->max_abs_vc);
  for (int i = 0; i < 5; ++i) {
    out->max_abs_t_bar[i] = m.max_abs_t_bar[i];
    out->peak_t_bar[i] = m.peak_t_bar[i];
  }
  out->saturated_steps = m.saturated_steps;
  out->final_window_start = m.final_window.window_start;
  out->final_mean_position_error = m.final_window.mean_position_error;
  out->final_max_position_error = m.final_window.max_position_error;
  copy4(m.final_window.mean_abs_error, out->final_mean_abs_error);
  copy4(m.final_window.max_abs_error, out->final_max_abs_error);
  return FBSTT_OK;
}

int fbstt_run_diverged(const fbstt_run* run, double* at) {
  if (!run || !run->outcome.diverged()) return 0;
  if (at) *at = run->outcome.manifest.diverged_at;
  return 1;
}

fbstt_status fbstt_benchmark(const fbstt_scenario* fbstt, const fbstt_scenario* bstt, int repetitions,
                             fbstt_bench_report* out) {
  if (!fbstt) return null_arg("fbstt");
  if (!bstt) return null_arg("bstt");
  if (!out) return null_arg("out");
  if (repetitions < 3) return fail(FBSTT_E_INVALID_ARGUMENT, "repetitions must be at least 3");
  return guarded([&] {
    const fbstt::BenchmarkReport rep = fbstt::benchmark(fbstt->cfg, bstt->cfg, repetitions);
    out->repetitions = rep.repetitions;
    out->fbstt_median_s = rep.fbstt_median;
    out->bstt_median_s = rep.bstt_median;
    out->ratio = rep.ratio;
    return FBSTT_OK;
  });
}

}  // extern "C"
