// fbstt command-line driver. Talks to the simulator only through the C API.
//
// Exit status: 0 success, 1 divergence, 2 usage/configuration error,
// 3 I/O error, 4 internal error.
#include "fbstt/fbstt.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace {

enum Exit { kOk = 0, kDiverged = 1, kUsage = 2, kIo = 3, kInternal = 4 };

int exit_code(fbstt_status st) {
  switch (st) {
    case FBSTT_OK: return kOk;
    case FBSTT_E_DIVERGED: return kDiverged;
    case FBSTT_E_IO: return kIo;
    case FBSTT_E_INVALID_ARGUMENT:
    case FBSTT_E_SYNTAX:
    case FBSTT_E_CONFIG:
    case FBSTT_E_RANGE: return kUsage;
    default: return kInternal;
  }
}

struct ScenarioDeleter {
  void operator()(fbstt_scenario* s) const { fbstt_scenario_free(s); }
};
struct RunDeleter {
  void operator()(fbstt_run* r) const { fbstt_run_free(r); }
};
using ScenarioPtr = std::unique_ptr<fbstt_scenario, ScenarioDeleter>;
using RunPtr = std::unique_ptr<fbstt_run, RunDeleter>;

struct Failure {
  fbstt_status status;
  std::string message;
};

void check(fbstt_status st, const std::string& context) {
  if (st != FBSTT_OK) throw Failure{st, context + ": " + fbstt_last_error()};
}

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::optional<double> dt;
  std::optional<double> noise;
  std::vector<std::string> sets;
  std::string sweep;
  bool compare = false;
  int bench = 0;
  bool print_config = false;
};

std::pair<std::string, std::string> split_assignment(const std::string& text, const char* flag) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Failure{FBSTT_E_INVALID_ARGUMENT, std::string(flag) + ": expected key=value, got '" + text + "'"};
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

ScenarioPtr load_scenario(const Options& opt) {
  fbstt_scenario* raw = nullptr;
  if (opt.config.empty()) {
    check(fbstt_scenario_default(&raw), "default scenario");
  } else {
    check(fbstt_scenario_load(opt.config.c_str(), &raw), "--config");
  }
  ScenarioPtr sc(raw);
  if (opt.mode) {
    if (*opt.mode == "fbstt") {
      check(fbstt_scenario_set_mode(sc.get(), FBSTT_MODE_FBSTT), "--mode");
    } else if (*opt.mode == "bstt") {
      check(fbstt_scenario_set_mode(sc.get(), FBSTT_MODE_BSTT), "--mode");
    } else {
      throw Failure{FBSTT_E_INVALID_ARGUMENT, "--mode: expected fbstt or bstt, got '" + *opt.mode + "'"};
    }
  }
  if (opt.seed) check(fbstt_scenario_set_seed(sc.get(), *opt.seed), "--seed");
  if (opt.duration) check(fbstt_scenario_set_duration(sc.get(), *opt.duration), "--duration");
  if (opt.dt) check(fbstt_scenario_set_dt(sc.get(), *opt.dt), "--dt");
  if (opt.noise) check(fbstt_scenario_set_noise(sc.get(), *opt.noise), "--noise");
  for (const auto& s : opt.sets) {
    const auto [key, value] = split_assignment(s, "--set");
    check(fbstt_scenario_set_value(sc.get(), key.c_str(), value.c_str()), "--set " + key);
  }
  return sc;
}

ScenarioPtr clone(const fbstt_scenario* src) {
  fbstt_scenario* raw = nullptr;
  check(fbstt_scenario_clone(src, &raw), "clone");
  return ScenarioPtr(raw);
}

std::string scenario_name(const fbstt_scenario* sc) {
  std::size_t needed = 0;
  fbstt_scenario_name(sc, nullptr, 0, &needed);
  std::string name(needed, '\0');
  check(fbstt_scenario_name(sc, name.data(), name.size(), nullptr), "name");
  name.resize(needed - 1);
  return name;
}

struct RunResult {
  std::string label;
  fbstt_status status = FBSTT_OK;
  std::string error;
  RunPtr run;
};

RunResult run_one(std::string label, const fbstt_scenario* sc, const std::string& dir) {
  RunResult res;
  res.label = std::move(label);
  fbstt_run* raw = nullptr;
  res.status = fbstt_run_to_directory(sc, dir.c_str(), &raw);
  res.run.reset(raw);
  if (res.status != FBSTT_OK) res.error = fbstt_last_error();
  return res;
}

void print_header() {
  std::printf("%-28s %8s %10s %10s %10s %8s %s\n", "run", "records", "mean|e_p|", "mean|e_psi|", "max|T|", "sat", "status");
}

void print_row(const RunResult& r) {
  fbstt_summary sum{};
  if (!r.run || fbstt_run_summary(r.run.get(), &sum) != FBSTT_OK) {
    std::printf("%-28s %8s %10s %10s %10s %8s %s\n", r.label.c_str(), "-", "-", "-", "-", "-", r.error.c_str());
    return;
  }
  const double max_t = *std::max_element(sum.max_abs_t_bar, sum.max_abs_t_bar + 5);
  std::string status = "ok";
  double at = 0.0;
  if (fbstt_run_diverged(r.run.get(), &at)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "diverged at t=%.2f s", at);
    status = buf;
  } else if (r.status != FBSTT_OK) {
    status = r.error;
  }
  std::printf("%-28s %8zu %10.4f %10.4f %10.4f %8zu %s\n", r.label.c_str(), sum.records, sum.final_mean_position_error,
              sum.final_mean_abs_error[3], max_t, sum.saturated_steps, status.c_str());
}

int report(const std::vector<RunResult>& results) {
  print_header();
  int code = kOk;
  for (const auto& r : results) {
    print_row(r);
    if (r.status != FBSTT_OK) {
      std::fprintf(stderr, "fbstt: %s: %s\n", r.label.c_str(), r.error.c_str());
      code = std::max(code, exit_code(r.status));
    }
  }
  return code;
}

int cmd_single(const Options& opt, const fbstt_scenario* sc) {
  std::vector<RunResult> results;
  results.push_back(run_one(scenario_name(sc), sc, opt.out));
  return report(results);
}

// Both modes of the same scenario, run concurrently into sibling directories.
int cmd_compare(const Options& opt, const fbstt_scenario* sc) {
  ScenarioPtr fb = clone(sc);
  ScenarioPtr bs = clone(sc);
  check(fbstt_scenario_set_mode(fb.get(), FBSTT_MODE_FBSTT), "compare");
  check(fbstt_scenario_set_mode(bs.get(), FBSTT_MODE_BSTT), "compare");
  std::vector<RunResult> results(2);
  std::thread worker([&] { results[1] = run_one("bstt", bs.get(), opt.out + "/bstt"); });
  results[0] = run_one("fbstt", fb.get(), opt.out + "/fbstt");
  worker.join();
  return report(results);
}

int cmd_sweep(const Options& opt, const fbstt_scenario* sc) {
  const auto [key, list] = split_assignment(opt.sweep, "--sweep");
  std::vector<std::string> values;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const std::string v = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (v.empty()) throw Failure{FBSTT_E_INVALID_ARGUMENT, "--sweep: empty value in '" + list + "'"};
    values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  std::vector<RunResult> results;
  for (const auto& v : values) {
    ScenarioPtr variant = clone(sc);
    check(fbstt_scenario_set_value(variant.get(), key.c_str(), v.c_str()), "--sweep " + key);
    const std::string label = key + "=" + v;
    results.push_back(run_one(label, variant.get(), opt.out + "/" + label));
  }
  return report(results);
}

int cmd_bench(const Options& opt, const fbstt_scenario* sc) {
  ScenarioPtr fb = clone(sc);
  ScenarioPtr bs = clone(sc);
  check(fbstt_scenario_set_mode(fb.get(), FBSTT_MODE_FBSTT), "--bench");
  check(fbstt_scenario_set_mode(bs.get(), FBSTT_MODE_BSTT), "--bench");
  fbstt_bench_report rep{};
  check(fbstt_benchmark(fb.get(), bs.get(), opt.bench, &rep), "--bench");
  std::printf("repetitions  %d\n", rep.repetitions);
  std::printf("fbstt_median %.6f s\n", rep.fbstt_median_s);
  std::printf("bstt_median  %.6f s\n", rep.bstt_median_s);
  std::printf("ratio        %.4f\n", rep.ratio);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"UUV helix tracking with fuzzy-refined backstepping + SMC (FBSTT) and the BSTT baseline"};
  app.set_version_flag("--version", std::string(fbstt_version()));
  app.add_option("--config", opt.config, "Scenario file (YAML, or JSON); built-in defaults if omitted");
  app.add_option("--out", opt.out, "Output directory")->capture_default_str();
  app.add_option("--mode", opt.mode, "Controller override: fbstt or bstt");
  app.add_option("--seed", opt.seed, "Noise seed override");
  app.add_option("--duration", opt.duration, "Simulated time override [s]");
  app.add_option("--dt", opt.dt, "Control/integration step override [s]");
  app.add_option("--noise", opt.noise, "Measurement noise amplitude override");
  app.add_option("--set", opt.sets, "Override any scenario field, e.g. smc.lambda=0.75 (repeatable)");
  auto* compare = app.add_flag("--compare", opt.compare, "Run FBSTT and BSTT on the scenario into <out>/fbstt and <out>/bstt");
  auto* sweep = app.add_option("--sweep", opt.sweep, "Run one scenario per value: key=v1,v2,... into <out>/key=v");
  auto* bench = app.add_option("--bench", opt.bench, "Time FBSTT vs BSTT over N >= 3 repetitions");
  app.add_flag("--print-config", opt.print_config, "Print the resolved scenario as JSON and exit");
  compare->excludes(sweep)->excludes(bench);
  sweep->excludes(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    ScenarioPtr sc = load_scenario(opt);
    if (opt.print_config) {
      std::size_t needed = 0;
      fbstt_scenario_to_json(sc.get(), nullptr, 0, &needed);
      std::string text(needed, '\0');
      check(fbstt_scenario_to_json(sc.get(), text.data(), text.size(), nullptr), "--print-config");
      std::printf("%s\n", text.c_str());
      return kOk;
    }
    if (*bench) return cmd_bench(opt, sc.get());
    if (opt.compare) return cmd_compare(opt, sc.get());
    if (!opt.sweep.empty()) return cmd_sweep(opt, sc.get());
    return cmd_single(opt, sc.get());
  } catch (const Failure& f) {
    std::fprintf(stderr, "fbstt: %s\n", f.message.c_str());
    return exit_code(f.status);
  }
}
