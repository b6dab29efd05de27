#include "fbstt/runner.hpp"

#include "fbstt/config.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fbstt {

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << body;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace

RunOutcome execute(const ScenarioConfig& cfg) {
  RunOutcome out;
  out.manifest.scenario = cfg.name;
  out.manifest.checksum = config_checksum(cfg);
  out.manifest.seed = cfg.seed;
  out.manifest.mode = to_string(cfg.mode);
  out.manifest.started_at = utc_timestamp();

  Simulation sim(cfg);
  out.trace.reserve(cfg.step_count());
  try {
    while (!sim.done()) out.trace.push_back(sim.step());
  } catch (const DivergenceError& e) {
    out.manifest.diverged = true;
    out.manifest.diverged_at = e.time();
  }
  out.manifest.finished_at = utc_timestamp();
  out.manifest.records = out.trace.size();
  if (!out.trace.empty()) out.metrics = metrics(out.trace);
  return out;
}

RunOutcome run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error(out_dir.string() + ": " + ec.message());

  RunOutcome out = execute(cfg);

  std::ostringstream trace;
  write_trace_csv(trace, out.trace);
  write_file(out_dir / "trace.csv", trace.str());
  out.manifest.outputs.push_back("trace.csv");

  if (out.metrics) {
    std::ostringstream summary;
    write_summary_csv(summary, *out.metrics);
    write_file(out_dir / "summary.csv", summary.str());
    out.manifest.outputs.push_back("summary.csv");
  }
  write_file(out_dir / "scenario.json", to_json_string(cfg) + "\n");
  out.manifest.outputs.push_back("scenario.json");
  out.manifest.outputs.push_back("manifest.json");
  write_file(out_dir / "manifest.json", to_json_string(out.manifest));
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: no values");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BenchmarkReport benchmark(const ScenarioConfig& fbstt, const ScenarioConfig& bstt, int repetitions) {
  if (repetitions < 3) throw std::invalid_argument("bench: repetitions must be at least 3");
  const auto time_run = [](const ScenarioConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const Trace trace = run(cfg);
    const auto stop = std::chrono::steady_clock::now();
    if (trace.size() != cfg.step_count()) throw std::logic_error("bench: incomplete run");
    return std::chrono::duration<double>(stop - start).count();
  };

  BenchmarkReport rep;
  rep.repetitions = repetitions;
  // Untimed warm-up.
  time_run(fbstt);
  time_run(bstt);
  for (int i = 0; i < repetitions; ++i) {
    rep.fbstt_seconds.push_back(time_run(fbstt));
    rep.bstt_seconds.push_back(time_run(bstt));
  }
  rep.fbstt_median = median(rep.fbstt_seconds);
  rep.bstt_median = median(rep.bstt_seconds);
  rep.ratio = rep.fbstt_median / rep.bstt_median;
  return rep;
}

}  // namespace fbstt
