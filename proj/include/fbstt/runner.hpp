#pragma once

#include "fbstt/simulation.hpp"
#include "fbstt/trace_io.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace fbstt {

struct RunOutcome {
  Trace trace;  // records up to the divergence point if the run blew up
  std::optional<Metrics> metrics;
  RunManifest manifest;

  bool diverged() const { return manifest.diverged; }
};

// Runs the scenario without touching the filesystem. Divergence is reported
// in the outcome rather than thrown.
RunOutcome execute(const ScenarioConfig& cfg);

// Runs the scenario and writes trace.csv, summary.csv and manifest.json into
// out_dir (created if missing). Throws std::runtime_error on I/O failure.
RunOutcome run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

struct BenchmarkReport {
  int repetitions = 0;
  std::vector<double> fbstt_seconds;
  std::vector<double> bstt_seconds;
  double fbstt_median = 0.0;
  double bstt_median = 0.0;
  double ratio = 0.0;  // fbstt_median / bstt_median
};

// Times complete in-memory runs of both scenarios, alternating between them.
// Throws std::invalid_argument if repetitions < 3 and DivergenceError if a
// run blows up.
BenchmarkReport benchmark(const ScenarioConfig& fbstt, const ScenarioConfig& bstt, int repetitions);

double median(std::vector<double> values);

}  // namespace fbstt
