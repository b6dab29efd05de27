#pragma once

#include "fbstt/simulation.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fbstt {

// Version tag of the trace.csv column layout, recorded in the run manifest.
inline constexpr const char* kTraceFormat = "fbstt-trace/1";

// Column order of trace.csv.
const std::vector<std::string>& trace_columns();

// One header row then one row per record. Numbers use the shortest
// representation that round-trips; saturation flags are 0/1.
void write_trace_csv(std::ostream& out, const Trace& trace);

// Inverse of write_trace_csv. Only the fields carried by the CSV are filled.
// Throws std::runtime_error with the offending line number on bad input.
Trace read_trace_csv(std::istream& in);

// key,value rows: maxima of |v_c| and demanded |T_bar| plus final-window
// error statistics.
void write_summary_csv(std::ostream& out, const Metrics& m);

struct RunManifest {
  std::string scenario;
  std::string checksum;
  std::uint64_t seed = 0;
  std::string mode;
  std::string started_at;   // ISO-8601 UTC
  std::string finished_at;  // ISO-8601 UTC
  std::string trace_format = kTraceFormat;
  std::size_t records = 0;
  bool diverged = false;
  double diverged_at = 0.0;
  std::vector<std::string> outputs;
};

std::string to_json_string(const RunManifest& m);
RunManifest parse_manifest(const std::string& text);

std::string format_double(double v);
std::string utc_timestamp();

}  // namespace fbstt
