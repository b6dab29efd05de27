#include "fbstt/trace_io.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <ctime>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fbstt {

namespace {

constexpr std::size_t kColumnCount = 35;

std::vector<double> row_values(const TraceRecord& r) {
  std::vector<double> v;
  v.reserve(kColumnCount);
  v.push_back(r.t);
  for (double x : r.pose.vec()) v.push_back(x);
  for (double x : r.pose_d.vec()) v.push_back(x);
  for (double x : r.e.vec()) v.push_back(x);
  for (double x : r.v.vec()) v.push_back(x);
  for (double x : r.v_c.vec()) v.push_back(x);
  for (double x : r.tau_demand.vec()) v.push_back(x);
  for (double x : r.t_bar) v.push_back(x);
  for (bool s : r.saturated) v.push_back(s ? 1.0 : 0.0);
  return v;
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("trace.csv line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> cols = {
      "t",    "x",    "y",    "z",    "psi",    "xd",   "yd",   "zd",   "psid",
      "ex",   "ey",   "ez",   "epsi", "u",      "v",    "w",    "r",    "uc",
      "vc",   "wc",   "rc",   "taux", "tauy",   "tauz", "taupsi", "T1", "T2",
      "T3",   "T4",   "T5",   "sat1", "sat2",   "sat3", "sat4", "sat5"};
  return cols;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  const auto& cols = trace_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  std::string line;
  for (const auto& rec : trace) {
    line.clear();
    const auto vals = row_values(rec);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (i) line += ',';
      line += i >= 30 ? (vals[i] != 0.0 ? "1" : "0") : format_double(vals[i]);
    }
    line += '\n';
    out << line;
  }
}

Trace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace.csv: missing header");
  std::string expected;
  for (const auto& c : trace_columns()) expected += (expected.empty() ? "" : ",") + c;
  if (line != expected) throw std::runtime_error("trace.csv: unexpected header");

  Trace trace;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> v;
    v.reserve(kColumnCount);
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view field(line.data() + start, (comma == std::string::npos ? line.size() : comma) - start);
      v.push_back(parse_double(field, lineno));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (v.size() != kColumnCount) {
      throw std::runtime_error("trace.csv line " + std::to_string(lineno) + ": expected " +
                               std::to_string(kColumnCount) + " columns");
    }
    TraceRecord r;
    r.t = v[0];
    r.pose = Pose::from(Vec4(v[1], v[2], v[3], v[4]));
    r.pose_d = Pose::from(Vec4(v[5], v[6], v[7], v[8]));
    r.e = TrajectoryError::from(Vec4(v[9], v[10], v[11], v[12]));
    r.v = BodyVelocity::from(Vec4(v[13], v[14], v[15], v[16]));
    r.v_c = BodyVelocity::from(Vec4(v[17], v[18], v[19], v[20]));
    r.tau_demand = Wrench::from(Vec4(v[21], v[22], v[23], v[24]));
    for (int i = 0; i < 5; ++i) r.t_bar[i] = v[25 + i];
    for (int i = 0; i < 5; ++i) r.saturated[i] = v[30 + i] != 0.0;
    trace.push_back(r);
  }
  return trace;
}

void write_summary_csv(std::ostream& out, const Metrics& m) {
  static const char* kVc[] = {"uc", "vc", "wc", "rc"};
  static const char* kAxis[] = {"x", "y", "z", "psi"};
  out << "key,value\n";
  out << "records," << m.records << '\n';
  for (int i = 0; i < 4; ++i) out << "max_abs_" << kVc[i] << ',' << format_double(m.max_abs_vc[i]) << '\n';
  for (int i = 0; i < 4; ++i) out << "peak_" << kVc[i] << ',' << format_double(m.peak_vc[i]) << '\n';
  for (int i = 0; i < 5; ++i) out << "max_abs_T" << i + 1 << ',' << format_double(m.max_abs_t_bar[i]) << '\n';
  for (int i = 0; i < 5; ++i) out << "peak_T" << i + 1 << ',' << format_double(m.peak_t_bar[i]) << '\n';
  out << "saturated_steps," << m.saturated_steps << '\n';
  const ErrorStats& w = m.final_window;
  out << "final_window_start," << format_double(w.window_start) << '\n';
  out << "final_mean_position_error," << format_double(w.mean_position_error) << '\n';
  out << "final_max_position_error," << format_double(w.max_position_error) << '\n';
  for (int i = 0; i < 4; ++i) {
    out << "final_mean_abs_e" << kAxis[i] << ',' << format_double(w.mean_abs_error[i]) << '\n';
  }
  for (int i = 0; i < 4; ++i) {
    out << "final_max_abs_e" << kAxis[i] << ',' << format_double(w.max_abs_error[i]) << '\n';
  }
}

std::string to_json_string(const RunManifest& m) {
  nlohmann::json doc;
  doc["scenario"] = m.scenario;
  doc["checksum"] = m.checksum;
  doc["seed"] = m.seed;
  doc["mode"] = m.mode;
  doc["started_at"] = m.started_at;
  doc["finished_at"] = m.finished_at;
  doc["trace_format"] = m.trace_format;
  doc["records"] = m.records;
  doc["diverged"] = m.diverged;
  if (m.diverged) doc["diverged_at"] = m.diverged_at;
  doc["outputs"] = m.outputs;
  return doc.dump(2) + "\n";
}

RunManifest parse_manifest(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  RunManifest m;
  m.scenario = doc.at("scenario").get<std::string>();
  m.checksum = doc.at("checksum").get<std::string>();
  m.seed = doc.at("seed").get<std::uint64_t>();
  m.mode = doc.at("mode").get<std::string>();
  m.started_at = doc.at("started_at").get<std::string>();
  m.finished_at = doc.at("finished_at").get<std::string>();
  m.trace_format = doc.at("trace_format").get<std::string>();
  m.records = doc.at("records").get<std::size_t>();
  m.diverged = doc.at("diverged").get<bool>();
  if (m.diverged) m.diverged_at = doc.at("diverged_at").get<double>();
  m.outputs = doc.at("outputs").get<std::vector<std::string>>();
  return m;
}

}  // namespace fbstt
