#include "fbstt/config.hpp"

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace fbstt {

namespace {

using nlohmann::json;

[[noreturn]] void constraint(const std::string& msg) { throw ConfigError(ConfigError::Kind::kConstraint, msg); }

json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& item : node) arr.push_back(yaml_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (obj.contains(key)) throw ConfigError(ConfigError::Kind::kSyntax, "duplicate key '" + key + "'");
        obj[key] = yaml_to_json(kv.second);
      }
      return obj;
    }
    case YAML::NodeType::Scalar: {
      const std::string& s = node.Scalar();
      if (node.Tag() == "!") return s;  // quoted scalar
      if (s == "true" || s == "True") return true;
      if (s == "false" || s == "False") return false;
      std::uint64_t u = 0;
      if (YAML::convert<std::uint64_t>::decode(node, u) && s.find_first_of(".eE") == std::string::npos &&
          s.front() != '-') {
        return u;
      }
      double d = 0.0;
      if (YAML::convert<double>::decode(node, d)) return d;
      return s;
    }
  }
  return nullptr;
}

// Reads fields out of one JSON object, rejecting keys nobody asked for.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) constraint(label("") + ": expected a mapping");
  }

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.count(key)) constraint("unknown key '" + label(key) + "'");
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key) && !obj_.at(key).is_null();
  }

  const json& at(const std::string& key) { return obj_.at(key); }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number()) constraint(label(key) + ": expected a number");
    out = v.get<double>();
  }

  void unsigned_int(const std::string& key, std::uint64_t& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number_unsigned()) constraint(label(key) + ": expected a non-negative integer");
    out = v.get<std::uint64_t>();
  }

  void text(const std::string& key, std::string& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_string()) constraint(label(key) + ": expected a string");
    out = v.get<std::string>();
  }

  // Accepts a list of four numbers or a single scalar broadcast to all four.
  void vec4(const std::string& key, Vec4& out, bool allow_scalar = false) {
    if (!has(key)) return;
    const json& v = at(key);
    if (allow_scalar && v.is_number()) {
      out.setConstant(v.get<double>());
      return;
    }
    if (!v.is_array() || v.size() != 4) constraint(label(key) + ": expected a list of 4 numbers");
    for (int i = 0; i < 4; ++i) {
      if (!v[i].is_number()) constraint(label(key) + ": expected a list of 4 numbers");
      out[i] = v[i].get<double>();
    }
  }

  // A list of 4 numbers is a diagonal; a list of 4 lists of 4 is a full matrix.
  void mat4(const std::string& key, Mat4& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_array() || v.size() != 4) constraint(label(key) + ": expected 4 diagonal entries or a 4x4 matrix");
    if (v[0].is_array()) {
      for (int i = 0; i < 4; ++i) {
        if (!v[i].is_array() || v[i].size() != 4) constraint(label(key) + ": expected a 4x4 matrix");
        for (int j = 0; j < 4; ++j) {
          if (!v[i][j].is_number()) constraint(label(key) + ": expected a 4x4 matrix");
          out(i, j) = v[i][j].get<double>();
        }
      }
      return;
    }
    Vec4 diag;
    vec4(key, diag);
    out = diag.asDiagonal();
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    static const json kEmpty = json::object();
    if (!obj_.contains(key) || obj_.at(key).is_null()) return Section(kEmpty, label(key));
    return Section(obj_.at(key), label(key));
  }

  std::string label(const std::string& key) const {
    if (path_.empty()) return key;
    return key.empty() ? path_ : path_ + "." + key;
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_pose(Section sec, Pose& p) {
  sec.number("x", p.x);
  sec.number("y", p.y);
  sec.number("z", p.z);
  sec.number("psi", p.psi);
}

void read_velocity(Section sec, BodyVelocity& v) {
  sec.number("u", v.u);
  sec.number("v", v.v);
  sec.number("w", v.w);
  sec.number("r", v.r);
}

ScenarioConfig from_json(const json& doc) {
  ScenarioConfig cfg;
  Section root(doc, "");
  root.text("name", cfg.name);
  if (root.has("mode")) {
    if (!root.at("mode").is_string()) constraint("mode: expected \"fbstt\" or \"bstt\"");
    try {
      cfg.mode = parse_mode(root.at("mode").get<std::string>());
    } catch (const std::invalid_argument& e) {
      constraint(std::string("mode: ") + e.what());
    }
  }
  root.number("dt", cfg.dt);
  root.number("duration", cfg.duration);
  root.unsigned_int("seed", cfg.seed);
  read_pose(root.child("initial_pose"), cfg.initial_pose);
  read_velocity(root.child("initial_velocity"), cfg.initial_velocity);
  {
    Section noise = root.child("noise");
    noise.number("amplitude", cfg.noise.amplitude);
    noise.number("filter_time_constant", cfg.noise.filter_time_constant);
  }
  {
    Section plant = root.child("plant");
    plant.mat4("mass", cfg.plant.mass);
    plant.mat4("linear_drag", cfg.plant.linear_drag);
    plant.mat4("quadratic_drag", cfg.plant.quadratic_drag);
    plant.vec4("restoring", cfg.plant.restoring);
    if (plant.has("coriolis_mass")) {
      const json& v = plant.at("coriolis_mass");
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        constraint("plant.coriolis_mass: expected a list of 2 numbers");
      }
      cfg.plant.coriolis_mass_u = v[0].get<double>();
      cfg.plant.coriolis_mass_v = v[1].get<double>();
    }
  }
  {
    Section thr = root.child("thrusters");
    thr.number("alpha", cfg.thrusters.alpha);
    thr.number("a", cfg.thrusters.a);
    thr.number("b", cfg.thrusters.b);
    thr.number("thrust_max", cfg.thrust_max);
  }
  {
    Section kin = root.child("kinematic");
    kin.number("k", cfg.kinematic.k);
    kin.number("k_z", cfg.kinematic.k_z);
    kin.number("k_psi", cfg.kinematic.k_psi);
    kin.vec4("v_max", cfg.kinematic.v_max);
  }
  {
    Section smc = root.child("smc");
    smc.number("lambda", cfg.smc.lambda);
    smc.vec4("k1", cfg.smc.k1, true);
    smc.vec4("k2", cfg.smc.k2, true);
    smc.number("r_exp", cfg.smc.r_exp);
    smc.number("gamma", cfg.smc.gamma_adapt);
    smc.number("k_fb", cfg.smc.k_fb);
    smc.number("estimate_factor", cfg.estimate_factor);
    std::string sw;
    smc.text("switching", sw);
    if (sw == "plant_surface") {
      cfg.smc.switching = SwitchingConvention::kPlantSurface;
    } else if (sw == "literal") {
      cfg.smc.switching = SwitchingConvention::kLiteral;
    } else if (!sw.empty()) {
      constraint("smc.switching: expected \"plant_surface\" or \"literal\"");
    }
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    constraint(e.what());
  }
  return cfg;
}

json vec_json(const Vec4& v) { return json::array({v[0], v[1], v[2], v[3]}); }

json mat_json(const Mat4& m) {
  const bool diagonal = (m - Mat4(m.diagonal().asDiagonal())).isZero(0.0);
  if (diagonal) return vec_json(m.diagonal());
  json rows = json::array();
  for (int i = 0; i < 4; ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return rows;
}

}  // namespace

Mode parse_mode(std::string_view text) {
  if (text == "fbstt" || text == "FBSTT") return Mode::kFbstt;
  if (text == "bstt" || text == "BSTT") return Mode::kBstt;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected fbstt or bstt)");
}

ScenarioConfig parse_config_text(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  json doc;
  if (first != std::string_view::npos && text[first] == '{') {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(ConfigError::Kind::kSyntax, std::string("malformed JSON: ") + e.what());
    }
  } else {
    YAML::Node node;
    try {
      node = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
      throw ConfigError(ConfigError::Kind::kSyntax, std::string("malformed YAML: ") + e.what());
    }
    doc = node.IsNull() ? json::object() : yaml_to_json(node);
  }
  return from_json(doc);
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(ConfigError::Kind::kIo, path.string() + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.kind(), path.string() + ": " + e.what());
  }
}

std::string to_json_string(const ScenarioConfig& cfg) {
  json doc;
  doc["name"] = cfg.name;
  doc["mode"] = to_string(cfg.mode);
  doc["dt"] = cfg.dt;
  doc["duration"] = cfg.duration;
  doc["seed"] = cfg.seed;
  doc["initial_pose"] = {{"x", cfg.initial_pose.x}, {"y", cfg.initial_pose.y},
                         {"z", cfg.initial_pose.z}, {"psi", cfg.initial_pose.psi}};
  doc["initial_velocity"] = {{"u", cfg.initial_velocity.u}, {"v", cfg.initial_velocity.v},
                             {"w", cfg.initial_velocity.w}, {"r", cfg.initial_velocity.r}};
  doc["noise"] = {{"amplitude", cfg.noise.amplitude},
                  {"filter_time_constant", cfg.noise.filter_time_constant}};
  doc["plant"] = {{"mass", mat_json(cfg.plant.mass)},
                  {"linear_drag", mat_json(cfg.plant.linear_drag)},
                  {"quadratic_drag", mat_json(cfg.plant.quadratic_drag)},
                  {"restoring", vec_json(cfg.plant.restoring)},
                  {"coriolis_mass", json::array({cfg.plant.coriolis_mass_u, cfg.plant.coriolis_mass_v})}};
  doc["thrusters"] = {{"alpha", cfg.thrusters.alpha},
                      {"a", cfg.thrusters.a},
                      {"b", cfg.thrusters.b},
                      {"thrust_max", cfg.thrust_max}};
  doc["kinematic"] = {{"k", cfg.kinematic.k},
                      {"k_z", cfg.kinematic.k_z},
                      {"k_psi", cfg.kinematic.k_psi},
                      {"v_max", vec_json(cfg.kinematic.v_max)}};
  doc["smc"] = {{"lambda", cfg.smc.lambda},
                {"k1", vec_json(cfg.smc.k1)},
                {"k2", vec_json(cfg.smc.k2)},
                {"r_exp", cfg.smc.r_exp},
                {"gamma", cfg.smc.gamma_adapt},
                {"k_fb", cfg.smc.k_fb},
                {"estimate_factor", cfg.estimate_factor},
                {"switching", cfg.smc.switching == SwitchingConvention::kPlantSurface ? "plant_surface"
                                                                                     : "literal"}};
  return doc.dump(2);
}

ScenarioConfig with_override(const ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  json doc = json::parse(to_json_string(cfg));
  json* node = &doc;
  std::string path;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string part(key.substr(start, dot == std::string_view::npos ? key.size() - start : dot - start));
    path += (path.empty() ? "" : ".") + part;
    if (!node->is_object() || !node->contains(part)) constraint("unknown key '" + path + "'");
    node = &(*node)[part];
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  YAML::Node parsed;
  try {
    parsed = YAML::Load(std::string(value));
  } catch (const YAML::Exception& e) {
    throw ConfigError(ConfigError::Kind::kSyntax, path + ": malformed value: " + e.what());
  }
  *node = yaml_to_json(parsed);
  return from_json(doc);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_checksum(const ScenarioConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_json_string(cfg))));
  return buf;
}

}  // namespace fbstt
