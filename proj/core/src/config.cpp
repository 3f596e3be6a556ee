#include "finfold/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "finfold/error.hpp"
#include "json.hpp"

namespace finfold {
namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
  throw Error(ErrorKind::kValidation, field + ": " + message);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) field_error(where.empty() ? "<root>" : where, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!keys.count(key)) {
      field_error(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

void read_number(const json& obj, const char* key, const std::string& where, double& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number()) field_error(where + "." + key, "expected a number");
  out = it->get<double>();
  if (!std::isfinite(out)) field_error(where + "." + key, "must be finite");
}

// Wraps a validate() call so its message is prefixed with the section name.
template <typename F>
void validate_section(const std::string& section, F&& check) {
  try {
    check();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kValidation) throw;
    std::string msg = e.what();
    // "mass must be positive" -> "robot.mass: must be positive"
    const auto space = msg.find(' ');
    if (space != std::string::npos && msg.find(' ', 0) > 0 &&
        msg.find_first_of(".:") > space) {
      field_error(section + "." + msg.substr(0, space), msg.substr(space + 1));
    }
    field_error(section, msg);
  }
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

constexpr const char* kRobotKeys[] = {
    "mass", "added_mass_factor", "body_length", "tail_span", "water_density",
    "drag_coefficient", "wetted_area_folded", "wetted_area_erected", "fin_area",
    "fin_lift_slope", "yaw_inertia", "yaw_damping_folded", "yaw_damping_erected",
    "fin_moment_arm", "tail_moment_arm", "turn_gain", "thrust_gain_erected"};

double* robot_field(RobotParams& r, std::string_view key) {
  if (key == "mass") return &r.mass;
  if (key == "added_mass_factor") return &r.added_mass_factor;
  if (key == "body_length") return &r.body_length;
  if (key == "tail_span") return &r.tail_span;
  if (key == "water_density") return &r.water_density;
  if (key == "drag_coefficient") return &r.drag_coefficient;
  if (key == "wetted_area_folded") return &r.wetted_area_folded;
  if (key == "wetted_area_erected") return &r.wetted_area_erected;
  if (key == "fin_area") return &r.fin_area;
  if (key == "fin_lift_slope") return &r.fin_lift_slope;
  if (key == "yaw_inertia") return &r.yaw_inertia;
  if (key == "yaw_damping_folded") return &r.yaw_damping_folded;
  if (key == "yaw_damping_erected") return &r.yaw_damping_erected;
  if (key == "fin_moment_arm") return &r.fin_moment_arm;
  if (key == "tail_moment_arm") return &r.tail_moment_arm;
  if (key == "turn_gain") return &r.turn_gain;
  if (key == "thrust_gain_erected") return &r.thrust_gain_erected;
  return nullptr;
}

void parse_robot(const json& j, RobotParams& r) {
  if (!j.is_object()) field_error("robot", "expected an object");
  for (const auto& [key, value] : j.items()) {
    double* field = robot_field(r, key);
    if (!field) field_error("robot." + key, "unknown key");
    read_number(j, key.c_str(), "robot", *field);
  }
}

FinSchedule parse_schedule(const json& j, const std::string& where) {
  if (!j.is_array()) field_error(where, "expected an array of [time, state]");
  std::vector<FinSchedule::Entry> entries;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_string()) {
      field_error(where, "entries must be [time, \"erected\"|\"folded\"]");
    }
    try {
      entries.push_back({e[0].get<double>(), parse_fin_state(e[1].get<std::string>())});
    } catch (const Error& err) {
      field_error(where, err.what());
    }
  }
  try {
    return FinSchedule(std::move(entries));
  } catch (const Error& err) {
    field_error(where, err.what());
  }
}

ExperimentConfig from_json(const json& root, const std::filesystem::path& base_dir) {
  reject_unknown(root, "",
                 {"seed", "robot", "midline", "power", "simulation", "gaits", "schedules",
                  "sweep", "output_dir", "calibration_file"});
  ExperimentConfig cfg;

  if (auto it = root.find("seed"); it != root.end()) {
    if (!it->is_number_unsigned()) field_error("seed", "expected a non-negative integer");
    cfg.seed = it->get<std::uint64_t>();
  }
  if (auto it = root.find("robot"); it != root.end()) parse_robot(*it, cfg.model.robot);
  cfg.model.midline.body_length = cfg.model.robot.body_length;

  if (auto it = root.find("midline"); it != root.end()) {
    reject_unknown(*it, "midline", {"a0", "a1", "a2", "wavelength"});
    read_number(*it, "a0", "midline", cfg.model.midline.a0);
    read_number(*it, "a1", "midline", cfg.model.midline.a1);
    read_number(*it, "a2", "midline", cfg.model.midline.a2);
    read_number(*it, "wavelength", "midline", cfg.model.midline.wavelength);
  }
  if (auto it = root.find("power"); it != root.end()) {
    reject_unknown(*it, "power", {"p0", "p1", "p_standby", "e_fold", "fold_action_duration"});
    auto& p = cfg.model.power;
    read_number(*it, "p0", "power", p.p0);
    read_number(*it, "p1", "power", p.p1);
    read_number(*it, "p_standby", "power", p.p_standby);
    read_number(*it, "e_fold", "power", p.e_fold);
    read_number(*it, "fold_action_duration", "power", p.fold_action_duration);
  }
  if (auto it = root.find("simulation"); it != root.end()) {
    reject_unknown(*it, "simulation",
                   {"dt", "straight_duration", "steady_window", "turn_duration",
                    "turn_max_duration", "phase_window", "phase_threshold", "phase_hold",
                    "markers", "speed_marker_fraction"});
    auto& s = cfg.simulation;
    read_number(*it, "dt", "simulation", s.dt);
    read_number(*it, "straight_duration", "simulation", s.straight_duration);
    read_number(*it, "steady_window", "simulation", s.steady_window);
    read_number(*it, "turn_duration", "simulation", s.turn_duration);
    read_number(*it, "turn_max_duration", "simulation", s.turn_max_duration);
    read_number(*it, "phase_window", "simulation", s.phases.window);
    read_number(*it, "phase_threshold", "simulation", s.phases.threshold);
    read_number(*it, "phase_hold", "simulation", s.phases.hold);
    read_number(*it, "speed_marker_fraction", "simulation", cfg.speed_marker_fraction);
    if (auto m = it->find("markers"); m != it->end()) {
      if (!m->is_number_integer()) field_error("simulation.markers", "expected an integer");
      cfg.markers = m->get<int>();
    }
  }
  if (auto it = root.find("gaits"); it != root.end()) {
    if (!it->is_array()) field_error("gaits", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string where = "gaits[" + std::to_string(i) + "]";
      const json& g = (*it)[i];
      reject_unknown(g, where, {"frequency", "amplitude_deg", "turn_bias_deg"});
      Gait gait;
      read_number(g, "frequency", where, gait.frequency);
      read_number(g, "amplitude_deg", where, gait.amplitude_deg);
      read_number(g, "turn_bias_deg", where, gait.turn_bias_deg);
      cfg.gaits.push_back(gait);
    }
  }
  if (auto it = root.find("schedules"); it != root.end()) {
    if (!it->is_object()) field_error("schedules", "expected an object");
    for (const auto& [name, value] : it->items()) {
      cfg.schedules.emplace(name, parse_schedule(value, "schedules." + name));
    }
  }
  if (auto it = root.find("sweep"); it != root.end()) {
    reject_unknown(*it, "sweep",
                   {"f_min", "f_max", "f_step", "fin_states", "amplitude_deg", "turn_bias_deg",
                    "include_turns"});
    auto& s = cfg.sweep;
    read_number(*it, "f_min", "sweep", s.f_min);
    read_number(*it, "f_max", "sweep", s.f_max);
    read_number(*it, "f_step", "sweep", s.f_step);
    read_number(*it, "amplitude_deg", "sweep", s.amplitude_deg);
    read_number(*it, "turn_bias_deg", "sweep", s.turn_bias_deg);
    if (auto f = it->find("fin_states"); f != it->end()) {
      if (!f->is_array()) field_error("sweep.fin_states", "expected an array");
      s.fin_states.clear();
      for (const auto& v : *f) {
        if (!v.is_string()) field_error("sweep.fin_states", "expected strings");
        try {
          s.fin_states.push_back(parse_fin_state(v.get<std::string>()));
        } catch (const Error& e) {
          field_error("sweep.fin_states", e.what());
        }
      }
    }
    if (auto b = it->find("include_turns"); b != it->end()) {
      if (!b->is_boolean()) field_error("sweep.include_turns", "expected a boolean");
      s.include_turns = b->get<bool>();
    }
  }
  if (auto it = root.find("output_dir"); it != root.end()) {
    if (!it->is_string()) field_error("output_dir", "expected a string");
    cfg.output_dir = it->get<std::string>();
  }
  if (auto it = root.find("calibration_file"); it != root.end()) {
    if (!it->is_string()) field_error("calibration_file", "expected a string");
    std::filesystem::path p = it->get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    cfg.calibration_file = p.string();
  }

  cfg.validate();
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  json root;
  root["seed"] = cfg.seed;

  json robot = json::object();
  RobotParams r = cfg.model.robot;
  for (const char* key : kRobotKeys) robot[key] = *robot_field(r, key);
  root["robot"] = robot;

  const auto& m = cfg.model.midline;
  root["midline"] = {{"a0", m.a0}, {"a1", m.a1}, {"a2", m.a2}, {"wavelength", m.wavelength}};
  const auto& p = cfg.model.power;
  root["power"] = {{"p0", p.p0},
                   {"p1", p.p1},
                   {"p_standby", p.p_standby},
                   {"e_fold", p.e_fold},
                   {"fold_action_duration", p.fold_action_duration}};
  const auto& s = cfg.simulation;
  root["simulation"] = {{"dt", s.dt},
                        {"straight_duration", s.straight_duration},
                        {"steady_window", s.steady_window},
                        {"turn_duration", s.turn_duration},
                        {"turn_max_duration", s.turn_max_duration},
                        {"phase_window", s.phases.window},
                        {"phase_threshold", s.phases.threshold},
                        {"phase_hold", s.phases.hold},
                        {"markers", cfg.markers},
                        {"speed_marker_fraction", cfg.speed_marker_fraction}};
  json gaits = json::array();
  for (const auto& g : cfg.gaits) {
    gaits.push_back({{"frequency", g.frequency},
                     {"amplitude_deg", g.amplitude_deg},
                     {"turn_bias_deg", g.turn_bias_deg}});
  }
  root["gaits"] = gaits;
  json schedules = json::object();
  for (const auto& [name, sched] : cfg.schedules) {
    json entries = json::array();
    for (const auto& e : sched.entries()) {
      entries.push_back({e.time, std::string(to_string(e.state))});
    }
    schedules[name] = entries;
  }
  root["schedules"] = schedules;
  json states = json::array();
  for (FinState f : cfg.sweep.fin_states) states.push_back(std::string(to_string(f)));
  root["sweep"] = {{"f_min", cfg.sweep.f_min},
                   {"f_max", cfg.sweep.f_max},
                   {"f_step", cfg.sweep.f_step},
                   {"fin_states", states},
                   {"amplitude_deg", cfg.sweep.amplitude_deg},
                   {"turn_bias_deg", cfg.sweep.turn_bias_deg},
                   {"include_turns", cfg.sweep.include_turns}};
  root["output_dir"] = cfg.output_dir;
  if (cfg.calibration_file) root["calibration_file"] = *cfg.calibration_file;
  return root;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::string msg = e.what();
    if (auto pos = msg.find("parse error"); pos != std::string::npos) msg = msg.substr(pos);
    throw Error(ErrorKind::kParse, what + " line " + std::to_string(line) + ", column " +
                                       std::to_string(col) + ": " + msg);
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  validate_section("robot", [&] { model.robot.validate(); });
  validate_section("midline", [&] { model.midline.validate(); });
  if (std::abs(model.midline.body_length - model.robot.body_length) > 1e-12) {
    field_error("midline.body_length", "must equal robot.body_length");
  }
  validate_section("power", [&] { model.power.validate(); });
  validate_section("simulation", [&] { simulation.validate(); });
  if (markers < 2) field_error("simulation.markers", "must be at least 2");
  if (!(speed_marker_fraction >= 0.0 && speed_marker_fraction <= 1.0)) {
    field_error("simulation.speed_marker_fraction", "must lie in [0, 1]");
  }
  for (std::size_t i = 0; i < gaits.size(); ++i) {
    validate_section("gaits[" + std::to_string(i) + "]", [&] { gaits[i].validate(); });
  }
  if (!(sweep.f_min > 0.0)) field_error("sweep.f_min", "must be positive");
  if (!(sweep.f_max >= sweep.f_min)) field_error("sweep.f_max", "must be >= f_min");
  if (!(sweep.f_step > 0.0)) field_error("sweep.f_step", "must be positive");
  if (sweep.fin_states.empty()) field_error("sweep.fin_states", "must not be empty");
  validate_section("sweep", [&] {
    Gait{sweep.f_min, sweep.amplitude_deg, sweep.turn_bias_deg}.validate();
  });
  if (sweep.include_turns && sweep.turn_bias_deg == 0.0) {
    field_error("sweep.turn_bias_deg", "must be non-zero when include_turns is set");
  }
  if (calibration_file && !std::filesystem::exists(*calibration_file)) {
    field_error("calibration_file", "file '" + *calibration_file + "' does not exist");
  }
}

ExperimentConfig parse_experiment_config(std::string_view text,
                                         const std::filesystem::path& base_dir) {
  return from_json(parse_json(text, "config"), base_dir);
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorKind::kIo, "config file '" + path.string() + "' does not exist");
  }
  return parse_experiment_config(read_text(path), path.parent_path());
}

std::string serialize_experiment_config(const ExperimentConfig& config) {
  return to_json(config).dump(2) + "\n";
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const ExperimentConfig& config) {
  if (flag) return *flag;
  if (const char* env = std::getenv("FINFOLD_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw Error(ErrorKind::kValidation, "FINFOLD_SEED: expected a non-negative integer");
    }
    return v;
  }
  return config.seed;
}

std::string serialize_calibration(const CalibrationResult& result) {
  json root;
  json params = json::object();
  json bounds = json::object();
  for (const auto& s : result.parameters.specs()) {
    params[s.name] = s.value;
    bounds[s.name] = {s.lower, s.upper};
  }
  root["parameters"] = params;
  root["bounds"] = bounds;
  json residuals = json::object();
  for (const auto& r : result.residuals) {
    json entry = {{"observable", std::string(to_string(r.observable))},
                  {"simulated", r.simulated},
                  {"relative_error", r.relative_error},
                  {"within_tolerance", r.within_tolerance},
                  {"hard", r.hard}};
    entry["lower"] = std::isfinite(r.lower) ? json(r.lower) : json(nullptr);
    entry["upper"] = std::isfinite(r.upper) ? json(r.upper) : json(nullptr);
    residuals[r.name] = entry;
  }
  root["residuals"] = residuals;
  root["objective"] = result.objective;
  root["seed"] = result.seed;
  root["passed"] = result.passed;
  return root.dump(2) + "\n";
}

void write_calibration_file(const std::filesystem::path& path, const CalibrationResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << serialize_calibration(result);
  if (!out) throw Error(ErrorKind::kIo, "write to '" + path.string() + "' failed");
}

std::map<std::string, double> read_calibration_file(const std::filesystem::path& path) {
  const json root = parse_json(read_text(path), path.string());
  if (!root.is_object() || !root.contains("parameters") || !root["parameters"].is_object()) {
    throw Error(ErrorKind::kValidation, "parameters: missing from calibration file");
  }
  std::map<std::string, double> out;
  const auto& known = FreeParameters::names();
  for (const auto& [name, value] : root["parameters"].items()) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      field_error("parameters." + name, "unknown parameter");
    }
    if (!value.is_number()) field_error("parameters." + name, "expected a number");
    out[name] = value.get<double>();
  }
  return out;
}

SwimmerModel apply_calibration(const SwimmerModel& base,
                               const std::map<std::string, double>& values) {
  FreeParameters params = FreeParameters::from_model(base);
  std::vector<ParameterSpec> specs;
  for (const auto& s : params.specs()) {
    auto it = values.find(s.name);
    if (it == values.end()) continue;
    specs.push_back({s.name, it->second, std::min(s.lower, it->second),
                     std::max(s.upper, it->second), false});
  }
  SwimmerModel model = FreeParameters(std::move(specs)).apply(base);
  model.validate();
  return model;
}

SwimmerModel effective_model(const ExperimentConfig& config) {
  if (!config.calibration_file) return config.model;
  return apply_calibration(config.model, read_calibration_file(*config.calibration_file));
}

}  // namespace finfold
