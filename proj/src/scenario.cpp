#include "slungload/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "slungload/error.hpp"

namespace slungload {
namespace {

using nlohmann::json;

// A view of one object in the document together with its dotted path, so
// every error can name the field that caused it.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& item : j_.items()) {
      if (!allowed.count(item.key())) {
        throw ConfigError(child_path(item.key()), "unknown field");
      }
    }
  }

  bool has(const std::string& key) const {
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& raw(const std::string& key) const { return j_.at(key); }

  Node child(const std::string& key) const {
    return Node(j_.at(key), child_path(key));
  }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return as_number(raw(key), child_path(key));
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!raw(key).is_boolean()) {
      throw ConfigError(child_path(key), "expected true or false");
    }
    return raw(key).get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    if (!raw(key).is_string()) throw ConfigError(child_path(key), "expected a string");
    return raw(key).get<std::string>();
  }

  Vec3 vec3(const std::string& key, const Vec3& fallback) const {
    if (!has(key)) return fallback;
    return as_vec3(raw(key), child_path(key));
  }

  static double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
    return v;
  }

  static Vec3 as_vec3(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) {
      throw ConfigError(path, "expected an array of 3 numbers");
    }
    return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]"),
            as_number(j[2], path + "[2]")};
  }

  // Either a 3-vector (diagonal) or a 3x3 nested array.
  static Mat3 as_mat3(const json& j, const std::string& path) {
    if (j.is_array() && j.size() == 3 && j[0].is_number()) {
      return as_vec3(j, path).asDiagonal();
    }
    if (!j.is_array() || j.size() != 3) {
      throw ConfigError(path, "expected a 3-vector or a 3x3 array");
    }
    Mat3 m;
    for (int r = 0; r < 3; ++r) {
      m.row(r) = as_vec3(j[r], path + "[" + std::to_string(r) + "]").transpose();
    }
    return m;
  }

  Mat3 mat3(const std::string& key, const Mat3& fallback) const {
    if (!has(key)) return fallback;
    return as_mat3(raw(key), child_path(key));
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
};

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

std::vector<Vec3> vec3_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of 3-vectors");
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(Node::as_vec3(j[i], index_path(path, i)));
  }
  return out;
}

PidGains read_pid(const Node& node, const PidGains& fallback) {
  return {node.vec3("kp", fallback.kp), node.vec3("kd", fallback.kd),
          node.vec3("ki", fallback.ki)};
}

VehicleGains read_vehicle_gains(const Node& node, const VehicleGains& fallback) {
  node.allow_only({"kp", "kd", "ki", "rho", "attitude_kd", "beta", "gamma"});
  VehicleGains g;
  g.position = read_pid(node, fallback.position);
  g.attitude.rho = node.vec3("rho", fallback.attitude.rho);
  g.attitude.kd = node.mat3("attitude_kd", fallback.attitude.kd);
  g.attitude.beta = node.vec3("beta", fallback.attitude.beta);
  g.attitude.gamma = node.vec3("gamma", fallback.attitude.gamma);
  return g;
}

VehicleParams read_vehicle_params(const Node& node,
                                  const VehicleParams& fallback) {
  VehicleParams p;
  p.mass = node.number("mass", fallback.mass);
  p.inertia = node.mat3("inertia", fallback.inertia);
  p.cable_length = node.number("cable_length", fallback.cable_length);
  return p;
}

void require_non_negative(const Vec3& v, const std::string& path) {
  if (!((v.array() >= 0.0).all())) throw ConfigError(path, "entries must be >= 0");
}

// Loading accepts any non-negative gain set so that the analysis can report
// on it; ControllerGains::validate() is the strict check before simulation.
void validate_gains_loosely(const ControllerGains& g) {
  require_non_negative(g.load.kp, "gains.load.kp");
  require_non_negative(g.load.kd, "gains.load.kd");
  require_non_negative(g.load.ki, "gains.load.ki");
  for (std::size_t i = 0; i < g.vehicles.size(); ++i) {
    const std::string p = index_path("vehicles", i) + ".gains";
    const VehicleGains& v = g.vehicles[i];
    require_non_negative(v.position.kp, p + ".kp");
    require_non_negative(v.position.kd, p + ".kd");
    require_non_negative(v.position.ki, p + ".ki");
    require_non_negative(v.attitude.rho, p + ".rho");
    require_non_negative(v.attitude.beta, p + ".beta");
    require_non_negative(v.attitude.gamma, p + ".gamma");
  }
}

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json to_json(const Mat3& m) {
  json out = json::array();
  for (int r = 0; r < 3; ++r) out.push_back(to_json(Vec3(m.row(r).transpose())));
  return out;
}

json to_json(const std::vector<Vec3>& vs) {
  json out = json::array();
  for (const Vec3& v : vs) out.push_back(to_json(v));
  return out;
}

json to_json(const PidGains& g) {
  return {{"kp", to_json(g.kp)}, {"kd", to_json(g.kd)}, {"ki", to_json(g.ki)}};
}

SystemState read_explicit_state(const Node& node, const ScenarioConfig& cfg) {
  node.allow_only({"preset", "load", "vehicles"});
  SystemState s;
  if (node.has("load")) {
    const Node load = node.child("load");
    load.allow_only({"position", "velocity"});
    s.load_position = load.vec3("position", Vec3::Zero());
    s.load_velocity = load.vec3("velocity", Vec3::Zero());
  }
  const std::string vpath = node.child_path("vehicles");
  if (!node.has("vehicles") || !node.raw("vehicles").is_array()) {
    throw ConfigError(vpath, "explicit initial conditions need a vehicles array");
  }
  const json& vs = node.raw("vehicles");
  if (static_cast<int>(vs.size()) != cfg.vehicle_count()) {
    throw ConfigError(vpath, "expected " + std::to_string(cfg.vehicle_count()) +
                                 " entries, got " + std::to_string(vs.size()));
  }
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const Node v(vs[i], index_path(vpath, i));
    v.allow_only({"position", "velocity", "attitude", "body_rate"});
    VehicleState st;
    if (!v.has("position")) throw ConfigError(v.child_path("position"), "required");
    st.position = v.vec3("position", Vec3::Zero());
    st.velocity = v.vec3("velocity", Vec3::Zero());
    if (v.has("attitude")) {
      const json& q = v.raw("attitude");
      const std::string qp = v.child_path("attitude");
      if (!q.is_array() || q.size() != 4) {
        throw ConfigError(qp, "expected [q0, q1, q2, q3]");
      }
      const Vec4 c(Node::as_number(q[0], qp), Node::as_number(q[1], qp),
                   Node::as_number(q[2], qp), Node::as_number(q[3], qp));
      if (c.norm() == 0.0) throw ConfigError(qp, "must be non-zero");
      st.attitude = Quaternion::FromCoeffs(c);
    }
    st.body_rate = v.vec3("body_rate", Vec3::Zero());
    s.vehicles.push_back(st);
  }
  return s;
}

void check_constraint(const SystemState& s, const SystemParams& params,
                      const std::string& path) {
  for (std::size_t i = 0; i < s.vehicles.size(); ++i) {
    const Vec3 d = s.vehicles[i].position - s.load_position;
    const double L = params.vehicles[i].cable_length;
    if (std::abs(d.norm() - L) > 1e-9) {
      std::ostringstream msg;
      msg << "violates the cable constraint: distance to load " << d.norm()
          << " m, cable length " << L << " m";
      throw ConfigError(index_path(path + ".vehicles", i) + ".position", msg.str());
    }
    const Vec3 d_dot = s.vehicles[i].velocity - s.load_velocity;
    if (std::abs(d.dot(d_dot)) > 1e-9 * std::max(1.0, L)) {
      throw ConfigError(index_path(path + ".vehicles", i) + ".velocity",
                        "relative velocity stretches the cable");
    }
  }
}

}  // namespace

std::string to_string(InitialPreset preset) {
  switch (preset) {
    case InitialPreset::kReference:
      return "reference";
    case InitialPreset::kSymmetric:
      return "symmetric";
    case InitialPreset::kExplicit:
      return "explicit";
  }
  return "unknown";
}

long ScenarioConfig::step_count() const {
  return std::lround(duration / dt);
}

ScenarioConfig ScenarioConfig::Default() {
  ScenarioConfig c;
  c.params.vehicles.assign(3, VehicleParams{});
  c.gains = ControllerGains::Default(3);
  return c;
}

ScenarioConfig load_config(const json& doc) {
  const Node root(doc, "");
  root.allow_only({"gravity", "load", "vehicle_count", "vehicle_defaults",
                   "vehicles", "gains", "vehicle_limits", "trajectory",
                   "allocation", "controller", "integration", "initial",
                   "output"});
  ScenarioConfig cfg;
  SystemParams& params = cfg.params;
  params.gravity = root.number("gravity", 9.81);
  if (root.has("load")) {
    const Node load = root.child("load");
    load.allow_only({"mass"});
    params.load_mass = load.number("mass", params.load_mass);
  }

  // Vehicle count: explicit list length, else vehicle_count, else 3.
  const bool has_list = root.has("vehicles");
  if (has_list && !root.raw("vehicles").is_array()) {
    throw ConfigError("vehicles", "expected an array");
  }
  int n = 3;
  if (root.has("vehicle_count")) {
    const double v = root.number("vehicle_count", 3);
    if (v < 1 || v != std::floor(v)) {
      throw ConfigError("vehicle_count", "must be a positive integer");
    }
    n = static_cast<int>(v);
    if (has_list && static_cast<int>(root.raw("vehicles").size()) != n) {
      throw ConfigError("vehicles", "length disagrees with vehicle_count");
    }
  } else if (has_list) {
    n = static_cast<int>(root.raw("vehicles").size());
    if (n < 1) throw ConfigError("vehicles", "at least one vehicle is required");
  }

  VehicleParams vehicle_defaults;
  if (root.has("vehicle_defaults")) {
    const Node d = root.child("vehicle_defaults");
    d.allow_only({"mass", "inertia", "cable_length"});
    vehicle_defaults = read_vehicle_params(d, vehicle_defaults);
  }

  PidGains load_gains = ControllerGains::DefaultLoadGains();
  VehicleGains vehicle_gains = ControllerGains::DefaultVehicleGains();
  if (root.has("gains")) {
    const Node gains = root.child("gains");
    gains.allow_only({"load", "vehicle"});
    if (gains.has("load")) {
      const Node l = gains.child("load");
      l.allow_only({"kp", "kd", "ki"});
      load_gains = read_pid(l, load_gains);
    }
    if (gains.has("vehicle")) {
      vehicle_gains = read_vehicle_gains(gains.child("vehicle"), vehicle_gains);
    }
  }
  cfg.gains.load = load_gains;

  for (int i = 0; i < n; ++i) {
    VehicleParams vp = vehicle_defaults;
    VehicleGains vg = vehicle_gains;
    if (has_list) {
      const Node v(root.raw("vehicles")[i], index_path("vehicles", i));
      v.allow_only({"mass", "inertia", "cable_length", "gains"});
      vp = read_vehicle_params(v, vehicle_defaults);
      if (v.has("gains")) vg = read_vehicle_gains(v.child("gains"), vehicle_gains);
    }
    params.vehicles.push_back(vp);
    cfg.gains.vehicles.push_back(vg);
  }

  if (root.has("vehicle_limits")) {
    const Node lim = root.child("vehicle_limits");
    lim.allow_only({"thrust_max"});
    if (lim.has("thrust_max")) params.thrust_limit = lim.number("thrust_max", 0.0);
  }

  if (root.has("integration")) {
    const Node integ = root.child("integration");
    integ.allow_only({"dt", "duration", "baumgarte"});
    cfg.dt = integ.number("dt", cfg.dt);
    cfg.duration = integ.number("duration", cfg.duration);
    if (integ.has("baumgarte")) {
      const Node b = integ.child("baumgarte");
      b.allow_only({"omega", "zeta"});
      params.baumgarte.omega = b.number("omega", params.baumgarte.omega);
      params.baumgarte.zeta = b.number("zeta", params.baumgarte.zeta);
    }
  }
  if (!(cfg.dt > 0.0 && cfg.dt <= 0.01)) {
    throw ConfigError("integration.dt", "must lie in (0, 0.01] s");
  }
  if (!(cfg.duration > 0.0)) {
    throw ConfigError("integration.duration", "must be positive");
  }

  params.validate();
  validate_gains_loosely(cfg.gains);

  if (root.has("trajectory")) {
    const Node t = root.child("trajectory");
    const std::string type = t.string("type", "spiral");
    const auto kind = parse_trajectory_kind(type);
    if (!kind) throw ConfigError("trajectory.type", "unknown trajectory '" + type + "'");
    cfg.trajectory.kind = *kind;
    switch (*kind) {
      case TrajectoryKind::kSpiral: {
        t.allow_only({"type", "radius", "angular_rate", "climb_rate"});
        SpiralParams& s = cfg.trajectory.spiral;
        s.radius = t.number("radius", s.radius);
        s.angular_rate = t.number("angular_rate", s.angular_rate);
        s.climb_rate = t.number("climb_rate", s.climb_rate);
        break;
      }
      case TrajectoryKind::kHover:
        t.allow_only({"type", "position"});
        cfg.trajectory.hover.position = t.vec3("position", Vec3::Zero());
        break;
      case TrajectoryKind::kLine: {
        t.allow_only({"type", "start", "end", "max_speed", "max_acceleration",
                      "start_time"});
        LineParams& l = cfg.trajectory.line;
        l.start = t.vec3("start", l.start);
        l.end = t.vec3("end", l.end);
        l.max_speed = t.number("max_speed", l.max_speed);
        l.max_acceleration = t.number("max_acceleration", l.max_acceleration);
        l.start_time = t.number("start_time", l.start_time);
        if (!(l.max_speed > 0.0)) throw ConfigError("trajectory.max_speed", "must be positive");
        if (!(l.max_acceleration > 0.0)) {
          throw ConfigError("trajectory.max_acceleration", "must be positive");
        }
        break;
      }
    }
  }

  AllocationStrategy& alloc = cfg.controller.allocation;
  alloc.kind = n == 3 ? AllocationKind::kPaperFixedShare : AllocationKind::kUniform;
  if (root.has("allocation")) {
    const Node a = root.child("allocation");
    a.allow_only({"strategy", "shares", "nominal"});
    if (a.has("strategy")) {
      const std::string name = a.string("strategy", "");
      const auto kind = parse_allocation_kind(name);
      if (!kind) throw ConfigError("allocation.strategy", "unknown strategy '" + name + "'");
      alloc.kind = *kind;
    }
    if (a.has("shares")) alloc.vectors = vec3_list(a.raw("shares"), "allocation.shares");
    if (a.has("nominal")) alloc.vectors = vec3_list(a.raw("nominal"), "allocation.nominal");
  }
  switch (alloc.kind) {
    case AllocationKind::kPaperFixedShare:
      if (n != 3) {
        throw ConfigError("allocation.strategy",
                          "paper-fixed-share requires exactly 3 vehicles");
      }
      alloc.vectors.clear();
      break;
    case AllocationKind::kFixedShare:
      if (static_cast<int>(alloc.vectors.size()) != n - 1) {
        throw ConfigError("allocation.shares",
                          "expected " + std::to_string(n - 1) + " vectors");
      }
      break;
    case AllocationKind::kMinNorm:
      if (!alloc.vectors.empty() && static_cast<int>(alloc.vectors.size()) != n) {
        throw ConfigError("allocation.nominal",
                          "expected " + std::to_string(n) + " vectors");
      }
      break;
    case AllocationKind::kUniform:
      alloc.vectors.clear();
      break;
  }

  if (root.has("controller")) {
    const Node c = root.child("controller");
    c.allow_only({"integral_limit", "derivative_cutoff", "tension_floor"});
    ControllerOptions& o = cfg.controller;
    o.integral_limit = c.number("integral_limit", o.integral_limit);
    o.derivative_cutoff = c.number("derivative_cutoff", o.derivative_cutoff);
    o.tension_floor = c.number("tension_floor", o.tension_floor);
    if (!(o.integral_limit > 0.0)) throw ConfigError("controller.integral_limit", "must be positive");
    if (!(o.derivative_cutoff > 0.0)) {
      throw ConfigError("controller.derivative_cutoff", "must be positive");
    }
    if (!(o.tension_floor > 0.0)) throw ConfigError("controller.tension_floor", "must be positive");
  }

  cfg.initial.preset = n == 3 ? InitialPreset::kReference : InitialPreset::kSymmetric;
  if (root.has("initial")) {
    const Node init = root.child("initial");
    const std::string preset =
        init.string("preset", to_string(cfg.initial.preset));
    if (preset == "reference") {
      init.allow_only({"preset"});
      cfg.initial.preset = InitialPreset::kReference;
    } else if (preset == "symmetric") {
      init.allow_only({"preset", "cone_angle", "azimuth_offset"});
      cfg.initial.preset = InitialPreset::kSymmetric;
      cfg.initial.cone_angle = init.number("cone_angle", cfg.initial.cone_angle);
      cfg.initial.azimuth_offset =
          init.number("azimuth_offset", cfg.initial.azimuth_offset);
    } else if (preset == "explicit") {
      cfg.initial.preset = InitialPreset::kExplicit;
      cfg.initial.state = read_explicit_state(init, cfg);
    } else {
      throw ConfigError("initial.preset", "unknown preset '" + preset + "'");
    }
  }
  if (cfg.initial.preset == InitialPreset::kReference && n != 3) {
    throw ConfigError("initial.preset", "the reference preset requires 3 vehicles");
  }

  if (root.has("output")) {
    const Node o = root.child("output");
    o.allow_only({"plots", "decimate", "analysis_cutoff"});
    cfg.output.plots = o.boolean("plots", cfg.output.plots);
    const double dec = o.number("decimate", cfg.output.decimate);
    if (dec < 1 || dec != std::floor(dec)) {
      throw ConfigError("output.decimate", "must be a positive integer");
    }
    cfg.output.decimate = static_cast<int>(dec);
    cfg.output.analysis_cutoff = o.number("analysis_cutoff", cfg.output.analysis_cutoff);
    if (cfg.output.analysis_cutoff < 0.0) {
      throw ConfigError("output.analysis_cutoff", "must be >= 0");
    }
  }

  // Builds and checks the initial pose now so a bad document fails at load.
  (void)initial_state(cfg);
  return cfg;
}

ScenarioConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "malformed config " + path.string() + ": " + e.what());
  }
  return load_config(doc);
}

json to_json(const ScenarioConfig& c) {
  json doc;
  doc["gravity"] = c.params.gravity;
  doc["load"] = {{"mass", c.params.load_mass}};
  doc["vehicle_count"] = c.vehicle_count();
  json vehicles = json::array();
  for (int i = 0; i < c.vehicle_count(); ++i) {
    const VehicleParams& vp = c.params.vehicles[i];
    const VehicleGains& vg = c.gains.vehicles[i];
    json gains = to_json(vg.position);
    gains["rho"] = to_json(vg.attitude.rho);
    gains["attitude_kd"] = to_json(vg.attitude.kd);
    gains["beta"] = to_json(vg.attitude.beta);
    gains["gamma"] = to_json(vg.attitude.gamma);
    vehicles.push_back({{"mass", vp.mass},
                        {"inertia", to_json(vp.inertia)},
                        {"cable_length", vp.cable_length},
                        {"gains", gains}});
  }
  doc["vehicles"] = vehicles;
  doc["gains"] = {{"load", to_json(c.gains.load)}};
  doc["vehicle_limits"] = {
      {"thrust_max", c.params.thrust_limit ? json(*c.params.thrust_limit) : json(nullptr)}};

  json traj = {{"type", to_string(c.trajectory.kind)}};
  switch (c.trajectory.kind) {
    case TrajectoryKind::kSpiral:
      traj["radius"] = c.trajectory.spiral.radius;
      traj["angular_rate"] = c.trajectory.spiral.angular_rate;
      traj["climb_rate"] = c.trajectory.spiral.climb_rate;
      break;
    case TrajectoryKind::kHover:
      traj["position"] = to_json(c.trajectory.hover.position);
      break;
    case TrajectoryKind::kLine:
      traj["start"] = to_json(c.trajectory.line.start);
      traj["end"] = to_json(c.trajectory.line.end);
      traj["max_speed"] = c.trajectory.line.max_speed;
      traj["max_acceleration"] = c.trajectory.line.max_acceleration;
      traj["start_time"] = c.trajectory.line.start_time;
      break;
  }
  doc["trajectory"] = traj;

  json alloc = {{"strategy", to_string(c.controller.allocation.kind)}};
  if (c.controller.allocation.kind == AllocationKind::kFixedShare) {
    alloc["shares"] = to_json(c.controller.allocation.vectors);
  } else if (c.controller.allocation.kind == AllocationKind::kMinNorm &&
             !c.controller.allocation.vectors.empty()) {
    alloc["nominal"] = to_json(c.controller.allocation.vectors);
  }
  doc["allocation"] = alloc;
  doc["controller"] = {{"integral_limit", c.controller.integral_limit},
                       {"derivative_cutoff", c.controller.derivative_cutoff},
                       {"tension_floor", c.controller.tension_floor}};
  doc["integration"] = {
      {"dt", c.dt},
      {"duration", c.duration},
      {"baumgarte",
       {{"omega", c.params.baumgarte.omega}, {"zeta", c.params.baumgarte.zeta}}}};

  json init = {{"preset", to_string(c.initial.preset)}};
  if (c.initial.preset == InitialPreset::kSymmetric) {
    init["cone_angle"] = c.initial.cone_angle;
    init["azimuth_offset"] = c.initial.azimuth_offset;
  } else if (c.initial.preset == InitialPreset::kExplicit) {
    const SystemState& s = c.initial.state;
    init["load"] = {{"position", to_json(s.load_position)},
                    {"velocity", to_json(s.load_velocity)}};
    json vs = json::array();
    for (const VehicleState& v : s.vehicles) {
      const Vec4 q = v.attitude.coeffs();
      vs.push_back({{"position", to_json(v.position)},
                    {"velocity", to_json(v.velocity)},
                    {"attitude", {q(0), q(1), q(2), q(3)}},
                    {"body_rate", to_json(v.body_rate)}});
    }
    init["vehicles"] = vs;
  }
  doc["initial"] = init;
  doc["output"] = {{"plots", c.output.plots},
                   {"decimate", c.output.decimate},
                   {"analysis_cutoff", c.output.analysis_cutoff}};
  return doc;
}

SystemState paper_initial_conditions(const SystemParams& params) {
  using std::numbers::pi;
  if (params.vehicle_count() != 3) {
    throw ConfigError("initial.preset", "the reference preset requires 3 vehicles");
  }
  const RotationMatrix rot[3] = {
      basic_rotation(Axis::kZ, -pi / 4) * basic_rotation(Axis::kY, -pi / 6),
      basic_rotation(Axis::kZ, pi / 4) * basic_rotation(Axis::kY, -pi / 6),
      basic_rotation(Axis::kY, pi / 6),
  };
  SystemState s;
  for (int i = 0; i < 3; ++i) {
    VehicleState v;
    v.position = rot[i] * Vec3(0, 0, params.vehicles[i].cable_length);
    s.vehicles.push_back(v);
  }
  return s;
}

SystemState symmetric_initial_conditions(const SystemParams& params,
                                         double cone_angle,
                                         double azimuth_offset) {
  const int n = params.vehicle_count();
  SystemState s;
  for (int i = 0; i < n; ++i) {
    const double psi = azimuth_offset + 2.0 * std::numbers::pi * i / n;
    VehicleState v;
    v.position = params.vehicles[i].cable_length *
                 Vec3(std::sin(cone_angle) * std::cos(psi),
                      std::sin(cone_angle) * std::sin(psi), std::cos(cone_angle));
    s.vehicles.push_back(v);
  }
  return s;
}

HoverEquilibrium symmetric_hover_equilibrium(const SystemParams& params,
                                             double cone_angle) {
  const int n = params.vehicle_count();
  HoverEquilibrium eq;
  eq.state = symmetric_initial_conditions(params, cone_angle);
  const double T = params.load_mass * params.gravity / (n * std::cos(cone_angle));
  const std::vector<Vec3> alpha = cable_directions(eq.state, params);
  for (int i = 0; i < n; ++i) {
    eq.tensions.push_back(T);
    eq.tension_vectors.push_back(T * alpha[i]);
    const Vec3 u = params.vehicles[i].mass * params.gravity * kE3 - T * alpha[i];
    eq.state.vehicles[i].attitude = attitude_extraction(u).attitude;
  }
  return eq;
}

ScenarioConfig hover_equilibrium_config(ScenarioConfig c, double cone_angle) {
  const HoverEquilibrium eq = symmetric_hover_equilibrium(c.params, cone_angle);
  c.trajectory.kind = TrajectoryKind::kHover;
  c.trajectory.hover.position = Vec3::Zero();
  c.initial.preset = InitialPreset::kExplicit;
  c.initial.state = eq.state;
  c.controller.allocation.kind = AllocationKind::kFixedShare;
  c.controller.allocation.vectors.assign(eq.tension_vectors.begin(),
                                         eq.tension_vectors.end() - 1);
  return c;
}

SystemState initial_state(const ScenarioConfig& config) {
  SystemState s;
  switch (config.initial.preset) {
    case InitialPreset::kReference:
      s = paper_initial_conditions(config.params);
      break;
    case InitialPreset::kSymmetric:
      s = symmetric_initial_conditions(config.params, config.initial.cone_angle,
                                       config.initial.azimuth_offset);
      break;
    case InitialPreset::kExplicit:
      s = config.initial.state;
      break;
  }
  check_constraint(s, config.params, "initial");
  return s;
}

}  // namespace slungload
