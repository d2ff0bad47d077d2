#include "slungload/controller.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slungload/error.hpp"

namespace slungload {
namespace {

bool all_positive(const Vec3& v) { return (v.array() > 0.0).all() && v.allFinite(); }

void require_positive(const Vec3& v, const std::string& path) {
  if (!all_positive(v)) throw ConfigError(path, "entries must be > 0");
}

Vec3 clamp_abs(const Vec3& v, double limit) {
  return v.cwiseMax(-limit).cwiseMin(limit);
}

// First-order low-pass on a backward difference, discretized with backward
// Euler: y_k = y_{k-1} + a (raw_k - y_{k-1}), a = h ω / (1 + h ω).
Vec3 filtered_rate(const Vec3& current, const Vec3& previous,
                   const Vec3& filtered, double dt, double cutoff) {
  const Vec3 raw = (current - previous) / dt;
  const double a = dt * cutoff / (1.0 + dt * cutoff);
  return filtered + a * (raw - filtered);
}

}  // namespace

PidGains ControllerGains::DefaultLoadGains() {
  return {Vec3::Constant(9.0), Vec3::Constant(3.5), Vec3::Constant(0.2)};
}

VehicleGains ControllerGains::DefaultVehicleGains() {
  VehicleGains g;
  g.position = {40.0 * Vec3(1, 1, 1.5), 10.0 * Vec3(1, 1, 1.2),
                2.0 * Vec3(1, 1, 2)};
  return g;
}

ControllerGains ControllerGains::Default(int n) {
  ControllerGains g;
  g.load = DefaultLoadGains();
  g.vehicles.assign(n, DefaultVehicleGains());
  return g;
}

void ControllerGains::validate() const {
  require_positive(load.kp, "gains.load.kp");
  require_positive(load.kd, "gains.load.kd");
  require_positive(load.ki, "gains.load.ki");
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const std::string p = "vehicles[" + std::to_string(i) + "].gains";
    const VehicleGains& v = vehicles[i];
    require_positive(v.position.kp, p + ".kp");
    require_positive(v.position.kd, p + ".kd");
    require_positive(v.position.ki, p + ".ki");
    require_positive(v.attitude.rho, p + ".rho");
    require_positive(v.attitude.gamma, p + ".gamma");
    if (!((v.attitude.beta.array() >= 0.0).all())) {
      throw ConfigError(p + ".beta", "entries must be >= 0");
    }
    const Mat3& kd = v.attitude.kd;
    if ((kd - kd.transpose()).norm() > 1e-12 ||
        Eigen::SelfAdjointEigenSolver<Mat3>(kd).eigenvalues().minCoeff() <=
            0.0) {
      throw ConfigError(p + ".attitude_kd",
                        "must be symmetric positive definite");
    }
  }
}

std::string to_string(AllocationKind kind) {
  switch (kind) {
    case AllocationKind::kPaperFixedShare:
      return "paper-fixed-share";
    case AllocationKind::kFixedShare:
      return "fixed-share";
    case AllocationKind::kUniform:
      return "uniform";
    case AllocationKind::kMinNorm:
      return "min-norm";
  }
  return "unknown";
}

std::optional<AllocationKind> parse_allocation_kind(const std::string& name) {
  for (AllocationKind k :
       {AllocationKind::kPaperFixedShare, AllocationKind::kFixedShare,
        AllocationKind::kUniform, AllocationKind::kMinNorm}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Vec3 load_control(const Vec3& load_position, const Vec3& load_velocity,
                  const Vec3& error_integral, const ReferenceSample& ref,
                  const PidGains& gains, double load_mass, double gravity) {
  const Vec3 e = load_position - ref.position;
  const Vec3 e_dot = load_velocity - ref.velocity;
  const Vec3 nu = -gains.kp.cwiseProduct(e) - gains.kd.cwiseProduct(e_dot) -
                  gains.ki.cwiseProduct(error_integral);
  return -load_mass * (gravity * kE3 + ref.acceleration) - nu;
}

std::vector<Vec3> paper_fixed_shares(double load_mass, double gravity) {
  using std::numbers::pi;
  const Vec3 weight_share = (load_mass / 3.0) * gravity * kE3;
  return {
      -(basic_rotation(Axis::kZ, -pi / 4) * basic_rotation(Axis::kY, -pi / 6) *
        weight_share),
      -(basic_rotation(Axis::kZ, pi / 4) * basic_rotation(Axis::kY, -pi / 6) *
        weight_share),
  };
}

std::vector<Vec3> allocate_tensions(const Vec3& u_load,
                                    const AllocationStrategy& strategy, int n,
                                    double load_mass, double gravity) {
  if (n < 1) throw ConfigError("allocation", "need at least one agent");
  std::vector<Vec3> out(n, Vec3::Zero());

  auto residual_to_last = [&](const std::vector<Vec3>& shares) {
    Vec3 rest = u_load;
    for (int i = 0; i < n - 1; ++i) {
      out[i] = shares[i];
      rest -= shares[i];
    }
    out[n - 1] = rest;
  };

  switch (strategy.kind) {
    case AllocationKind::kPaperFixedShare:
      if (n != 3) {
        throw ConfigError("allocation.strategy",
                          "paper-fixed-share requires exactly 3 agents, got " +
                              std::to_string(n));
      }
      residual_to_last(paper_fixed_shares(load_mass, gravity));
      break;
    case AllocationKind::kFixedShare:
      if (static_cast<int>(strategy.vectors.size()) != n - 1) {
        throw ConfigError("allocation.shares",
                          "fixed-share needs n-1 = " + std::to_string(n - 1) +
                              " vectors, got " +
                              std::to_string(strategy.vectors.size()));
      }
      residual_to_last(strategy.vectors);
      break;
    case AllocationKind::kUniform:
      for (Vec3& v : out) v = u_load / n;
      break;
    case AllocationKind::kMinNorm: {
      // argmin Σ‖v_i - c_i‖² s.t. Σ v_i = u_L  =>  v_i = c_i + (u_L - Σc)/n
      std::vector<Vec3> nominal = strategy.vectors;
      if (nominal.empty()) nominal.assign(n, Vec3::Zero());
      if (static_cast<int>(nominal.size()) != n) {
        throw ConfigError("allocation.nominal",
                          "min-norm needs n = " + std::to_string(n) +
                              " nominal vectors, got " +
                              std::to_string(nominal.size()));
      }
      Vec3 sum = Vec3::Zero();
      for (const Vec3& c : nominal) sum += c;
      const Vec3 correction = (u_load - sum) / n;
      for (int i = 0; i < n; ++i) out[i] = nominal[i] + correction;
      break;
    }
  }
  return out;
}

DesiredVehiclePosition desired_vehicle_position(
    const ReferenceSample& ref, const Vec3& tension_vector,
    double cable_length, const std::optional<Vec3>& previous_direction,
    double tension_floor) {
  DesiredVehiclePosition out;
  out.tension = tension_vector.norm();
  if (out.tension > tension_floor) {
    out.direction = tension_vector / out.tension;
    out.held = false;
  } else {
    if (!previous_direction) {
      throw DynamicsError(
          "desired cable tension below floor with no previous direction");
    }
    out.direction = *previous_direction;
    out.held = true;
  }
  out.position = ref.position - cable_length * out.direction;
  return out;
}

Vec3 vehicle_position_control(const Vec3& position, const Vec3& velocity,
                              const Vec3& error_integral,
                              const ReferenceSample& ref,
                              const Vec3& cable_direction,
                              const Vec3& cable_direction_rate,
                              const Vec3& tension_vector, const PidGains& gains,
                              double mass, double cable_length,
                              double gravity) {
  const Vec3 e = position - ref.position + cable_length * cable_direction;
  const Vec3 e_dot =
      velocity - ref.velocity + cable_length * cable_direction_rate;
  const Vec3 nu = -gains.kp.cwiseProduct(e) - gains.kd.cwiseProduct(e_dot) -
                  gains.ki.cwiseProduct(error_integral);
  return mass * (gravity * kE3 + ref.acceleration) - tension_vector + nu;
}

ThrustAttitude attitude_extraction(const Vec3& thrust_vector) {
  const double f = thrust_vector.norm();
  if (!(f > 1e-6)) {
    throw SingularityError("desired thrust vector vanishes");
  }
  const Vec3 u = thrust_vector / f;
  if (!(u.z() > -1.0 + 1e-6)) {
    throw SingularityError(
        "desired thrust points straight down; zero-yaw attitude undefined");
  }
  const double s = std::sqrt(2.0 * u.z() + 2.0);
  // Components are already unit norm: (s/2)² + (u1² + u2²)/s² = 1.
  return {f, Quaternion(0.5 * s, -u.y() / s, u.x() / s, 0.0)};
}

Vec3 desired_rate(const Vec3& u, const Vec3& u_dot) {
  if (!(u.z() > -1.0 + 1e-6)) {
    throw SingularityError("desired rate undefined for downward thrust");
  }
  const double den = u.z() + 1.0;
  return {-u_dot.y() + u_dot.z() * u.y() / den,
          u_dot.x() - u_dot.z() * u.x() / den,
          (u.y() * u_dot.x() - u.x() * u_dot.y()) / den};
}

Vec3 saturate(const Vec3& v) { return clamp_abs(v, 1.0); }

Vec3 attitude_control(const Quaternion& attitude_error, const Vec3& rate_error,
                      const AttitudeGains& gains) {
  const Vec3 s = rate_error + gains.rho.cwiseProduct(attitude_error.vec());
  return -gains.kd * s -
         gains.beta.cwiseProduct(saturate(gains.gamma.cwiseProduct(s)));
}

ControllerOutput controller_step(const SystemState& state,
                                 ControllerState& cs,
                                 const ReferenceSample& ref,
                                 const ControllerGains& gains,
                                 const ControllerOptions& options,
                                 const SystemParams& params, double dt) {
  const int n = params.vehicle_count();
  if (static_cast<int>(state.vehicles.size()) != n ||
      static_cast<int>(gains.vehicles.size()) != n) {
    throw std::invalid_argument("controller_step: vehicle count mismatch");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("controller_step: dt <= 0");
  if (static_cast<int>(cs.vehicles.size()) != n) cs.vehicles.resize(n);
  const bool first = !cs.started;
  const double g = params.gravity;
  const double cutoff = options.derivative_cutoff;

  ControllerOutput out;
  out.load_error = state.load_position - ref.position;
  out.load_error_rate = state.load_velocity - ref.velocity;
  if (!first) {
    cs.load_integral = clamp_abs(
        cs.load_integral + 0.5 * dt * (cs.load_last_error + out.load_error),
        options.integral_limit);
  }
  cs.load_last_error = out.load_error;
  out.load_error_integral = cs.load_integral;

  out.load_control =
      load_control(state.load_position, state.load_velocity, cs.load_integral,
                   ref, gains.load, params.load_mass, g);
  const std::vector<Vec3> shares = allocate_tensions(
      out.load_control, options.allocation, n, params.load_mass, g);

  const std::vector<Vec3> actual_directions = cable_directions(state, params);
  out.inputs = PlantInputs::Zero(n);
  out.commands.resize(n);
  for (int i = 0; i < n; ++i) {
    VehicleControllerState& vs = cs.vehicles[i];
    const VehicleState& vehicle = state.vehicles[i];
    const VehicleParams& vp = params.vehicles[i];
    AgentCommand& cmd = out.commands[i];

    const std::optional<Vec3> previous =
        vs.cable_direction ? vs.cable_direction
                           : std::optional<Vec3>(actual_directions[i]);
    const DesiredVehiclePosition desired = desired_vehicle_position(
        ref, shares[i], vp.cable_length, previous, options.tension_floor);
    if (first) {
      vs.cable_direction_rate.setZero();
      vs.cable_direction_accel.setZero();
    } else {
      const Vec3 rate = filtered_rate(desired.direction, *vs.cable_direction,
                                      vs.cable_direction_rate, dt, cutoff);
      vs.cable_direction_accel = filtered_rate(
          rate, vs.cable_direction_rate, vs.cable_direction_accel, dt, cutoff);
      vs.cable_direction_rate = rate;
    }
    vs.cable_direction = desired.direction;

    const Vec3 error = vehicle.position - desired.position;
    if (!first) {
      vs.integral = clamp_abs(vs.integral + 0.5 * dt * (vs.last_error + error),
                              options.integral_limit);
    }
    vs.last_error = error;

    const Vec3 u = vehicle_position_control(
        vehicle.position, vehicle.velocity, vs.integral, ref, desired.direction,
        vs.cable_direction_rate, shares[i], gains.vehicles[i].position,
        vp.mass, vp.cable_length, g);
    const ThrustAttitude ta = attitude_extraction(u);
    const Vec3 u_hat = u / ta.thrust;
    if (first) {
      vs.thrust_direction_rate.setZero();
    } else {
      vs.thrust_direction_rate = filtered_rate(
          u_hat, vs.thrust_direction, vs.thrust_direction_rate, dt, cutoff);
    }
    vs.thrust_direction = u_hat;
    const Vec3 rate_d = desired_rate(u_hat, vs.thrust_direction_rate);

    const Quaternion q_err = quat_error(ta.attitude, vehicle.attitude);
    const Vec3 tau = attitude_control(q_err, vehicle.body_rate - rate_d,
                                      gains.vehicles[i].attitude);

    double f = std::max(ta.thrust, 0.0);
    if (params.thrust_limit) f = std::min(f, *params.thrust_limit);
    out.inputs.thrust[i] = f;
    out.inputs.torque[i] = tau;

    cmd.thrust = ta.thrust;
    cmd.attitude = ta.attitude;
    cmd.body_rate = rate_d;
    cmd.tension_vector = shares[i];
    cmd.tension = desired.tension;
    cmd.cable_direction = desired.direction;
    cmd.cable_direction_rate = vs.cable_direction_rate;
    cmd.cable_direction_accel = vs.cable_direction_accel;
    cmd.position = desired.position;
    cmd.velocity = ref.velocity - vp.cable_length * vs.cable_direction_rate;
    cmd.thrust_vector = u;
    cmd.position_error_integral = vs.integral;
  }
  cs.started = true;
  return out;
}

}  // namespace slungload
