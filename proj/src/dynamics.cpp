#include "slungload/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "slungload/error.hpp"

namespace slungload {
namespace {

// Flat state layout used by the integrator:
//   [x_L(3) v_L(3) | x_i(3) v_i(3) q_i(4) Ω_i(3) for each vehicle]
// Quaternion coefficients stay unnormalized inside a step.
constexpr int kLoadSize = 6;
constexpr int kVehicleSize = 13;

int vehicle_offset(int i) { return kLoadSize + kVehicleSize * i; }

Eigen::VectorXd pack(const SystemState& s) {
  const int n = static_cast<int>(s.vehicles.size());
  Eigen::VectorXd y(kLoadSize + kVehicleSize * n);
  y.segment<3>(0) = s.load_position;
  y.segment<3>(3) = s.load_velocity;
  for (int i = 0; i < n; ++i) {
    const VehicleState& v = s.vehicles[i];
    const int o = vehicle_offset(i);
    y.segment<3>(o) = v.position;
    y.segment<3>(o + 3) = v.velocity;
    y.segment<4>(o + 6) = v.attitude.coeffs();
    y.segment<3>(o + 10) = v.body_rate;
  }
  return y;
}

SystemState unpack(const Eigen::VectorXd& y, double time) {
  const int n = static_cast<int>((y.size() - kLoadSize) / kVehicleSize);
  SystemState s;
  s.time = time;
  s.load_position = y.segment<3>(0);
  s.load_velocity = y.segment<3>(3);
  s.vehicles.resize(n);
  for (int i = 0; i < n; ++i) {
    const int o = vehicle_offset(i);
    VehicleState& v = s.vehicles[i];
    v.position = y.segment<3>(o);
    v.velocity = y.segment<3>(o + 3);
    v.attitude = Quaternion::FromCoeffs(y.segment<4>(o + 6));
    v.body_rate = y.segment<3>(o + 10);
  }
  return s;
}

double clamp_thrust(double f, const SystemParams& params) {
  f = std::max(f, 0.0);
  if (params.thrust_limit) f = std::min(f, *params.thrust_limit);
  return f;
}

// Core tension solve on raw kinematic quantities.
TensionSolution solve_tensions_raw(const Vec3& load_pos, const Vec3& load_vel,
                                   const std::vector<Vec3>& pos,
                                   const std::vector<Vec3>& vel,
                                   const std::vector<Vec3>& thrust,
                                   const SystemParams& params) {
  const int n = params.vehicle_count();
  const double omega = params.baumgarte.omega;
  const double zeta = params.baumgarte.zeta;

  TensionSolution sol;
  sol.directions.resize(n);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    const Vec3 d = pos[i] - load_pos;
    const Vec3 d_dot = vel[i] - load_vel;
    const double r = d.norm();
    if (!(r > 0.0) || !std::isfinite(r)) {
      std::ostringstream msg;
      msg << "degenerate cable geometry: vehicle " << i + 1
          << " coincides with the load";
      throw DynamicsError(msg.str());
    }
    const VehicleParams& vp = params.vehicles[i];
    const Vec3 alpha = -d / r;
    sol.directions[i] = alpha;
    const double phi = 0.5 * (r * r - vp.cable_length * vp.cable_length);
    const double phi_dot = d.dot(d_dot);
    b(i) = (d_dot.squaredNorm() + 2.0 * zeta * omega * phi_dot +
            omega * omega * phi) /
               r -
           alpha.dot(thrust[i]) / vp.mass;
  }

  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = sol.directions[i].dot(sol.directions[j]) / params.load_mass;
    }
    m(i, i) += 1.0 / params.vehicles[i].mass;
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      m, Eigen::EigenvaluesOnly);
  sol.min_eigenvalue = eig.eigenvalues().minCoeff();
  const double max_eig = eig.eigenvalues().maxCoeff();
  sol.condition_number = sol.min_eigenvalue > 0.0
                             ? max_eig / sol.min_eigenvalue
                             : std::numeric_limits<double>::infinity();
  if (!(sol.min_eigenvalue > 0.0) ||
      sol.condition_number > kMaxTensionCondition) {
    std::ostringstream msg;
    msg << "tension system is singular or ill-conditioned (condition number "
        << sol.condition_number << ")";
    throw DynamicsError(msg.str());
  }

  const Eigen::VectorXd t = m.llt().solve(b);
  sol.tensions.assign(t.data(), t.data() + n);
  sol.slack = std::any_of(sol.tensions.begin(), sol.tensions.end(),
                          [](double x) { return x <= 0.0; });
  return sol;
}

struct FlatDerivative {
  Eigen::VectorXd dy;
  TensionSolution tension;
};

FlatDerivative flat_derivative(const Eigen::VectorXd& y,
                               const PlantInputs& inputs,
                               const SystemParams& params) {
  const int n = params.vehicle_count();
  const Vec3 load_pos = y.segment<3>(0);
  const Vec3 load_vel = y.segment<3>(3);
  std::vector<Vec3> pos(n), vel(n), thrust(n);
  for (int i = 0; i < n; ++i) {
    const int o = vehicle_offset(i);
    pos[i] = y.segment<3>(o);
    vel[i] = y.segment<3>(o + 3);
    const Quaternion q = Quaternion::FromCoeffs(y.segment<4>(o + 6));
    thrust[i] = clamp_thrust(inputs.thrust[i], params) * quat_to_rot(q) * kE3;
  }

  FlatDerivative out;
  out.tension =
      solve_tensions_raw(load_pos, load_vel, pos, vel, thrust, params);
  const double g = params.gravity;

  Eigen::VectorXd& dy = out.dy;
  dy.resize(y.size());
  Vec3 cable_sum = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    cable_sum += out.tension.tensions[i] * out.tension.directions[i];
  }
  dy.segment<3>(0) = load_vel;
  dy.segment<3>(3) = -g * kE3 - cable_sum / params.load_mass;

  for (int i = 0; i < n; ++i) {
    const VehicleParams& vp = params.vehicles[i];
    const int o = vehicle_offset(i);
    const Vec4 q = y.segment<4>(o + 6);
    const Vec3 w = y.segment<3>(o + 10);
    dy.segment<3>(o) = vel[i];
    dy.segment<3>(o + 3) =
        (thrust[i] + out.tension.tensions[i] * out.tension.directions[i]) /
            vp.mass -
        g * kE3;
    dy.segment<4>(o + 6) = 0.5 * quat_mul_raw(q, Vec4(0.0, w.x(), w.y(), w.z()));
    dy.segment<3>(o + 10) =
        vp.inertia.ldlt().solve(inputs.torque[i] - w.cross(vp.inertia * w));
  }
  return out;
}

void check_inputs(const SystemState& state, const PlantInputs& inputs,
                  const SystemParams& params) {
  const std::size_t n = params.vehicles.size();
  if (state.vehicles.size() != n || inputs.thrust.size() != n ||
      inputs.torque.size() != n) {
    throw std::invalid_argument(
        "state, inputs and parameters disagree on the vehicle count");
  }
}

}  // namespace

void VehicleParams::validate(const std::string& path) const {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw ConfigError(path + ".mass", "must be a positive finite number");
  }
  if (!(cable_length > 0.0) || !std::isfinite(cable_length)) {
    throw ConfigError(path + ".cable_length",
                      "must be a positive finite number");
  }
  if (!inertia.allFinite() || (inertia - inertia.transpose()).norm() > 1e-12 ||
      Eigen::SelfAdjointEigenSolver<Mat3>(inertia).eigenvalues().minCoeff() <=
          0.0) {
    throw ConfigError(path + ".inertia", "must be symmetric positive definite");
  }
}

void SystemParams::validate() const {
  if (vehicles.empty()) {
    throw ConfigError("vehicles", "at least one vehicle is required");
  }
  if (!(load_mass > 0.0) || !std::isfinite(load_mass)) {
    throw ConfigError("load.mass", "must be a positive finite number");
  }
  if (!(gravity > 0.0) || !std::isfinite(gravity)) {
    throw ConfigError("gravity", "must be a positive finite number");
  }
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    vehicles[i].validate("vehicles[" + std::to_string(i) + "]");
  }
  if (!(baumgarte.omega >= 0.0) || !(baumgarte.zeta >= 0.0)) {
    throw ConfigError("integration.baumgarte", "gains must be non-negative");
  }
  if (thrust_limit && !(*thrust_limit > 0.0)) {
    throw ConfigError("vehicle_limits.thrust_max", "must be positive");
  }
}

std::vector<Vec3> cable_directions(const SystemState& state,
                                   const SystemParams& params) {
  std::vector<Vec3> out;
  out.reserve(state.vehicles.size());
  for (std::size_t i = 0; i < state.vehicles.size(); ++i) {
    const Vec3 d = state.load_position - state.vehicles[i].position;
    const double r = d.norm();
    if (!(r > 0.0)) {
      throw DynamicsError("degenerate cable geometry: vehicle " +
                          std::to_string(i + 1) + " coincides with the load");
    }
    out.push_back(d / r);
  }
  (void)params;
  return out;
}

std::vector<Vec3> thrust_vectors(const SystemState& state,
                                 const PlantInputs& inputs,
                                 const SystemParams& params) {
  check_inputs(state, inputs, params);
  std::vector<Vec3> out;
  out.reserve(state.vehicles.size());
  for (std::size_t i = 0; i < state.vehicles.size(); ++i) {
    out.push_back(clamp_thrust(inputs.thrust[i], params) *
                  quat_to_rot(state.vehicles[i].attitude) * kE3);
  }
  return out;
}

TensionSolution solve_tensions(const SystemState& state,
                               const std::vector<Vec3>& thrust,
                               const SystemParams& params) {
  const int n = params.vehicle_count();
  if (static_cast<int>(state.vehicles.size()) != n ||
      static_cast<int>(thrust.size()) != n) {
    throw std::invalid_argument("vehicle count mismatch in solve_tensions");
  }
  std::vector<Vec3> pos(n), vel(n);
  for (int i = 0; i < n; ++i) {
    pos[i] = state.vehicles[i].position;
    vel[i] = state.vehicles[i].velocity;
  }
  return solve_tensions_raw(state.load_position, state.load_velocity, pos, vel,
                            thrust, params);
}

SystemStateDerivative system_derivative(const SystemState& state,
                                        const PlantInputs& inputs,
                                        const SystemParams& params) {
  check_inputs(state, inputs, params);
  FlatDerivative fd = flat_derivative(pack(state), inputs, params);
  SystemStateDerivative out;
  out.load_velocity = fd.dy.segment<3>(0);
  out.load_acceleration = fd.dy.segment<3>(3);
  const int n = params.vehicle_count();
  out.vehicles.resize(n);
  for (int i = 0; i < n; ++i) {
    const int o = vehicle_offset(i);
    out.vehicles[i] = {fd.dy.segment<3>(o), fd.dy.segment<3>(o + 3),
                       fd.dy.segment<4>(o + 6), fd.dy.segment<3>(o + 10)};
  }
  out.tension = std::move(fd.tension);
  return out;
}

SystemState rk4_step(const SystemState& state, const PlantInputs& inputs,
                     double dt, const SystemParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be > 0");
  check_inputs(state, inputs, params);

  const Eigen::VectorXd y = pack(state);
  const Eigen::VectorXd k1 = flat_derivative(y, inputs, params).dy;
  const Eigen::VectorXd k2 =
      flat_derivative(y + 0.5 * dt * k1, inputs, params).dy;
  const Eigen::VectorXd k3 =
      flat_derivative(y + 0.5 * dt * k2, inputs, params).dy;
  const Eigen::VectorXd k4 = flat_derivative(y + dt * k3, inputs, params).dy;
  const Eigen::VectorXd y_next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  if (!y_next.allFinite()) {
    std::ostringstream msg;
    msg << "integration divergence at t = " << state.time
        << ": non-finite state";
    throw DynamicsError(msg.str());
  }
  SystemState next = unpack(y_next, state.time + dt);
  const double residual = constraint_residual(next, params);
  if (residual > kDivergenceResidual) {
    std::ostringstream msg;
    msg << "integration divergence at t = " << next.time
        << ": cable constraint residual " << residual << " m";
    throw DynamicsError(msg.str());
  }
  return next;
}

double constraint_residual(const SystemState& state,
                           const SystemParams& params) {
  double worst = 0.0;
  for (std::size_t i = 0; i < state.vehicles.size(); ++i) {
    const double r = (state.vehicles[i].position - state.load_position).norm();
    worst = std::max(worst, std::abs(r - params.vehicles[i].cable_length));
  }
  return worst;
}

Vec3 linear_momentum(const SystemState& state, const SystemParams& params) {
  Vec3 p = params.load_mass * state.load_velocity;
  for (std::size_t i = 0; i < state.vehicles.size(); ++i) {
    p += params.vehicles[i].mass * state.vehicles[i].velocity;
  }
  return p;
}

Vec3 center_of_mass(const SystemState& state, const SystemParams& params) {
  Vec3 c = params.load_mass * state.load_position;
  double total = params.load_mass;
  for (std::size_t i = 0; i < state.vehicles.size(); ++i) {
    c += params.vehicles[i].mass * state.vehicles[i].position;
    total += params.vehicles[i].mass;
  }
  return c / total;
}

}  // namespace slungload
