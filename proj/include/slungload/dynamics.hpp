#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slungload/quat.hpp"

namespace slungload {

struct VehicleParams {
  double mass = 0.5;                                         // kg
  Mat3 inertia = Vec3(0.0232, 0.0232, 0.04).asDiagonal();    // kg·m²
  double cable_length = 1.0;                                 // m

  bool operator==(const VehicleParams&) const = default;

  /// Throws ConfigError (prefixed with `path`) unless mass > 0, length > 0 and
  /// the inertia is symmetric positive definite.
  void validate(const std::string& path) const;
};

/// Constraint stabilization gains: φ̈ + 2ζω φ̇ + ω² φ = 0.
struct BaumgarteGains {
  double omega = 20.0;  // rad/s
  double zeta = 1.0;

  bool operator==(const BaumgarteGains&) const = default;
};

struct SystemParams {
  double gravity = 9.81;
  double load_mass = 0.225;
  std::vector<VehicleParams> vehicles;
  BaumgarteGains baumgarte;
  /// Optional actuator ceiling on the collective thrust (N).
  std::optional<double> thrust_limit;

  int vehicle_count() const { return static_cast<int>(vehicles.size()); }
  void validate() const;

  bool operator==(const SystemParams&) const = default;
};

struct VehicleState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Quaternion attitude;
  Vec3 body_rate = Vec3::Zero();

  bool operator==(const VehicleState&) const = default;
};

struct SystemState {
  double time = 0.0;
  Vec3 load_position = Vec3::Zero();
  Vec3 load_velocity = Vec3::Zero();
  std::vector<VehicleState> vehicles;

  bool operator==(const SystemState&) const = default;
};

struct PlantInputs {
  std::vector<double> thrust;  // N, clamped to [0, thrust_limit] by the plant
  std::vector<Vec3> torque;    // N·m, body frame

  static PlantInputs Zero(int n) {
    return {std::vector<double>(n, 0.0), std::vector<Vec3>(n, Vec3::Zero())};
  }
};

struct TensionSolution {
  std::vector<double> tensions;    // T_i, N
  std::vector<Vec3> directions;    // α_i, unit, vehicle -> load
  double min_eigenvalue = 0.0;     // of the constraint matrix M
  double condition_number = 0.0;
  bool slack = false;              // some T_i <= 0
};

struct VehicleDerivative {
  Vec3 velocity;
  Vec3 acceleration;
  Vec4 attitude_rate;
  Vec3 angular_acceleration;
};

struct SystemStateDerivative {
  Vec3 load_velocity;
  Vec3 load_acceleration;
  std::vector<VehicleDerivative> vehicles;
  TensionSolution tension;
};

/// Unit cable directions α_i = (x_L - x_i)/‖x_L - x_i‖. Throws DynamicsError
/// if a vehicle coincides with the load.
std::vector<Vec3> cable_directions(const SystemState& state,
                                   const SystemParams& params);

/// Constraint tensions for the given world-frame thrust vectors f_i R_i e3.
///
/// Differentiating ½(‖x_i - x_L‖² - L_i²) = 0 twice and substituting the
/// vehicle and load equations of motion gives the n×n system M T = b with
///   M_ij = δ_ij / m_i + (α_i·α_j) / m_L
///   b_i  = (‖ḋ_i‖² + 2ζω φ̇_i + ω² φ_i) / r_i - α_i·F_i / m_i
/// where d_i = x_i - x_L, r_i = ‖d_i‖. Throws DynamicsError when M has a
/// condition number above 1e12.
TensionSolution solve_tensions(const SystemState& state,
                               const std::vector<Vec3>& thrust_vectors,
                               const SystemParams& params);

/// World-frame thrust vectors f_i R(q_i) e3 with the plant's thrust clamp.
std::vector<Vec3> thrust_vectors(const SystemState& state,
                                 const PlantInputs& inputs,
                                 const SystemParams& params);

SystemStateDerivative system_derivative(const SystemState& state,
                                        const PlantInputs& inputs,
                                        const SystemParams& params);

/// One classical RK4 step with inputs held constant over the step.
/// Quaternions are renormalized afterwards. Throws DynamicsError if the
/// resulting cable-length residual exceeds kDivergenceResidual or a value is
/// not finite.
SystemState rk4_step(const SystemState& state, const PlantInputs& inputs,
                     double dt, const SystemParams& params);

/// max_i | ‖x_i - x_L‖ - L_i |
double constraint_residual(const SystemState& state, const SystemParams& params);

/// Total linear momentum Σ m v of load and vehicles.
Vec3 linear_momentum(const SystemState& state, const SystemParams& params);

Vec3 center_of_mass(const SystemState& state, const SystemParams& params);

inline constexpr double kDivergenceResidual = 1e-4;
inline constexpr double kMaxTensionCondition = 1e12;

}  // namespace slungload
