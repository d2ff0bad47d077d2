#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slungload/dynamics.hpp"
#include "slungload/quat.hpp"

namespace slungload {

/// Diagonal PID gains, one entry per world axis.
struct PidGains {
  Vec3 kp = Vec3::Zero();
  Vec3 kd = Vec3::Zero();
  Vec3 ki = Vec3::Zero();

  bool operator==(const PidGains&) const = default;
};

/// Quaternion attitude controller gains: s = Ω_e + ρ q_e,
/// τ = -K_d s - β sat(γ s).
struct AttitudeGains {
  Vec3 rho = Vec3::Constant(62.5);
  Mat3 kd = 16.0 * Mat3::Identity();
  Vec3 beta = Vec3::Zero();
  Vec3 gamma = Vec3::Ones();

  bool operator==(const AttitudeGains&) const = default;
};

struct VehicleGains {
  PidGains position;
  AttitudeGains attitude;

  bool operator==(const VehicleGains&) const = default;
};

struct ControllerGains {
  PidGains load;
  std::vector<VehicleGains> vehicles;

  /// Gains of the reference three-agent experiment, replicated for n agents.
  static ControllerGains Default(int n);
  static PidGains DefaultLoadGains();
  static VehicleGains DefaultVehicleGains();

  /// Strict check used before closing the loop: every gain entry > 0 except
  /// β >= 0, K_d symmetric positive definite. Throws ConfigError.
  void validate() const;

  bool operator==(const ControllerGains&) const = default;
};

struct ReferenceSample {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
};

enum class AllocationKind {
  kPaperFixedShare,  // constant gravity shares for agents 1-2, residual to 3
  kFixedShare,       // configured constant vectors for agents 1..n-1
  kUniform,          // u_L / n
  kMinNorm,          // closest to nominal vectors (zero by default)
};

std::string to_string(AllocationKind kind);
/// Accepts "paper-fixed-share", "fixed-share", "uniform", "min-norm".
std::optional<AllocationKind> parse_allocation_kind(const std::string& name);

struct AllocationStrategy {
  AllocationKind kind = AllocationKind::kPaperFixedShare;
  /// fixed-share: the n-1 constant tension vectors. min-norm: n nominal
  /// vectors (empty means all zero).
  std::vector<Vec3> vectors;

  bool operator==(const AllocationStrategy&) const = default;
};

struct ControllerOptions {
  AllocationStrategy allocation;
  double integral_limit = 10.0;     // m·s, per axis
  double derivative_cutoff = 50.0;  // rad/s, low-pass on differentiated signals
  double tension_floor = 1e-6;      // N

  bool operator==(const ControllerOptions&) const = default;
};

struct AgentCommand {
  double thrust = 0.0;           // f_id
  Quaternion attitude;           // q̄_id
  Vec3 body_rate;                // Ω_id
  Vec3 tension_vector;           // T_id α_id
  double tension = 0.0;          // T_id
  Vec3 cable_direction;          // α_id
  Vec3 cable_direction_rate;     // α̇_id (filtered)
  Vec3 cable_direction_accel;    // α̈_id (filtered)
  Vec3 position;                 // x_id
  Vec3 velocity;                 // ẋ_id = ẋ_Ld - L α̇_id
  Vec3 thrust_vector;            // u_id
  Vec3 position_error_integral;  // ∫ x_ei dt
};

struct VehicleControllerState {
  Vec3 integral = Vec3::Zero();
  Vec3 last_error = Vec3::Zero();
  std::optional<Vec3> cable_direction;  // previous α_id
  Vec3 cable_direction_rate = Vec3::Zero();
  Vec3 cable_direction_accel = Vec3::Zero();
  Vec3 thrust_direction = Vec3::Zero();  // previous û_id
  Vec3 thrust_direction_rate = Vec3::Zero();
};

struct ControllerState {
  bool started = false;
  Vec3 load_integral = Vec3::Zero();
  Vec3 load_last_error = Vec3::Zero();
  std::vector<VehicleControllerState> vehicles;

  static ControllerState Initial(int n) {
    ControllerState s;
    s.vehicles.resize(n);
    return s;
  }
};

struct ControllerOutput {
  PlantInputs inputs;
  std::vector<AgentCommand> commands;
  Vec3 load_control;    // u_L
  Vec3 load_error;      // x_e
  Vec3 load_error_rate; // ẋ_e
  Vec3 load_error_integral;
};

/// Virtual load control u_L = -m_L (g e3 + ẍ_Ld) - ν_L with
/// ν_L = -k_p x_e - k_d ẋ_e - k_i ∫x_e.
Vec3 load_control(const Vec3& load_position, const Vec3& load_velocity,
                  const Vec3& error_integral, const ReferenceSample& ref,
                  const PidGains& gains, double load_mass, double gravity);

/// Splits u_L into per-agent desired tension vectors T_id α_id whose sum is
/// u_L. Throws ConfigError when the strategy does not fit n.
std::vector<Vec3> allocate_tensions(const Vec3& load_control,
                                    const AllocationStrategy& strategy, int n,
                                    double load_mass, double gravity);

/// Constant tension shares of the reference experiment for agents 1 and 2.
std::vector<Vec3> paper_fixed_shares(double load_mass, double gravity);

struct DesiredVehiclePosition {
  Vec3 position;   // x_id
  Vec3 direction;  // α_id
  double tension;  // T_id
  bool held;       // direction carried over from the previous tick
};

/// x_id = x_Ld - L α_id with α_id = T_idα_id / ‖T_idα_id‖. Below the tension
/// floor the direction is undefined and `previous_direction` is reused.
DesiredVehiclePosition desired_vehicle_position(
    const ReferenceSample& ref, const Vec3& tension_vector,
    double cable_length, const std::optional<Vec3>& previous_direction,
    double tension_floor = 1e-6);

/// u_id = m_i (g e3 + ẍ_Ld) - T_idα_id + ν_i, where
/// ν_i = -k_p (x_i - x_Ld + Lα_id) - k_d (ẋ_i - ẋ_Ld + Lα̇_id) - k_i ∫(·).
Vec3 vehicle_position_control(const Vec3& position, const Vec3& velocity,
                              const Vec3& error_integral,
                              const ReferenceSample& ref,
                              const Vec3& cable_direction,
                              const Vec3& cable_direction_rate,
                              const Vec3& tension_vector, const PidGains& gains,
                              double mass, double cable_length,
                              double gravity);

struct ThrustAttitude {
  double thrust;
  Quaternion attitude;
};

/// f_id = ‖u_id‖ and the zero-yaw quaternion rotating e3 onto û_id.
/// Throws SingularityError for ‖u_id‖ <= 1e-6 or û_id3 <= -1 + 1e-6.
ThrustAttitude attitude_extraction(const Vec3& thrust_vector);

/// Body rate of the zero-yaw desired attitude for a thrust direction û
/// moving at û̇.
Vec3 desired_rate(const Vec3& thrust_direction,
                  const Vec3& thrust_direction_rate);

/// Componentwise clamp to [-1, 1].
Vec3 saturate(const Vec3& v);

Vec3 attitude_control(const Quaternion& attitude_error,
                      const Vec3& rate_error, const AttitudeGains& gains);

/// One tick of the full hierarchy: load control, allocation, desired vehicle
/// positions, position control, attitude extraction, desired rates and
/// attitude control. Updates integrators and derivative histories in
/// `controller_state`.
ControllerOutput controller_step(const SystemState& state,
                                 ControllerState& controller_state,
                                 const ReferenceSample& ref,
                                 const ControllerGains& gains,
                                 const ControllerOptions& options,
                                 const SystemParams& params, double dt);

}  // namespace slungload
