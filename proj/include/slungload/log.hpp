#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "slungload/quat.hpp"

namespace slungload {

struct VehicleRecord {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec4 attitude = Vec4(1, 0, 0, 0);  // q̄_i, [q0 q1 q2 q3]
  Vec3 body_rate = Vec3::Zero();
  double thrust = 0.0;               // f_i as applied by the plant
  Vec3 torque = Vec3::Zero();
  double tension = 0.0;              // T_i
  Vec3 direction = Vec3::Zero();     // α_i
  Vec3 tension_desired = Vec3::Zero();  // T_id α_id
  Vec3 position_desired = Vec3::Zero();
  Vec3 velocity_desired = Vec3::Zero();
  Vec4 attitude_desired = Vec4(1, 0, 0, 0);
  Vec3 rate_desired = Vec3::Zero();
  Vec3 direction_desired = Vec3::Zero();  // α_id
  double thrust_desired = 0.0;            // f_id
  Vec3 zeta = Vec3::Zero();    // f_i R_i e3 - f_id R_id e3
  Vec3 zeta_L = Vec3::Zero();  // T_i α_i - T_id α_id
  bool slack = false;

  /// u_i = f_i R(q̄_i) e3.
  Vec3 control_input() const;
};

struct LogRecord {
  double t = 0.0;
  Vec3 load_position = Vec3::Zero();
  Vec3 load_velocity = Vec3::Zero();
  Vec3 ref_position = Vec3::Zero();
  Vec3 ref_velocity = Vec3::Zero();
  Vec3 ref_acceleration = Vec3::Zero();
  Vec3 load_error = Vec3::Zero();  // x_L - x_Ld
  std::vector<VehicleRecord> vehicles;
};

/// One record per logged integrator step, sampled at the start of the step
/// together with the commands applied over it.
struct SimLog {
  int vehicle_count = 0;
  std::vector<LogRecord> records;

  /// Sample spacing, from the first two records (0 for shorter logs).
  double spacing() const;
};

/// Stable column names: t, load, reference and error triples, then one
/// block per vehicle with the vehicle index in every name.
std::vector<std::string> log_columns(int vehicle_count);

/// 17 significant digits, so a written log reads back bit-identically.
void write_log_csv(std::ostream& out, const SimLog& log);
void write_log_csv(const std::filesystem::path& path, const SimLog& log);

/// Throws LogFormatError on a bad header (naming expected vs found columns),
/// ragged rows or non-numeric cells.
SimLog read_log_csv(std::istream& in);
SimLog read_log_csv(const std::filesystem::path& path);

/// Shortest round-trip text form of a double with 17 significant digits.
std::string format_double(double value);

}  // namespace slungload
