#pragma once

#include <numbers>
#include <optional>
#include <string>

#include "slungload/controller.hpp"

namespace slungload {

/// Ascending spiral: x = r(1 - cos ωt), y = r sin ωt, z = c t.
struct SpiralParams {
  double radius = 1.0;
  double angular_rate = 2.0 * std::numbers::pi / 5.0;
  double climb_rate = 0.1;

  bool operator==(const SpiralParams&) const = default;
};

struct HoverParams {
  Vec3 position = Vec3::Zero();

  bool operator==(const HoverParams&) const = default;
};

/// Straight segment with a trapezoidal speed profile (triangular when the
/// segment is too short to reach max_speed).
struct LineParams {
  Vec3 start = Vec3::Zero();
  Vec3 end = Vec3(1.0, 0.0, 0.0);
  double max_speed = 0.5;
  double max_acceleration = 0.5;
  double start_time = 0.0;

  bool operator==(const LineParams&) const = default;
};

enum class TrajectoryKind { kSpiral, kHover, kLine };

std::string to_string(TrajectoryKind kind);
std::optional<TrajectoryKind> parse_trajectory_kind(const std::string& name);

struct TrajectoryConfig {
  TrajectoryKind kind = TrajectoryKind::kSpiral;
  SpiralParams spiral;
  HoverParams hover;
  LineParams line;

  bool operator==(const TrajectoryConfig&) const = default;
};

/// Position, velocity and acceleration of the spiral, differentiated
/// analytically.
ReferenceSample spiral_reference(double t, const SpiralParams& params = {});
ReferenceSample hover_reference(const HoverParams& params);
ReferenceSample line_reference(double t, const LineParams& params);

ReferenceSample reference_at(const TrajectoryConfig& config, double t);

}  // namespace slungload
