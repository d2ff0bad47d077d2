#include "slungload/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace slungload {

std::string to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::kSpiral:
      return "spiral";
    case TrajectoryKind::kHover:
      return "hover";
    case TrajectoryKind::kLine:
      return "line";
  }
  return "unknown";
}

std::optional<TrajectoryKind> parse_trajectory_kind(const std::string& name) {
  for (TrajectoryKind k :
       {TrajectoryKind::kSpiral, TrajectoryKind::kHover, TrajectoryKind::kLine}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

ReferenceSample spiral_reference(double t, const SpiralParams& p) {
  const double w = p.angular_rate;
  const double c = std::cos(w * t);
  const double s = std::sin(w * t);
  ReferenceSample r;
  r.position = {p.radius * (1.0 - c), p.radius * s, p.climb_rate * t};
  r.velocity = {p.radius * w * s, p.radius * w * c, p.climb_rate};
  r.acceleration = {p.radius * w * w * c, -p.radius * w * w * s, 0.0};
  return r;
}

ReferenceSample hover_reference(const HoverParams& p) {
  ReferenceSample r;
  r.position = p.position;
  return r;
}

ReferenceSample line_reference(double t, const LineParams& p) {
  const Vec3 delta = p.end - p.start;
  const double length = delta.norm();
  ReferenceSample r;
  r.position = p.start;
  if (length == 0.0 || t <= p.start_time) return r;
  const Vec3 dir = delta / length;
  const double a = p.max_acceleration;
  // Peak speed is capped by what the segment length allows.
  const double v = std::min(p.max_speed, std::sqrt(length * a));
  const double t_ramp = v / a;
  const double d_ramp = 0.5 * a * t_ramp * t_ramp;
  const double t_cruise = (length - 2.0 * d_ramp) / v;
  const double tau = t - p.start_time;

  double s = 0.0, s_dot = 0.0, s_ddot = 0.0;
  if (tau < t_ramp) {
    s = 0.5 * a * tau * tau;
    s_dot = a * tau;
    s_ddot = a;
  } else if (tau < t_ramp + t_cruise) {
    s = d_ramp + v * (tau - t_ramp);
    s_dot = v;
  } else if (tau < 2.0 * t_ramp + t_cruise) {
    const double td = 2.0 * t_ramp + t_cruise - tau;  // time to go
    s = length - 0.5 * a * td * td;
    s_dot = a * td;
    s_ddot = -a;
  } else {
    s = length;
  }
  r.position = p.start + s * dir;
  r.velocity = s_dot * dir;
  r.acceleration = s_ddot * dir;
  return r;
}

ReferenceSample reference_at(const TrajectoryConfig& config, double t) {
  switch (config.kind) {
    case TrajectoryKind::kSpiral:
      return spiral_reference(t, config.spiral);
    case TrajectoryKind::kHover:
      return hover_reference(config.hover);
    case TrajectoryKind::kLine:
      return line_reference(t, config.line);
  }
  return {};
}

}  // namespace slungload
