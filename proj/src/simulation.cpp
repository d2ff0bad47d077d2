#include "slungload/simulation.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "slungload/analysis.hpp"
#include "slungload/error.hpp"

namespace slungload {
namespace {

bool finite(const LogRecord& r) {
  auto ok = [](const auto& v) { return v.allFinite(); };
  if (!std::isfinite(r.t) || !ok(r.load_position) || !ok(r.load_velocity) ||
      !ok(r.ref_position) || !ok(r.load_error)) {
    return false;
  }
  for (const VehicleRecord& v : r.vehicles) {
    if (!ok(v.position) || !ok(v.velocity) || !ok(v.attitude) ||
        !ok(v.body_rate) || !std::isfinite(v.thrust) || !ok(v.torque) ||
        !std::isfinite(v.tension) || !ok(v.tension_desired) ||
        !ok(v.position_desired) || !ok(v.velocity_desired) ||
        !ok(v.attitude_desired) || !ok(v.rate_desired) || !ok(v.zeta) ||
        !ok(v.zeta_L)) {
      return false;
    }
  }
  return true;
}

std::string where(long step, double t) {
  std::ostringstream s;
  s << "step " << step << " (t = " << t << " s)";
  return s.str();
}

nlohmann::json array(const std::vector<double>& v) {
  return nlohmann::json(v);
}

}  // namespace

LogRecord make_record(const SystemState& state, const ReferenceSample& ref,
                      const ControllerOutput& out, const TensionSolution& tension,
                      const SystemParams& params) {
  LogRecord r;
  r.t = state.time;
  r.load_position = state.load_position;
  r.load_velocity = state.load_velocity;
  r.ref_position = ref.position;
  r.ref_velocity = ref.velocity;
  r.ref_acceleration = ref.acceleration;
  r.load_error = out.load_error;
  const std::vector<Vec3> applied = thrust_vectors(state, out.inputs, params);
  for (std::size_t i = 0; i < state.vehicles.size(); ++i) {
    const VehicleState& s = state.vehicles[i];
    const AgentCommand& c = out.commands[i];
    VehicleRecord v;
    v.position = s.position;
    v.velocity = s.velocity;
    v.attitude = s.attitude.coeffs();
    v.body_rate = s.body_rate;
    v.thrust = out.inputs.thrust[i];
    v.torque = out.inputs.torque[i];
    v.tension = tension.tensions[i];
    v.direction = tension.directions[i];
    v.tension_desired = c.tension_vector;
    v.position_desired = c.position;
    v.velocity_desired = c.velocity;
    v.attitude_desired = c.attitude.coeffs();
    v.rate_desired = c.body_rate;
    v.direction_desired = c.cable_direction;
    v.thrust_desired = c.thrust;
    v.zeta = applied[i] - c.thrust * (quat_to_rot(c.attitude) * kE3);
    v.zeta_L = tension.tensions[i] * tension.directions[i] - c.tension_vector;
    v.slack = tension.tensions[i] <= 0.0;
    r.vehicles.push_back(v);
  }
  return r;
}

SimulationResult simulate(const ScenarioConfig& config,
                          const StepObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  const SystemParams& params = config.params;
  params.validate();
  config.gains.validate();
  const int n = config.vehicle_count();
  const long steps = config.step_count();
  const int decimate = std::max(1, config.output.decimate);

  SimulationResult result;
  result.log.vehicle_count = n;
  result.log.records.reserve(steps / decimate + 1);
  SystemState state = initial_state(config);
  state.time = 0.0;
  ControllerState cs = ControllerState::Initial(n);
  result.max_constraint_residual = constraint_residual(state, params);

  for (long k = 0; k < steps; ++k) {
    // Times come from the step index so they do not accumulate roundoff.
    state.time = static_cast<double>(k) * config.dt;
    try {
      const ReferenceSample ref = reference_at(config.trajectory, state.time);
      const ControllerOutput out = controller_step(
          state, cs, ref, config.gains, config.controller, params, config.dt);
      const TensionSolution tension =
          solve_tensions(state, thrust_vectors(state, out.inputs, params), params);
      if (tension.slack) ++result.slack_events;
      if (k % decimate == 0) {
        LogRecord rec = make_record(state, ref, out, tension, params);
        if (!finite(rec)) throw DynamicsError("non-finite value in the log record");
        result.log.records.push_back(std::move(rec));
      }
      if (observer) observer(k, state, out);
      state = rk4_step(state, out.inputs, config.dt, params);
    } catch (const DynamicsError& e) {
      throw DynamicsError(where(k, state.time) + ": " + e.what());
    }
    result.max_constraint_residual =
        std::max(result.max_constraint_residual, constraint_residual(state, params));
  }
  state.time = static_cast<double>(steps) * config.dt;
  result.final_state = state;
  result.steps = steps;
  result.wall_time = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return result;
}

std::vector<double> transient_control_effort(const SimLog& log, double t_end) {
  std::vector<double> sum(log.vehicle_count, 0.0);
  long count = 0;
  for (const LogRecord& r : log.records) {
    if (r.t >= t_end) break;
    ++count;
    for (int i = 0; i < log.vehicle_count; ++i) {
      sum[i] += r.vehicles[i].control_input().squaredNorm();
    }
  }
  for (double& s : sum) s = count ? std::sqrt(s / count) : 0.0;
  return sum;
}

std::vector<double> mean_tension_mismatch(const SimLog& log, double t0, double t1) {
  std::vector<double> sum(log.vehicle_count, 0.0);
  long count = 0;
  for (const LogRecord& r : log.records) {
    if (r.t < t0 || r.t >= t1) continue;
    ++count;
    for (int i = 0; i < log.vehicle_count; ++i) sum[i] += r.vehicles[i].zeta_L.norm();
  }
  for (double& s : sum) s = count ? s / count : 0.0;
  return sum;
}

nlohmann::json summarize(const ScenarioConfig& config,
                         const SimulationResult& result) {
  using nlohmann::json;
  const SimLog& log = result.log;
  const int n = log.vehicle_count;
  const double cutoff = config.output.analysis_cutoff;

  double load_max = 0.0, load_max_after = 0.0, load_sq_after = 0.0;
  long after = 0;
  std::vector<double> veh_max(n, 0.0), veh_max_after(n, 0.0);
  std::vector<double> effort_max(n, 0.0), effort_sq(n, 0.0);
  for (const LogRecord& r : log.records) {
    const double e = r.load_error.norm();
    load_max = std::max(load_max, e);
    if (r.t >= cutoff) {
      load_max_after = std::max(load_max_after, e);
      load_sq_after += e * e;
      ++after;
    }
    for (int i = 0; i < n; ++i) {
      const VehicleRecord& v = r.vehicles[i];
      const double ei = (v.position - v.position_desired).norm();
      veh_max[i] = std::max(veh_max[i], ei);
      if (r.t >= cutoff) veh_max_after[i] = std::max(veh_max_after[i], ei);
      const double u = v.control_input().norm();
      effort_max[i] = std::max(effort_max[i], u);
      effort_sq[i] += u * u;
    }
  }

  json doc;
  doc["schema_version"] = 1;
  doc["vehicle_count"] = n;
  doc["duration"] = config.duration;
  doc["dt"] = config.dt;
  doc["steps"] = result.steps;
  doc["logged_records"] = log.records.size();
  doc["runtime_s"] = result.wall_time;
  doc["analysis_cutoff"] = cutoff;

  json load_err;
  load_err["final"] = log.records.empty() ? 0.0 : log.records.back().load_error.norm();
  load_err["max"] = load_max;
  load_err["max_after_cutoff"] = after ? json(load_max_after) : json(nullptr);
  load_err["rms_after_cutoff"] =
      after ? json(std::sqrt(load_sq_after / after)) : json(nullptr);
  doc["load_error"] = load_err;

  const auto transient_effort = transient_control_effort(log, cutoff);
  const double end = log.records.empty() ? 0.0 : log.records.back().t;
  const auto mismatch_initial = mean_tension_mismatch(log, 0.0, 1.0);
  const auto mismatch_final =
      mean_tension_mismatch(log, std::max(0.0, end - 5.0), end + 1.0);
  json vehicles = json::array();
  for (int i = 0; i < n; ++i) {
    const VehicleRecord& last = log.records.empty() ? VehicleRecord{}
                                                    : log.records.back().vehicles[i];
    json v;
    v["index"] = i + 1;
    v["position_error_final"] = (last.position - last.position_desired).norm();
    v["position_error_max"] = veh_max[i];
    v["position_error_max_after_cutoff"] = after ? json(veh_max_after[i]) : json(nullptr);
    v["control_effort_max"] = effort_max[i];
    v["control_effort_rms"] =
        log.records.empty() ? 0.0 : std::sqrt(effort_sq[i] / log.records.size());
    v["control_effort_transient_rms"] = transient_effort[i];
    v["tension_mismatch_initial_mean"] = mismatch_initial[i];
    v["tension_mismatch_final_mean"] = mismatch_final[i];
    vehicles.push_back(v);
  }
  doc["vehicles"] = vehicles;
  doc["max_constraint_residual"] = result.max_constraint_residual;
  doc["slack_events"] = result.slack_events;

  try {
    const DisturbanceBounds b = estimate_disturbance_bounds(log, cutoff);
    doc["disturbance_bounds"] = {{"c1", array(b.c1)}, {"c2", array(b.c2)},
                                 {"c3", array(b.c3)}};
  } catch (const AnalysisError&) {
    doc["disturbance_bounds"] = nullptr;
  }
  return doc;
}

}  // namespace slungload
