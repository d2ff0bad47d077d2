#pragma once

#include <functional>

#include <json.hpp>

#include "slungload/log.hpp"
#include "slungload/scenario.hpp"

namespace slungload {

struct SimulationResult {
  SimLog log;
  SystemState final_state;
  long steps = 0;
  double max_constraint_residual = 0.0;  // over every integrator step
  long slack_events = 0;                 // steps with some T_i <= 0
  double wall_time = 0.0;                // s
};

/// Observer called once per integrator step with the state at the start of
/// the step and the controller output applied over it.
using StepObserver =
    std::function<void(long step, const SystemState&, const ControllerOutput&)>;

/// Closes the loop for config.step_count() steps of size config.dt. Logs
/// every config.output.decimate-th step. Throws DynamicsError naming the
/// failing step on divergence, singular attitude commands or non-finite
/// values; ConfigError if the gains fail the strict check.
SimulationResult simulate(const ScenarioConfig& config,
                          const StepObserver& observer = {});

/// Builds the log row for one step.
LogRecord make_record(const SystemState& state, const ReferenceSample& ref,
                      const ControllerOutput& out, const TensionSolution& tension,
                      const SystemParams& params);

/// summary.json content: errors, residuals, slack events, disturbance bounds
/// (null if the run is shorter than the analysis cutoff), control efforts,
/// tension mismatch and runtime.
nlohmann::json summarize(const ScenarioConfig& config,
                         const SimulationResult& result);

/// RMS of ‖u_i‖ over records with t < t_end, per vehicle.
std::vector<double> transient_control_effort(const SimLog& log, double t_end);

/// Mean ‖T_iα_i - T_idα_id‖ over records with t in [t0, t1), per vehicle.
std::vector<double> mean_tension_mismatch(const SimLog& log, double t0, double t1);

}  // namespace slungload
