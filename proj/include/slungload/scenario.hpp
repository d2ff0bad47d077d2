#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "slungload/controller.hpp"
#include "slungload/dynamics.hpp"
#include "slungload/trajectory.hpp"

namespace slungload {

enum class InitialPreset {
  kReference,  // three agents at the rotated cable-top positions, load at 0
  kSymmetric,  // n agents evenly spaced in azimuth on a cone
  kExplicit,   // poses given in the document
};

std::string to_string(InitialPreset preset);

struct InitialConditions {
  InitialPreset preset = InitialPreset::kReference;
  double cone_angle = std::numbers::pi / 6.0;  // symmetric preset
  double azimuth_offset = 0.0;                 // symmetric preset
  SystemState state;                           // explicit preset

  bool operator==(const InitialConditions&) const = default;
};

struct OutputOptions {
  bool plots = false;
  int decimate = 1;
  double analysis_cutoff = 5.0;  // s, transient excluded from bound estimates

  bool operator==(const OutputOptions&) const = default;
};

struct ScenarioConfig {
  SystemParams params;
  ControllerGains gains;
  ControllerOptions controller;
  TrajectoryConfig trajectory;
  double dt = 1e-3;
  double duration = 20.0;
  InitialConditions initial;
  OutputOptions output;

  int vehicle_count() const { return params.vehicle_count(); }
  /// Number of integrator steps, round(duration / dt).
  long step_count() const;

  /// The reference three-agent scenario.
  static ScenarioConfig Default();

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses and validates a configuration document. Missing fields take the
/// reference-scenario defaults; an empty object yields ScenarioConfig::Default().
/// Throws ConfigError naming the offending field path.
ScenarioConfig load_config(const nlohmann::json& doc);
ScenarioConfig load_config_file(const std::filesystem::path& path);

/// Fully explicit document; load_config(to_json(c)) == c.
nlohmann::json to_json(const ScenarioConfig& config);

/// Load at the origin; agents at R_(z,-π/4)R_(y,-π/6)[0,0,L1],
/// R_(z,π/4)R_(y,-π/6)[0,0,L2] and R_(y,π/6)[0,0,L3]. At rest, identity
/// attitudes. Requires exactly three vehicles.
SystemState paper_initial_conditions(const SystemParams& params);

/// Agent i at azimuth offset + 2πi/n, tilted `cone_angle` from vertical.
SystemState symmetric_initial_conditions(const SystemParams& params,
                                         double cone_angle,
                                         double azimuth_offset = 0.0);

struct HoverEquilibrium {
  SystemState state;                 // attitudes aligned with the thrust
  std::vector<Vec3> tension_vectors; // T_i α_i
  std::vector<double> tensions;      // m_L g / (n cos θ)
};

/// Static equilibrium of the symmetric cone geometry: load at the origin,
/// equal tensions, each vehicle tilted so its thrust m_i g e3 - T_i α_i is
/// along the body z axis.
HoverEquilibrium symmetric_hover_equilibrium(const SystemParams& params,
                                             double cone_angle);

/// `base` turned into the hover test: constant setpoint at the origin,
/// explicit initial state at the equilibrium and fixed-share allocation of
/// the equilibrium tension vectors.
ScenarioConfig hover_equilibrium_config(ScenarioConfig base, double cone_angle);

/// Builds the initial state described by `config.initial` and checks the
/// cable constraint (1e-9 m) and its rate.
SystemState initial_state(const ScenarioConfig& config);

}  // namespace slungload
