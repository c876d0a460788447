#ifndef AFC_SCENARIO_HPP
#define AFC_SCENARIO_HPP

#include <string>
#include <vector>

#include "afc/balance_controller.hpp"
#include "afc/gait.hpp"
#include "afc/l1_adaptation.hpp"
#include "afc/plant.hpp"

namespace afc {

enum class ControllerMode { Baseline, Adaptive };

struct CommandSegment {
  double t_start = 0.0;
  CommandSample cmd;
};

/// Declarative experiment description. Flat `section.key = value` text format,
/// `#` comments, indexed sub-sections for lists (`load.0.mass = 6`). Unknown
/// keys are parse errors.
struct ScenarioConfig {
  std::string name = "scenario";
  double duration = 10.0;   // s
  double dt_sim = 2.5e-4;   // s
  double dt_ctrl = 1e-3;    // s
  long seed = 0;            // reserved for sensor-noise injection; inert

  GaitConfig gait;
  double sway_amplitude = 0.0;   // m, lateral desired-trajectory shift while walking
  double gait_start_time = 0.0;  // s, stand (all stance) before the cycle begins

  std::vector<CommandSegment> commands;  // sorted by t_start
  std::vector<LoadAttachment> loads;
  DisturbanceSchedule disturbances;

  ControllerMode mode = ControllerMode::Baseline;
  GainMatrices gains;
  NominalModel nominal;
  QPWeights qp_weights;
  FrictionParams friction;
  AdaptConfig adapt;
  Vec12 monitor_q_diag = Vec12::Ones();

  // true plant base parameters (defaults to the nominal model; model
  // uncertainty usually enters through loads instead)
  double plant_mass = 12.0;
  Vec3 plant_inertia_diag = Vec3(0.0158533, 0.0377999, 0.0456542);

  Vec3 init_p_offset = Vec3::Zero();  // applied to the initial body position
  Vec3 init_rpy = Vec3::Zero();       // initial attitude offset

  double metrics_steady_start = -1.0;  // <0 means duration - 2

  const CommandSample& command_at(double t) const;
  double steady_start() const { return metrics_steady_start >= 0.0 ? metrics_steady_start
                                                                   : duration - 2.0; }
};

/// Parses and validates scenario text. Throws ConfigError with a line number
/// on malformed input, unknown keys, or invariant violations.
ScenarioConfig parse_scenario(const std::string& text);

ScenarioConfig load_scenario_file(const std::string& path);

}  // namespace afc

#endif  // AFC_SCENARIO_HPP
