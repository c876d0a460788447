#ifndef AFC_SIM_HPP
#define AFC_SIM_HPP

#include <string>
#include <vector>

#include "afc/scenario.hpp"
#include "afc/stability.hpp"

namespace afc {

/// One row per control tick; the quantities plotted by the experiments plus
/// solver/monitor diagnostics. eta_tilde_norm stays in memory only (not a CSV
/// column).
struct LogRecord {
  double t = 0.0;
  Vec3 p_c = Vec3::Zero();
  Vec3 rpy = Vec3::Zero();
  Vec3 v_c = Vec3::Zero();
  Vec3 omega_b = Vec3::Zero();
  Vec3 des_p = Vec3::Zero();
  Vec3 des_rpy = Vec3::Zero();
  Vec12 eta = Vec12::Zero();
  Vec6 u1 = Vec6::Zero();
  Vec6 u2 = Vec6::Zero();
  Vec6 theta = Vec6::Zero();
  Vec6 alpha_hat = Vec6::Zero();
  Vec6 beta_hat = Vec6::Zero();
  Vec12 F = Vec12::Zero();
  std::array<bool, 4> contact{};
  MonitorSample mon;
  int qp_iterations = 0;
  int qp_active = 0;
  double eta_tilde_norm = 0.0;
  std::array<Vec3, 4> feet{};  // in-memory diagnostic; not a CSV column
};

/// Ordered key/value metric list; insertion order is the file order.
struct Summary {
  std::vector<std::pair<std::string, double>> items;
  void set(const std::string& key, double value);
  double get(const std::string& key) const;  // throws if missing
  bool has(const std::string& key) const;
};

struct RunResult {
  std::vector<LogRecord> records;
  Summary summary;
  bool fell = false;
  bool diverged = false;
  long last_valid_record = -1;
  BoundReport bound;
  LyapunovData lyapunov;
};

/// Runs the control loop at dt_ctrl with dt_ctrl/dt_sim plant substeps under
/// zero-order-held forces. Deterministic: identical config gives bit-identical
/// records. Throws SimulationDivergedError when |p_c| > 100 m or the state
/// goes non-finite.
RunResult run_scenario(const ScenarioConfig& cfg);

/// Like run_scenario but reports divergence in the result instead of throwing.
RunResult run_scenario_tolerant(const ScenarioConfig& cfg);

struct Comparison {
  Summary baseline;
  Summary adaptive;
  bool baseline_fell = false;
  bool adaptive_fell = false;
};

/// Runs the scenario under both controller modes with everything else equal.
Comparison compare_modes(const ScenarioConfig& cfg);

/// Header plus one line per record, LF endings, doubles with 9 significant
/// digits. Byte-identical across replays of the same run.
void write_csv(const std::vector<LogRecord>& records, const std::string& path);

std::string csv_header();

void write_summary(const Summary& s, const std::string& path);

}  // namespace afc

#endif  // AFC_SIM_HPP
