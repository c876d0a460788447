// quadsim: scenario runner for the centroidal force-control simulator.
//   simulate --scenario <path> [--mode baseline|adaptive] [--duration S]
//            [--out <csv>] [--summary <path>]
//   compare  --scenario <path> --out-dir <dir>
//   lyapunov --gains <path>
// Exit codes: 0 success, 2 config error, 3 divergence.

#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "afc/sim.hpp"

namespace {

int run_simulate(const std::string& scenario_path, const std::string& mode,
                 double duration_override, const std::string& out_csv,
                 const std::string& out_summary) {
  afc::ScenarioConfig cfg = afc::load_scenario_file(scenario_path);
  if (mode == "baseline") cfg.mode = afc::ControllerMode::Baseline;
  else if (mode == "adaptive") cfg.mode = afc::ControllerMode::Adaptive;
  else if (!mode.empty()) throw afc::ConfigError(0, "mode must be baseline or adaptive");
  if (duration_override > 0.0) cfg.duration = duration_override;

  afc::RunResult res;
  try {
    res = afc::run_scenario(cfg);
  } catch (const afc::SimulationDivergedError& e) {
    std::fprintf(stderr, "diverged: %s (last valid record %ld)\n", e.what(),
                 e.last_valid_record);
    return 3;
  }
  if (!out_csv.empty()) afc::write_csv(res.records, out_csv);
  if (!out_summary.empty()) afc::write_summary(res.summary, out_summary);
  for (const auto& [k, v] : res.summary.items) {
    std::printf("%s = %.9g\n", k.c_str(), v);
  }
  return 0;
}

int run_compare(const std::string& scenario_path, const std::string& out_dir) {
  afc::ScenarioConfig cfg = afc::load_scenario_file(scenario_path);
  std::filesystem::create_directories(out_dir);

  for (const char* mode : {"baseline", "adaptive"}) {
    afc::ScenarioConfig c = cfg;
    c.mode = mode == std::string("baseline") ? afc::ControllerMode::Baseline
                                             : afc::ControllerMode::Adaptive;
    const afc::RunResult r = afc::run_scenario_tolerant(c);
    afc::write_csv(r.records, out_dir + "/" + cfg.name + "_" + mode + ".csv");
    afc::write_summary(r.summary, out_dir + "/" + cfg.name + "_" + mode + ".summary");
  }
  const afc::Comparison cmp = afc::compare_modes(cfg);
  std::printf("metric,baseline,adaptive\n");
  for (const auto& [k, v] : cmp.baseline.items) {
    if (cmp.adaptive.has(k)) {
      std::printf("%s,%.9g,%.9g\n", k.c_str(), v, cmp.adaptive.get(k));
    }
  }
  return 0;
}

int run_lyapunov(const std::string& gains_path) {
  afc::ScenarioConfig cfg =
      gains_path.empty() ? afc::ScenarioConfig{} : afc::load_scenario_file(gains_path);
  const afc::LyapunovData L =
      afc::make_lyapunov_data(cfg.gains, afc::Mat12(cfg.monitor_q_diag.asDiagonal()));
  const auto [p_lo, p_hi] = afc::symmetric_eig_extrema(L.P);
  std::printf("lyapunov_residual = %.12g\n", L.residual);
  std::printf("lambda = %.12g\n", L.lambda);
  std::printf("lambda_min_P = %.12g\n", p_lo);
  std::printf("lambda_max_P = %.12g\n", p_hi);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"centroidal quadruped force-control simulator"};
  app.require_subcommand(1);

  std::string scenario_path, mode, out_csv, out_summary, out_dir, gains_path;
  double duration = -1.0;

  auto* sim = app.add_subcommand("simulate", "run one scenario");
  sim->add_option("--scenario", scenario_path, "scenario config path")->required();
  sim->add_option("--mode", mode, "controller mode override (baseline|adaptive)");
  sim->add_option("--duration", duration, "duration override, seconds");
  sim->add_option("--out", out_csv, "CSV output path");
  sim->add_option("--summary", out_summary, "summary key=value output path");

  auto* cmp = app.add_subcommand("compare", "run baseline and adaptive side by side");
  cmp->add_option("--scenario", scenario_path, "scenario config path")->required();
  cmp->add_option("--out-dir", out_dir, "output directory")->required();

  auto* lyap = app.add_subcommand("lyapunov", "print Lyapunov solve diagnostics");
  lyap->add_option("--gains", gains_path, "scenario/config supplying the gains");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return run_simulate(scenario_path, mode, duration, out_csv, out_summary);
    if (cmp->parsed()) return run_compare(scenario_path, out_dir);
    if (lyap->parsed()) return run_lyapunov(gains_path);
  } catch (const afc::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const afc::SimulationDivergedError& e) {
    std::fprintf(stderr, "diverged: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
