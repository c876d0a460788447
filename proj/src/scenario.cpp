#include "afc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace afc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& value, int line) {
  std::vector<double> out;
  std::istringstream iss(value);
  std::string tok;
  while (iss >> tok) {
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(line, "expected a number, got '" + tok + "'");
    }
  }
  if (out.empty()) throw ConfigError(line, "expected a numeric value");
  return out;
}

double parse_one(const std::string& value, int line) {
  const auto v = parse_numbers(value, line);
  if (v.size() != 1) throw ConfigError(line, "expected a single number");
  return v[0];
}

template <int N>
Eigen::Matrix<double, N, 1> parse_fixed(const std::string& value, int line) {
  const auto v = parse_numbers(value, line);
  if (static_cast<int>(v.size()) != N) {
    throw ConfigError(line, "expected " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) out(i) = v[i];
  return out;
}

bool parse_bool(const std::string& value, int line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(line, "expected true/false, got '" + value + "'");
}

// splits "load.0.mass" into ("load", 0, "mass"); index -1 when absent
struct KeyParts {
  std::string section;
  int index = -1;
  std::string field;
};

KeyParts split_key(const std::string& key) {
  KeyParts parts;
  const auto dot1 = key.find('.');
  if (dot1 == std::string::npos) {
    parts.field = key;
    return parts;
  }
  parts.section = key.substr(0, dot1);
  std::string rest = key.substr(dot1 + 1);
  const auto dot2 = rest.find('.');
  if (dot2 != std::string::npos) {
    const std::string maybe_index = rest.substr(0, dot2);
    if (!maybe_index.empty() &&
        std::all_of(maybe_index.begin(), maybe_index.end(), ::isdigit)) {
      parts.index = std::stoi(maybe_index);
      rest = rest.substr(dot2 + 1);
    }
  }
  parts.field = rest;
  return parts;
}

void validate(const ScenarioConfig& cfg) {
  if (!(cfg.duration > 0.0)) throw ConfigError(0, "duration must be positive");
  if (!(cfg.dt_sim > 0.0) || !(cfg.dt_ctrl > 0.0)) {
    throw ConfigError(0, "dt_sim and dt_ctrl must be positive");
  }
  const double ratio = cfg.dt_ctrl / cfg.dt_sim;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw ConfigError(0, "dt_ctrl must be an integer multiple of dt_sim");
  }
  if (cfg.gait.kind == GaitKind::QuasiStaticWalk) {
    if (!(cfg.gait.cycle_period > 0.0)) throw ConfigError(0, "gait.cycle_period must be positive");
    if (cfg.gait.swing_fraction <= 0.0 || 4.0 * cfg.gait.swing_fraction > 1.0 + 1e-12) {
      throw ConfigError(0, "gait.swing_fraction must satisfy 0 < 4*swing_fraction <= 1");
    }
    std::array<bool, 4> seen{};
    for (int leg : cfg.gait.leg_order) {
      if (leg < 0 || leg > 3 || seen[leg]) throw ConfigError(0, "gait.leg_order must be a permutation of 0..3");
      seen[leg] = true;
    }
  }
  for (const auto& l : cfg.loads) {
    if (l.mass < 0.0) throw ConfigError(0, "load mass must be non-negative");
    if (!(l.active_from <= l.active_to)) throw ConfigError(0, "load activation times must be ordered");
  }
  // disturbance windows must not overlap on any shared axis
  const auto& ev = cfg.disturbances.events;
  for (size_t i = 0; i < ev.size(); ++i) {
    for (size_t j = i + 1; j < ev.size(); ++j) {
      const bool overlap_t = ev[i].t_start < ev[j].t_end && ev[j].t_start < ev[i].t_end;
      if (!overlap_t) continue;
      for (int a = 0; a < 3; ++a) {
        if (ev[i].force(a) != 0.0 && ev[j].force(a) != 0.0) {
          throw ConfigError(0, "disturbance windows overlap on a force axis");
        }
        if (ev[i].torque(a) != 0.0 && ev[j].torque(a) != 0.0) {
          throw ConfigError(0, "disturbance windows overlap on a torque axis");
        }
      }
    }
  }
  if (!(cfg.friction.mu > 0.0) || cfg.friction.fz_min < 0.0 ||
      !(cfg.friction.fz_min < cfg.friction.fz_max)) {
    throw ConfigError(0, "qp friction parameters invalid");
  }
  for (int i = 0; i < 6; ++i) {
    if (cfg.qp_weights.s_diag(i) < 0.0) throw ConfigError(0, "qp.s entries must be >= 0");
    if (!(cfg.gains.kp(i) > 0.0) || !(cfg.gains.kd(i) > 0.0)) {
      throw ConfigError(0, "controller gains must be positive");
    }
    if (cfg.adapt.gamma(i) < 0.0) throw ConfigError(0, "adapt.gamma entries must be >= 0");
    if (!(cfg.adapt.theta_bound(i) > 0.0)) throw ConfigError(0, "adapt.bounds must be positive");
  }
  if (cfg.qp_weights.gamma1 < 0.0 || cfg.qp_weights.gamma2 < 0.0) {
    throw ConfigError(0, "qp.gamma1/gamma2 must be >= 0");
  }
  if (cfg.adapt.zeta <= 0.0 || cfg.adapt.zeta > 1.0) throw ConfigError(0, "adapt.zeta must be in (0,1]");
  if (!(cfg.adapt.omega_n > 0.0)) throw ConfigError(0, "adapt.omega_n must be positive");
  if (cfg.adapt.eps_p <= 0.0 || cfg.adapt.eps_p > 1.0) throw ConfigError(0, "adapt.eps_p must be in (0,1]");
  if (!(cfg.nominal.mass > 0.0) || !(cfg.plant_mass > 0.0)) {
    throw ConfigError(0, "masses must be positive");
  }
}

}  // namespace

const CommandSample& ScenarioConfig::command_at(double t) const {
  const CommandSample* best = &commands.front().cmd;
  for (const auto& seg : commands) {
    if (seg.t_start <= t) best = &seg.cmd;
  }
  return *best;
}

ScenarioConfig parse_scenario(const std::string& text) {
  ScenarioConfig cfg;
  std::map<int, CommandSegment> commands;
  std::map<int, LoadAttachment> loads;
  std::map<int, DisturbanceEvent> dists;

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(line_no, "empty key or value");

    const KeyParts k = split_key(key);
    const int ln = line_no;
    if (k.section.empty()) {
      if (k.field == "name") cfg.name = value;
      else if (k.field == "duration") cfg.duration = parse_one(value, ln);
      else if (k.field == "dt_sim") cfg.dt_sim = parse_one(value, ln);
      else if (k.field == "dt_ctrl") cfg.dt_ctrl = parse_one(value, ln);
      else if (k.field == "seed") cfg.seed = static_cast<long>(parse_one(value, ln));
      else throw ConfigError(ln, "unknown key '" + key + "'");
    } else if (k.section == "gait") {
      if (k.field == "kind") {
        if (value == "stand") cfg.gait.kind = GaitKind::Stand;
        else if (value == "quasi_static_walk") cfg.gait.kind = GaitKind::QuasiStaticWalk;
        else throw ConfigError(ln, "gait.kind must be stand or quasi_static_walk, got '" + value + "'");
      } else if (k.field == "cycle_period") cfg.gait.cycle_period = parse_one(value, ln);
      else if (k.field == "swing_fraction") cfg.gait.swing_fraction = parse_one(value, ln);
      else if (k.field == "swing_height") cfg.gait.swing_height = parse_one(value, ln);
      else if (k.field == "hip_dx") cfg.gait.hip_dx = parse_one(value, ln);
      else if (k.field == "hip_dy") cfg.gait.hip_dy = parse_one(value, ln);
      else if (k.field == "sway_amplitude") cfg.sway_amplitude = parse_one(value, ln);
      else if (k.field == "start_time") cfg.gait_start_time = parse_one(value, ln);
      else if (k.field == "leg_order") {
        const auto v = parse_fixed<4>(value, ln);
        for (int i = 0; i < 4; ++i) cfg.gait.leg_order[i] = static_cast<int>(v(i));
      } else throw ConfigError(ln, "unknown key '" + key + "'");
    } else if (k.section == "commands" && k.index >= 0) {
      auto& seg = commands[k.index];
      if (k.field == "t_start") seg.t_start = parse_one(value, ln);
      else if (k.field == "vx") seg.cmd.v_cmd.x() = parse_one(value, ln);
      else if (k.field == "vy") seg.cmd.v_cmd.y() = parse_one(value, ln);
      else if (k.field == "yaw_rate") seg.cmd.yaw_rate = parse_one(value, ln);
      else if (k.field == "height") seg.cmd.height = parse_one(value, ln);
      else throw ConfigError(ln, "unknown key '" + key + "'");
    } else if (k.section == "load" && k.index >= 0) {
      auto& l = loads[k.index];
      if (k.field == "mass") l.mass = parse_one(value, ln);
      else if (k.field == "offset") l.offset = parse_fixed<3>(value, ln);
      else if (k.field == "active_from") l.active_from = parse_one(value, ln);
      else if (k.field == "active_to") l.active_to = parse_one(value, ln);
      else throw ConfigError(ln, "unknown key '" + key + "'");
    } else if (k.section == "dist" && k.index >= 0) {
      auto& d = dists[k.index];
      if (k.field == "kind") {
        if (value == "step") d.kind = DisturbanceEvent::Kind::Step;
        else if (value == "sine") d.kind = DisturbanceEvent::Kind::Sine;
        else throw ConfigError(ln, "dist.kind must be step or sine, got '" + value + "'");
      } else if (k.field == "force") d.force = parse_fixed<3>(value, ln);
      else if (k.field == "torque") d.torque = parse_fixed<3>(value, ln);
      else if (k.field == "freq_hz") d.freq_hz = parse_one(value, ln);
      else if (k.field == "phase") d.phase = parse_one(value, ln);
      else if (k.field == "t_start") d.t_start = parse_one(value, ln);
      else if (k.field == "t_end") d.t_end = parse_one(value, ln);
      else throw ConfigError(ln, "unknown key '" + key + "'");
    } else if (k.section == "controller") {
      if (k.field == "mode") {
        if (value == "baseline") cfg.mode = ControllerMode::Baseline;
        else if (value == "adaptive") cfg.mode = ControllerMode::Adaptive;
        else throw ConfigError(ln, "controller.mode must be baseline or adaptive, got '" + value + "'");
      } else if (k.field == "kp") cfg.gains.kp = parse_fixed<6>(value, ln);
      else if (k.field == "kd") cfg.gains.kd = parse_fixed<6>(value, ln);
      else if (k.field == "mass") cfg.nominal.mass = parse_one(value, ln);
      else if (k.field == "inertia") cfg.nominal.inertia = parse_fixed<3>(value, ln).asDiagonal();
      else throw ConfigError(ln, "unknown key '" + key + "'");
    } else if (k.section == "qp") {
      if (k.field == "s") cfg.qp_weights.s_diag = parse_fixed<6>(value, ln);
      else if (k.field == "gamma1") cfg.qp_weights.gamma1 = parse_one(value, ln);
      else if (k.field == "gamma2") cfg.qp_weights.gamma2 = parse_one(value, ln);
      else if (k.field == "mu") cfg.friction.mu = parse_one(value, ln);
      else if (k.field == "fz_min") cfg.friction.fz_min = parse_one(value, ln);
      else if (k.field == "fz_max") cfg.friction.fz_max = parse_one(value, ln);
      else throw ConfigError(ln, "unknown key '" + key + "'");
    } else if (k.section == "adapt") {
      if (k.field == "gamma") cfg.adapt.gamma = parse_fixed<6>(value, ln);
      else if (k.field == "zeta") cfg.adapt.zeta = parse_one(value, ln);
      else if (k.field == "omega_n") cfg.adapt.omega_n = parse_one(value, ln);
      else if (k.field == "bounds") cfg.adapt.theta_bound = parse_fixed<6>(value, ln);
      else if (k.field == "eps_p") cfg.adapt.eps_p = parse_one(value, ln);
      else if (k.field == "enabled") cfg.adapt.enabled = parse_bool(value, ln);
      else if (k.field == "predictor_uses_qp") cfg.adapt.predictor_uses_qp = parse_bool(value, ln);
      else throw ConfigError(ln, "unknown key '" + key + "'");
    } else if (k.section == "monitor") {
      if (k.field == "q_diag") cfg.monitor_q_diag = parse_fixed<12>(value, ln);
      else throw ConfigError(ln, "unknown key '" + key + "'");
    } else if (k.section == "plant") {
      if (k.field == "mass") cfg.plant_mass = parse_one(value, ln);
      else if (k.field == "inertia") cfg.plant_inertia_diag = parse_fixed<3>(value, ln);
      else throw ConfigError(ln, "unknown key '" + key + "'");
    } else if (k.section == "init") {
      if (k.field == "p_offset") cfg.init_p_offset = parse_fixed<3>(value, ln);
      else if (k.field == "rpy") cfg.init_rpy = parse_fixed<3>(value, ln);
      else throw ConfigError(ln, "unknown key '" + key + "'");
    } else if (k.section == "metrics") {
      if (k.field == "steady_start") cfg.metrics_steady_start = parse_one(value, ln);
      else throw ConfigError(ln, "unknown key '" + key + "'");
    } else {
      throw ConfigError(ln, "unknown key '" + key + "'");
    }
  }

  for (auto& [idx, seg] : commands) cfg.commands.push_back(seg);
  std::sort(cfg.commands.begin(), cfg.commands.end(),
            [](const CommandSegment& a, const CommandSegment& b) { return a.t_start < b.t_start; });
  if (cfg.commands.empty()) cfg.commands.push_back(CommandSegment{});
  for (auto& [idx, l] : loads) cfg.loads.push_back(l);
  for (auto& [idx, d] : dists) cfg.disturbances.events.push_back(d);

  validate(cfg);
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace afc
