#include "afc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "afc/gait.hpp"

namespace afc {

namespace {

struct TotalInertial {
  InertialParams params;
  Vec3 com_shift = Vec3::Zero();
};

TotalInertial total_inertial(const InertialParams& base, const std::vector<LoadAttachment>& loads,
                             double t) {
  TotalInertial out;
  out.params = base;
  Vec3 weighted = Vec3::Zero();
  for (const auto& l : loads) {
    if (!l.active_at(t)) continue;
    const auto [p, shift] = composite_inertia(out.params, Vec3::Zero(), l, t);
    out.params.mass = p.mass;
    out.params.inertia = p.inertia;
    weighted += l.mass * l.offset;
  }
  if (out.params.mass > 0.0) out.com_shift = weighted / out.params.mass;
  return out;
}

// Desired-COM shift away from the swinging leg, toward the opposite corner of
// the support triangle. The shift crossfades through the all-stance gaps
// (raised cosine over the full gap), so the margin is in place before liftoff;
// the lead-in of the first window plays out during the pre-gait stand.
Vec3 sway_offset(const ScenarioConfig& cfg, double gait_time, const Rot3& R_d) {
  if (cfg.sway_amplitude == 0.0 || cfg.gait.kind != GaitKind::QuasiStaticWalk) {
    return Vec3::Zero();
  }
  const double sf = cfg.gait.swing_fraction;
  const double lead = 0.25 - sf;  // the whole stance gap, in cycle fractions
  if (gait_time < -lead * cfg.gait.cycle_period) return Vec3::Zero();
  // pre-gait times sit in [-lead, 0) and play only the first window's lead-in
  const double cycle = gait_time < 0.0
                           ? gait_time / cfg.gait.cycle_period
                           : std::fmod(gait_time, cfg.gait.cycle_period) / cfg.gait.cycle_period;
  Vec3 shift = Vec3::Zero();
  for (int k = 0; k < 4; ++k) {
    const int leg = cfg.gait.leg_order[k];
    const double start = 0.25 * k;
    double w = 0.0;
    for (double wrap : {0.0, -1.0}) {  // first window's lead-in occupies the cycle tail
      const double c = cycle + wrap;
      if (lead > 0.0 && c >= start - lead && c < start) {
        w = std::max(w, 0.5 * (1.0 - std::cos(M_PI * (c - (start - lead)) / lead)));
      } else if (c >= start && c < start + sf) {
        w = 1.0;
      } else if (lead > 0.0 && c >= start + sf && c < start + sf + lead) {
        w = std::max(w, 0.5 * (1.0 + std::cos(M_PI * (c - (start + sf)) / lead)));
      }
    }
    if (w > 0.0) {
      const Vec3 away = -cfg.gait.hip_offset(leg).normalized();
      shift += w * cfg.sway_amplitude * away;
    }
  }
  return R_d * shift;
}

RunResult run_impl(const ScenarioConfig& cfg) {
  RunResult out;
  const long n_ticks = std::lround(cfg.duration / cfg.dt_ctrl);
  const long substeps = std::lround(cfg.dt_ctrl / cfg.dt_sim);

  const double h0 = cfg.commands.front().cmd.height;
  InertialParams base_true;
  base_true.mass = cfg.plant_mass;
  base_true.inertia = cfg.plant_inertia_diag.asDiagonal();

  PlantState s;
  s.p_c = Vec3(0.0, 0.0, h0) + cfg.init_p_offset;
  s.R = rot_exp(Vec3(0.0, 0.0, cfg.init_rpy.z())) * rot_exp(Vec3(0.0, cfg.init_rpy.y(), 0.0)) *
        rot_exp(Vec3(cfg.init_rpy.x(), 0.0, 0.0));
  for (int leg = 0; leg < 4; ++leg) {
    const Vec3 hip = cfg.gait.hip_offset(leg);
    s.feet[leg] = Vec3(hip.x(), hip.y(), 0.0);
    s.contact[leg] = true;
  }

  LyapunovData L = make_lyapunov_data(cfg.gains, Mat12(cfg.monitor_q_diag.asDiagonal()));
  out.lyapunov = L;

  BalanceController ctrl(cfg.gains, cfg.nominal, cfg.qp_weights, cfg.friction);
  const bool adaptive = cfg.mode == ControllerMode::Adaptive;
  L1Controller l1(cfg.adapt, cfg.gains, cfg.nominal, cfg.qp_weights, cfg.friction, L.P);

  TrajectoryGenerator traj(Vec3(0.0, 0.0, h0));
  {
    ErrorState eta0 = compute_error(s, traj.current());
    eta0.eta.segment<3>(3) *= -1.0;  // predictor model convention
    l1.init(eta0.eta);
  }

  std::array<Vec3, 4> swing_start = s.feet;
  std::array<Vec3, 4> swing_target = s.feet;
  std::array<bool, 4> prev_contact = s.contact;
  Vec3 prev_sway = Vec3::Zero();

  Vec12 eta_prev = compute_error(s, traj.current()).eta;
  std::vector<double> eta_tilde_norms;
  out.records.reserve(static_cast<size_t>(n_ticks));
  eta_tilde_norms.reserve(static_cast<size_t>(n_ticks));

  double max_abs_z = 0.0, max_abs_pitch = 0.0, max_abs_roll = 0.0;
  double sum_z2 = 0.0, sum_pitch2 = 0.0;
  double steady_max_z = 0.0, steady_mean_z_acc = 0.0, steady_max_pitch = 0.0;
  long steady_count = 0;
  double steady_max_bound_check = -1e300;
  int qp_max_iter = 0;
  double kkt_stat = 0.0, kkt_feas = 0.0, kkt_compl = 0.0;
  double containment_margin = -1e300;
  bool fell = false;
  bool diverged = false;
  const double t_steady = cfg.steady_start();

  for (long k = 0; k < n_ticks; ++k) {
    const double t = static_cast<double>(k) * cfg.dt_ctrl;
    const CommandSample& cmd = cfg.command_at(t);

    // gait: update contacts and kinematic swing references
    const ContactSchedule sched = t >= cfg.gait_start_time
                                      ? schedule_at(cfg.gait, t - cfg.gait_start_time)
                                      : ContactSchedule{};
    const Rot3 heading = traj.current().R_d;
    const Vec3 v_cmd_world = heading * cmd.v_cmd;
    for (int leg = 0; leg < 4; ++leg) {
      if (prev_contact[leg] && !sched.contact[leg]) {
        swing_start[leg] = s.feet[leg];  // liftoff
      }
      if (!sched.contact[leg]) {
        const Vec3 hip_world = s.p_c + s.R * cfg.gait.hip_offset(leg);
        swing_target[leg] =
            touchdown_target(hip_world, v_cmd_world, cfg.gait.stance_duration());
        s.feet[leg] = swing_foot_position(swing_start[leg], swing_target[leg],
                                          sched.swing_phase[leg], cfg.gait.swing_height);
      } else if (!prev_contact[leg]) {
        s.feet[leg] = swing_target[leg];  // touchdown snap
        s.feet[leg].z() = 0.0;
      }
      s.contact[leg] = sched.contact[leg];
      prev_contact[leg] = sched.contact[leg];
    }

    DesiredTrajectory des = traj.current();
    const Vec3 sway = sway_offset(cfg, t - cfg.gait_start_time, des.R_d);
    des.p_c_d += sway;
    if (k > 0) des.v_c_d += (sway - prev_sway) / cfg.dt_ctrl;
    prev_sway = sway;

    // controller tick; an attitude error reaching pi means the body flipped
    ErrorState eta;
    TickDiagnostics diag;
    ForceSolution sol;
    Vec12 eta_tilde = Vec12::Zero();
    Vec6 u2 = Vec6::Zero();
    try {
      eta = compute_error(s, des);
      if (adaptive) {
        // the predictor's model has d/dt(e) = edot exactly; the measured
        // orientation error log(R_d R^T) carries the opposite sign of that
        // convention, so flip it on the way into the adaptive stack
        Vec12 eta_model = eta.eta;
        eta_model.segment<3>(3) *= -1.0;
        u2 = l1.begin_tick(eta_model, cfg.dt_ctrl);
        sol = ctrl.tick(s, des, u2, &diag);
        l1.predictor_tick(eta_model, s, cfg.dt_ctrl);
        eta_tilde = l1.eta_tilde();
      } else {
        sol = ctrl.tick(s, des, &diag);
      }
    } catch (const AngleNearPiError&) {
      diverged = true;
      out.last_valid_record = k - 1;
      break;
    }

    const MonitorSample mon = monitor_tick(eta.eta, eta_prev, eta_tilde, L, cfg.dt_ctrl, t,
                                           diag.delta.norm());
    eta_prev = eta.eta;

    LogRecord rec;
    rec.t = t;
    rec.p_c = s.p_c;
    rec.rpy = rpy_from_rot(s.R);
    rec.v_c = s.v_c;
    rec.omega_b = s.omega_b;
    rec.des_p = des.p_c_d;
    rec.des_rpy = rpy_from_rot(des.R_d);
    rec.eta = eta.eta;
    rec.u1 = diag.u1;
    rec.u2 = u2;
    if (adaptive) {
      rec.theta = theta_hat(l1.state(), eta.eta.norm());
      rec.alpha_hat = l1.state().alpha_hat;
      rec.beta_hat = l1.state().beta_hat;
    }
    rec.F = sol.F;
    rec.contact = s.contact;
    rec.mon = mon;
    rec.qp_iterations = sol.iterations;
    rec.qp_active = static_cast<int>(sol.active_set.size());
    rec.eta_tilde_norm = eta_tilde.norm();
    rec.feet = s.feet;
    out.records.push_back(rec);
    eta_tilde_norms.push_back(rec.eta_tilde_norm);

    // metrics
    const double z_err = s.p_c.z() - des.p_c_d.z();
    const double pitch_err = rec.rpy.y() - rec.des_rpy.y();
    const double roll_err = rec.rpy.x() - rec.des_rpy.x();
    max_abs_z = std::max(max_abs_z, std::abs(z_err));
    max_abs_pitch = std::max(max_abs_pitch, std::abs(pitch_err));
    max_abs_roll = std::max(max_abs_roll, std::abs(roll_err));
    sum_z2 += z_err * z_err;
    sum_pitch2 += pitch_err * pitch_err;
    if (t >= t_steady) {
      steady_max_z = std::max(steady_max_z, std::abs(z_err));
      steady_mean_z_acc += std::abs(z_err);
      steady_max_pitch = std::max(steady_max_pitch, std::abs(pitch_err));
      steady_max_bound_check = std::max(steady_max_bound_check, mon.bound_check);
      ++steady_count;
    }
    qp_max_iter = std::max(qp_max_iter, sol.iterations);
    kkt_stat = std::max(kkt_stat, sol.kkt_stationarity);
    kkt_feas = std::max(kkt_feas, sol.kkt_feasibility);
    kkt_compl = std::max(kkt_compl, sol.kkt_complementarity);
    if (adaptive) {
      const double lim = 1.0 + cfg.adapt.eps_p;
      for (int i = 0; i < 6; ++i) {
        const double cap = cfg.adapt.theta_bound(i) * std::sqrt(lim);
        containment_margin = std::max(containment_margin,
                                      std::abs(l1.state().alpha_hat(i)) - cap);
        containment_margin = std::max(containment_margin,
                                      std::abs(l1.state().beta_hat(i)) - cap);
      }
    }

    if (std::abs(rec.rpy.x()) > 0.6 || std::abs(rec.rpy.y()) > 0.6 || s.p_c.z() < 0.1) {
      fell = true;
    }

    // plant substeps under held forces
    bool bad = false;
    for (long sub = 0; sub < substeps && !bad; ++sub) {
      const double ts = t + static_cast<double>(sub) * cfg.dt_sim;
      const TotalInertial ti = total_inertial(base_true, cfg.loads, ts);
      Wrench w = cfg.disturbances.at(ts);
      const Wrench lw = load_gravity_wrench(ti.com_shift, ti.params.mass, s.R);
      w.torque += lw.torque;
      try {
        s = plant_step(s, sol.F, ti.params, w, cfg.dt_sim);
      } catch (const NonFiniteError&) {
        bad = true;
      }
    }
    if (bad || s.p_c.norm() > 100.0) {
      diverged = true;
      out.last_valid_record = k;
      break;
    }

    traj.step(cmd, cfg.dt_ctrl);
  }

  out.fell = fell || diverged;
  out.diverged = diverged;
  {
    std::vector<MonitorSample> mons;
    mons.reserve(out.records.size());
    for (const auto& r : out.records) mons.push_back(r.mon);
    out.bound = ultimate_bound_report(mons, eta_tilde_norms, L);
  }

  const double n = std::max<double>(1.0, static_cast<double>(out.records.size()));
  Summary& sm = out.summary;
  sm.set("max_abs_z_error", max_abs_z);
  sm.set("rms_z_error", std::sqrt(sum_z2 / n));
  sm.set("steady_max_abs_z_error", steady_max_z);
  sm.set("steady_mean_abs_z_error", steady_count > 0 ? steady_mean_z_acc / steady_count : 0.0);
  sm.set("max_abs_pitch_error", max_abs_pitch);
  sm.set("rms_pitch_error", std::sqrt(sum_pitch2 / n));
  sm.set("steady_max_abs_pitch_error", steady_max_pitch);
  sm.set("max_abs_roll_error", max_abs_roll);
  sm.set("fell", out.fell ? 1.0 : 0.0);
  sm.set("diverged", diverged ? 1.0 : 0.0);
  sm.set("steady_max_bound_check", steady_count > 0 ? steady_max_bound_check : 0.0);
  sm.set("max_V_tilde", out.bound.max_V_tilde);
  sm.set("max_eta_tilde", out.bound.max_eta_tilde_norm);
  sm.set("early_max_eta_tilde", out.bound.early_max_eta_tilde);
  sm.set("late_max_eta_tilde", out.bound.late_max_eta_tilde);
  sm.set("eta_tilde_consistency_ok", out.bound.consistency_ok ? 1.0 : 0.0);
  sm.set("qp_max_iterations", qp_max_iter);
  sm.set("qp_max_kkt_stationarity", kkt_stat);
  sm.set("qp_max_kkt_feasibility", kkt_feas);
  sm.set("qp_max_kkt_complementarity", kkt_compl);
  sm.set("containment_margin", adaptive ? containment_margin : 0.0);
  sm.set("lyapunov_residual", L.residual);
  sm.set("lambda", L.lambda);
  sm.set("steady_start", t_steady);
  return out;
}

}  // namespace

void Summary::set(const std::string& key, double value) {
  for (auto& [k, v] : items) {
    if (k == key) {
      v = value;
      return;
    }
  }
  items.emplace_back(key, value);
}

double Summary::get(const std::string& key) const {
  for (const auto& [k, v] : items) {
    if (k == key) return v;
  }
  throw std::out_of_range("summary key '" + key + "' missing");
}

bool Summary::has(const std::string& key) const {
  for (const auto& [k, v] : items) {
    if (k == key) return true;
  }
  return false;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
  RunResult r = run_impl(cfg);
  if (r.diverged) {
    throw SimulationDivergedError(r.last_valid_record,
                                  "simulation diverged in scenario '" + cfg.name + "'");
  }
  return r;
}

RunResult run_scenario_tolerant(const ScenarioConfig& cfg) { return run_impl(cfg); }

Comparison compare_modes(const ScenarioConfig& cfg) {
  Comparison cmp;
  ScenarioConfig base = cfg;
  base.mode = ControllerMode::Baseline;
  ScenarioConfig adap = cfg;
  adap.mode = ControllerMode::Adaptive;
  const RunResult rb = run_impl(base);
  const RunResult ra = run_impl(adap);
  cmp.baseline = rb.summary;
  cmp.adaptive = ra.summary;
  cmp.baseline_fell = rb.fell;
  cmp.adaptive_fell = ra.fell;
  return cmp;
}

std::string csv_header() {
  std::string h = "t";
  auto add = [&h](const std::string& base, int n) {
    for (int i = 0; i < n; ++i) h += "," + base + "_" + std::to_string(i);
  };
  h += ",p_x,p_y,p_z,roll,pitch,yaw,v_x,v_y,v_z,w_x,w_y,w_z";
  h += ",des_x,des_y,des_z,des_roll,des_pitch,des_yaw";
  add("eta", 12);
  add("u1", 6);
  add("u2", 6);
  add("theta", 6);
  add("alpha", 6);
  add("beta", 6);
  add("F", 12);
  h += ",c0,c1,c2,c3";
  h += ",V,Vdot,bound_check,V_tilde,delta_u";
  h += ",qp_iter,qp_active";
  return h;
}

void write_csv(const std::vector<LogRecord>& records, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("write_csv: cannot open '" + path + "'");
  std::fputs(csv_header().c_str(), f);
  std::fputc('\n', f);
  auto put = [f](double v) { std::fprintf(f, ",%.9g", v); };
  for (const auto& r : records) {
    std::fprintf(f, "%.9g", r.t);
    for (int i = 0; i < 3; ++i) put(r.p_c(i));
    for (int i = 0; i < 3; ++i) put(r.rpy(i));
    for (int i = 0; i < 3; ++i) put(r.v_c(i));
    for (int i = 0; i < 3; ++i) put(r.omega_b(i));
    for (int i = 0; i < 3; ++i) put(r.des_p(i));
    for (int i = 0; i < 3; ++i) put(r.des_rpy(i));
    for (int i = 0; i < 12; ++i) put(r.eta(i));
    for (int i = 0; i < 6; ++i) put(r.u1(i));
    for (int i = 0; i < 6; ++i) put(r.u2(i));
    for (int i = 0; i < 6; ++i) put(r.theta(i));
    for (int i = 0; i < 6; ++i) put(r.alpha_hat(i));
    for (int i = 0; i < 6; ++i) put(r.beta_hat(i));
    for (int i = 0; i < 12; ++i) put(r.F(i));
    for (int i = 0; i < 4; ++i) std::fprintf(f, ",%d", r.contact[i] ? 1 : 0);
    put(r.mon.V);
    put(r.mon.Vdot_num);
    put(r.mon.bound_check);
    put(r.mon.V_tilde);
    put(r.mon.delta_u);
    std::fprintf(f, ",%d,%d", r.qp_iterations, r.qp_active);
    std::fputc('\n', f);
  }
  std::fclose(f);
}

void write_summary(const Summary& s, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("write_summary: cannot open '" + path + "'");
  for (const auto& [k, v] : s.items) {
    std::fprintf(f, "%s = %.9g\n", k.c_str(), v);
  }
  std::fclose(f);
}

}  // namespace afc
