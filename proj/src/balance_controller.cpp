#include "afc/balance_controller.hpp"

namespace afc {

ErrorState compute_error(const PlantState& s, const DesiredTrajectory& d) {
  ErrorState e;
  e.eta.segment<3>(0) = s.p_c - d.p_c_d;
  e.eta.segment<3>(3) = orientation_error(d.R_d, s.R);
  e.eta.segment<3>(6) = s.v_c - d.v_c_d;
  e.eta.segment<3>(9) = s.omega_b - d.omega_b_d;
  return e;
}

Vec6 pd_law(const ErrorState& eta, const GainMatrices& g) {
  Vec6 u;
  const Vec3 e_pos = eta.eta.segment<3>(0);
  const Vec3 e_rot = eta.eta.segment<3>(3);
  const Vec3 e_vel = eta.eta.segment<3>(6);
  const Vec3 e_omega = eta.eta.segment<3>(9);
  u.head<3>() = -g.kp.head<3>().cwiseProduct(e_pos) - g.kd.head<3>().cwiseProduct(e_vel);
  u.tail<3>() = g.kp.tail<3>().cwiseProduct(e_rot) - g.kd.tail<3>().cwiseProduct(e_omega);
  return u;
}

Vec6 desired_dynamics(const Vec6& u_total, const NominalModel& nm) {
  return nm.M() * u_total + nm.G();
}

ForceSolution BalanceController::tick(const PlantState& s, const DesiredTrajectory& d,
                                      const Vec6& u2, TickDiagnostics* diag) {
  const ErrorState err = compute_error(s, d);
  const Vec6 u1 = pd_law(err, gains_);
  const Vec6 u_cmd = u1 + u2;
  const Vec6 b_d = desired_dynamics(u_cmd, nominal_);
  const WrenchMatrix wm = build_wrench_matrix(s.feet, s.p_c);
  const ConstraintSet cs = build_constraints(s.contact, friction_);
  ForceSolution sol = solver_.solve(wm, b_d, weights_, F_prev_, cs);
  F_prev_ = sol.F;
  if (diag) {
    diag->eta = err.eta;
    diag->u1 = u1;
    diag->u_cmd = u_cmd;
    diag->b_d = b_d;
    diag->achieved = achieved_wrench(wm, sol);
    const Mat6 M = nominal_.M();
    diag->u_star = M.ldlt().solve(diag->achieved - nominal_.G());
    diag->delta = diag->u_star - u_cmd;
  }
  return sol;
}

void BalanceController::reset() {
  solver_.reset();
  F_prev_.setZero();
}

const DesiredTrajectory& TrajectoryGenerator::step(const CommandSample& cmd, double dt) {
  const Rot3 heading = rot_z(yaw_);
  const Vec3 v_world = heading * cmd.v_cmd;
  des_.p_c_d.x() += dt * v_world.x();
  des_.p_c_d.y() += dt * v_world.y();
  des_.p_c_d.z() = cmd.height;
  yaw_ += dt * cmd.yaw_rate;
  des_.R_d = rot_z(yaw_);
  des_.v_c_d = Vec3(v_world.x(), v_world.y(), 0.0);
  des_.omega_b_d = Vec3(0.0, 0.0, cmd.yaw_rate);
  return des_;
}

}  // namespace afc
