#ifndef AFC_BALANCE_CONTROLLER_HPP
#define AFC_BALANCE_CONTROLLER_HPP

#include "afc/force_qp.hpp"
#include "afc/so3.hpp"
#include "afc/state.hpp"

namespace afc {

/// eta = [e_pos; e_rot; e_vel; e_omega], errors as actual minus desired except
/// e_rot = log(R_d R^T) which measures desired minus actual.
struct ErrorState {
  Vec12 eta = Vec12::Zero();
};

struct GainMatrices {
  Vec6 kp = (Vec6() << 30, 30, 50, 80, 80, 80).finished();
  Vec6 kd = (Vec6() << 10, 10, 10, 50, 50, 50).finished();
};

struct NominalModel {
  double mass = 12.0;  // kg
  Mat3 inertia = (Mat3() << 0.0158533, 0, 0,
                            0, 0.0377999, 0,
                            0, 0, 0.0456542).finished();

  Mat6 M() const {
    Mat6 m = Mat6::Zero();
    m.topLeftCorner<3, 3>() = mass * Mat3::Identity();
    m.bottomRightCorner<3, 3>() = inertia;
    return m;
  }
  Vec6 G() const {
    Vec6 g = Vec6::Zero();
    g(2) = mass * kGravity;
    return g;
  }
};

struct DesiredTrajectory {
  Vec3 p_c_d = Vec3::Zero();
  Vec3 v_c_d = Vec3::Zero();
  Rot3 R_d = Rot3::Identity();
  Vec3 omega_b_d = Vec3::Zero();
};

/// Throws AngleNearPiError when the relative rotation is near a half turn.
ErrorState compute_error(const PlantState& s, const DesiredTrajectory& d);

/// PD acceleration command. Position rows: -Kp e - Kd ede. Orientation rows
/// carry e_rot = log(R_d R^T) (desired minus actual), so the stiffness term
/// enters as +Kp e_rot to keep the feedback negative.
Vec6 pd_law(const ErrorState& eta, const GainMatrices& g);

/// b_d = M_bar u + G_bar.
Vec6 desired_dynamics(const Vec6& u_total, const NominalModel& nm);

struct TickDiagnostics {
  Vec12 eta = Vec12::Zero();
  Vec6 u1 = Vec6::Zero();
  Vec6 u_cmd = Vec6::Zero();      // u1 (+ u2 in adaptive mode)
  Vec6 b_d = Vec6::Zero();
  Vec6 achieved = Vec6::Zero();   // A F*
  Vec6 u_star = Vec6::Zero();     // M_bar^-1 (A F* - G_bar)
  Vec6 delta = Vec6::Zero();      // u* - u_cmd, the QP clamping residual
};

/// Per-tick orchestration of the force controller. Owns the QP warm start;
/// one instance per simulation.
class BalanceController {
 public:
  BalanceController(const GainMatrices& gains, const NominalModel& nominal,
                    const QPWeights& weights, const FrictionParams& friction)
      : gains_(gains), nominal_(nominal), weights_(weights), friction_(friction) {}

  /// Baseline tick (u2 = 0) using the stance set in s.contact.
  ForceSolution tick(const PlantState& s, const DesiredTrajectory& d, TickDiagnostics* diag) {
    return tick(s, d, Vec6::Zero(), diag);
  }

  /// Adaptive-augmented tick: b_d = M_bar (u1 + u2) + G_bar.
  ForceSolution tick(const PlantState& s, const DesiredTrajectory& d, const Vec6& u2,
                     TickDiagnostics* diag);

  const GainMatrices& gains() const { return gains_; }
  const NominalModel& nominal() const { return nominal_; }
  const QPWeights& weights() const { return weights_; }
  const FrictionParams& friction() const { return friction_; }
  const Vec12& previous_force() const { return F_prev_; }
  void reset();

 private:
  GainMatrices gains_;
  NominalModel nominal_;
  QPWeights weights_;
  FrictionParams friction_;
  BalanceQpSolver solver_;
  Vec12 F_prev_ = Vec12::Zero();
};

/// Piecewise command sample the trajectory integrator consumes.
struct CommandSample {
  Vec3 v_cmd = Vec3::Zero();  // m/s, heading frame
  double yaw_rate = 0.0;      // rad/s
  double height = 0.3;        // m
};

/// Integrates velocity commands into a desired pose: xy advances along the
/// commanded heading, z tracks the height command, desired roll/pitch stay 0.
class TrajectoryGenerator {
 public:
  explicit TrajectoryGenerator(const Vec3& p0 = Vec3(0, 0, 0.3)) {
    des_.p_c_d = p0;
  }
  const DesiredTrajectory& current() const { return des_; }
  const DesiredTrajectory& step(const CommandSample& cmd, double dt);

 private:
  DesiredTrajectory des_;
  double yaw_ = 0.0;
};

}  // namespace afc

#endif  // AFC_BALANCE_CONTROLLER_HPP
