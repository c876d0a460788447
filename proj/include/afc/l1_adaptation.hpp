#ifndef AFC_L1_ADAPTATION_HPP
#define AFC_L1_ADAPTATION_HPP

#include <array>
#include <utility>

#include "afc/balance_controller.hpp"
#include "afc/force_qp.hpp"
#include "afc/so3.hpp"

namespace afc {

struct FilterState {
  double x1 = 0.0;
  double x2 = 0.0;
};

struct AdaptiveState {
  Vec12 eta_hat = Vec12::Zero();
  Vec6 alpha_hat = Vec6::Zero();
  Vec6 beta_hat = Vec6::Zero();
  std::array<FilterState, 6> filter{};
  Vec6 u2 = Vec6::Zero();  // last filter output, negated
};

struct AdaptConfig {
  Vec6 gamma = (Vec6() << 1000, 1000, 5000, 2000, 5000, 1000).finished();
  double zeta = 0.7;
  double omega_n = 400.0;  // rad/s
  Vec6 theta_bound = (Vec6() << 10, 10, 20, 20, 20, 10).finished();
  double eps_p = 0.1;
  bool enabled = true;
  bool predictor_uses_qp = true;

  bool effectively_disabled() const {
    return !enabled || gamma.lpNorm<Eigen::Infinity>() == 0.0;
  }
};

/// theta_hat = alpha_hat * |eta| + beta_hat.
Vec6 theta_hat(const AdaptiveState& a, double eta_norm);

/// y_alpha = -H' P eta_tilde |eta|, y_beta = -H' P eta_tilde, H = [0_6; I_6].
std::pair<Vec6, Vec6> projection_functions(const Vec12& eta_tilde, double eta_norm,
                                           const Mat12& P);

/// Smooth scalar projection. f(t) = ((1+eps) t^2 - bound^2) / (eps bound^2);
/// passes y through while f <= 0 or the update points inward, otherwise
/// attenuates by (1 - f). Keeps integrated trajectories inside
/// |theta| <= bound sqrt(1+eps).
double proj_operator(double theta, double y, double bound, double eps_p);

/// Forward-Euler update of both estimate vectors at the control rate.
void adaptation_step(AdaptiveState& a, const Vec6& y_alpha, const Vec6& y_beta,
                     const AdaptConfig& cfg, double dt);

/// Unit-DC second-order low-pass, per channel
///   x1' = x2, x2' = -wn^2 x1 - 2 zeta wn x2 + wn^2 u, y = x1,
/// integrated with RK2 midpoint substeps (8 per control tick). Returns y.
Vec6 lowpass_step(std::array<FilterState, 6>& filter, const Vec6& input,
                  const AdaptConfig& cfg, double dt);

/// u2 = -(filtered theta stream); the caller owns the filter state.
Vec6 u2_from_theta(const Vec6& filtered_theta);

/// State predictor + adaptation. Owns the reference QP warm start and the
/// adaptive state; driven once per control tick between begin_tick (which
/// produces u2 for the force controller) and predictor_tick.
class L1Controller {
 public:
  L1Controller(const AdaptConfig& cfg, const GainMatrices& gains, const NominalModel& nominal,
               const QPWeights& weights, const FrictionParams& friction, const Mat12& P)
      : cfg_(cfg), gains_(gains), nominal_(nominal), weights_(weights), friction_(friction),
        P_(P) {}

  void init(const Vec12& eta0) {
    state_ = AdaptiveState{};
    state_.eta_hat = eta0;
    ref_solver_.reset();
    F_hat_prev_.setZero();
  }

  /// theta_hat -> low-pass filter -> u2. Call before the force controller tick.
  Vec6 begin_tick(const Vec12& eta, double dt);

  /// Predictor integration and projection adaptation; returns the reference
  /// QP solution. eta must be the same error the tick began with.
  ForceSolution predictor_tick(const Vec12& eta, const PlantState& s, double dt);

  const AdaptiveState& state() const { return state_; }
  const Vec12& eta_tilde() const { return eta_tilde_; }
  const AdaptConfig& config() const { return cfg_; }

 private:
  AdaptConfig cfg_;
  GainMatrices gains_;
  NominalModel nominal_;
  QPWeights weights_;
  FrictionParams friction_;
  Mat12 P_;
  AdaptiveState state_;
  BalanceQpSolver ref_solver_;
  Vec12 F_hat_prev_ = Vec12::Zero();
  Vec6 theta_cached_ = Vec6::Zero();
  double eta_norm_cached_ = 0.0;
  Vec12 eta_tilde_ = Vec12::Zero();
};

}  // namespace afc

#endif  // AFC_L1_ADAPTATION_HPP
