#include "afc/l1_adaptation.hpp"

#include <algorithm>
#include <cmath>

namespace afc {

Vec6 theta_hat(const AdaptiveState& a, double eta_norm) {
  return a.alpha_hat * eta_norm + a.beta_hat;
}

std::pair<Vec6, Vec6> projection_functions(const Vec12& eta_tilde, double eta_norm,
                                           const Mat12& P) {
  const Vec12 weighted = P * eta_tilde;
  const Vec6 y_beta = -weighted.tail<6>();
  return {y_beta * eta_norm, y_beta};
}

double proj_operator(double theta, double y, double bound, double eps_p) {
  const double f = ((1.0 + eps_p) * theta * theta - bound * bound) / (eps_p * bound * bound);
  if (f <= 0.0 || theta * y <= 0.0) {
    return y;
  }
  return y * (1.0 - f);
}

void adaptation_step(AdaptiveState& a, const Vec6& y_alpha, const Vec6& y_beta,
                     const AdaptConfig& cfg, double dt) {
  for (int i = 0; i < 6; ++i) {
    // the clamp keeps the containment invariant exact under forward Euler,
    // whose single step can overshoot the smooth projection boundary
    const double cap = cfg.theta_bound(i) * std::sqrt(1.0 + cfg.eps_p);
    a.alpha_hat(i) += dt * cfg.gamma(i) *
                      proj_operator(a.alpha_hat(i), y_alpha(i), cfg.theta_bound(i), cfg.eps_p);
    a.alpha_hat(i) = std::clamp(a.alpha_hat(i), -cap, cap);
    a.beta_hat(i) += dt * cfg.gamma(i) *
                     proj_operator(a.beta_hat(i), y_beta(i), cfg.theta_bound(i), cfg.eps_p);
    a.beta_hat(i) = std::clamp(a.beta_hat(i), -cap, cap);
  }
}

Vec6 lowpass_step(std::array<FilterState, 6>& filter, const Vec6& input,
                  const AdaptConfig& cfg, double dt) {
  // 8 midpoint substeps keep the gain error at omega_n within the ZOH floor
  constexpr int kSubsteps = 8;
  const double h = dt / kSubsteps;
  const double wn2 = cfg.omega_n * cfg.omega_n;
  const double damp = 2.0 * cfg.zeta * cfg.omega_n;
  Vec6 out;
  for (int i = 0; i < 6; ++i) {
    double x1 = filter[i].x1;
    double x2 = filter[i].x2;
    const double u = input(i);
    for (int k = 0; k < kSubsteps; ++k) {
      const double k1_x1 = x2;
      const double k1_x2 = -wn2 * x1 - damp * x2 + wn2 * u;
      const double mid_x1 = x1 + 0.5 * h * k1_x1;
      const double mid_x2 = x2 + 0.5 * h * k1_x2;
      x1 += h * mid_x2;
      x2 += h * (-wn2 * mid_x1 - damp * mid_x2 + wn2 * u);
    }
    filter[i].x1 = x1;
    filter[i].x2 = x2;
    out(i) = x1;
  }
  return out;
}

Vec6 u2_from_theta(const Vec6& filtered_theta) {
  return -filtered_theta;
}

Vec6 L1Controller::begin_tick(const Vec12& eta, double dt) {
  if (cfg_.effectively_disabled()) {
    state_.u2.setZero();
    theta_cached_.setZero();
    eta_norm_cached_ = eta.norm();
    return state_.u2;
  }
  eta_norm_cached_ = eta.norm();
  theta_cached_ = theta_hat(state_, eta_norm_cached_);
  const Vec6 filtered = lowpass_step(state_.filter, theta_cached_, cfg_, dt);
  state_.u2 = u2_from_theta(filtered);
  return state_.u2;
}

ForceSolution L1Controller::predictor_tick(const Vec12& eta, const PlantState& s, double dt) {
  ForceSolution sol;
  if (cfg_.effectively_disabled()) {
    eta_tilde_.setZero();
    return sol;
  }
  // Eq-form predictor PD on eta_hat; intentionally the literal gain matrix,
  // matching the A_m the Lyapunov data is built from.
  Vec6 u1_hat;
  u1_hat = -gains_.kp.cwiseProduct(state_.eta_hat.head<6>()) -
           gains_.kd.cwiseProduct(state_.eta_hat.tail<6>());

  Vec6 u_tot;
  if (cfg_.predictor_uses_qp) {
    const Vec6 b_d_hat = nominal_.M() * (u1_hat + state_.u2 + theta_cached_) + nominal_.G();
    const WrenchMatrix wm = build_wrench_matrix(s.feet, s.p_c);
    const ConstraintSet cs = build_constraints(s.contact, friction_);
    sol = ref_solver_.solve(wm, b_d_hat, weights_, F_hat_prev_, cs);
    F_hat_prev_ = sol.F;
    u_tot = nominal_.M().ldlt().solve(achieved_wrench(wm, sol) - nominal_.G());
  } else {
    u_tot = u1_hat + state_.u2 + theta_cached_;
  }

  // eta_hat' = D eta_hat + H u_tot, forward Euler at the control rate
  const Vec6 head_rate = state_.eta_hat.tail<6>();
  state_.eta_hat.head<6>() += dt * head_rate;
  state_.eta_hat.tail<6>() += dt * u_tot;

  eta_tilde_ = state_.eta_hat - eta;
  const auto [y_alpha, y_beta] = projection_functions(eta_tilde_, eta_norm_cached_, P_);
  adaptation_step(state_, y_alpha, y_beta, cfg_, dt);
  return sol;
}

}  // namespace afc
