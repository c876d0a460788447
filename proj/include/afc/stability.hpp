#ifndef AFC_STABILITY_HPP
#define AFC_STABILITY_HPP

#include <optional>
#include <span>

#include "afc/balance_controller.hpp"
#include "afc/so3.hpp"

namespace afc {

/// Lyapunov machinery for one gain set: A_m = [[0, I], [-Kp, -Kd]], P solving
/// A_m' P + P A_m = -Q, lambda = lambda_min(Q) / lambda_max(P). Computed once
/// per configuration, immutable afterwards.
struct LyapunovData {
  Mat12 A_m = Mat12::Zero();
  Mat12 Q = Mat12::Identity();
  Mat12 P = Mat12::Zero();
  double lambda = 0.0;
  double lambda_min_P = 0.0;
  double residual = 0.0;  // Frobenius norm of A_m' P + P A_m + Q
};

/// Throws NotHurwitzError when any channel gain is non-positive (the
/// per-channel characteristic s^2 + kd s + kp must have negative real roots).
Mat12 build_Am(const GainMatrices& g);

/// Kronecker-form dense solve of A' P + P A = -Q, symmetrized afterwards.
/// Throws SingularSystemError when the vectorized system is singular.
MatX solve_lyapunov(const MatX& A, const MatX& Q);

LyapunovData make_lyapunov_data(const GainMatrices& g, const Mat12& Q = Mat12::Identity());

struct MonitorSample {
  double t = 0.0;
  double V = 0.0;
  double Vdot_num = 0.0;     // backward finite difference
  double bound_check = 0.0;  // Vdot_num + lambda V
  double V_tilde = 0.0;      // eta_tilde' P eta_tilde (+ estimate terms if provided)
  double delta_u = 0.0;      // |u* - u|
};

/// Optional estimate-error terms for the full Lyapunov candidate; only
/// meaningful in tests where the true alpha/beta are known.
struct EstimateError {
  Vec6 alpha_tilde = Vec6::Zero();
  Vec6 beta_tilde = Vec6::Zero();
  Vec6 gamma = Vec6::Zero();  // adaptation gains; zero entries are skipped
};

MonitorSample monitor_tick(const Vec12& eta, const Vec12& eta_prev, const Vec12& eta_tilde,
                           const LyapunovData& L, double dt, double t, double delta_u,
                           const EstimateError* est = nullptr);

struct BoundReport {
  double max_V_tilde = 0.0;
  double max_eta_tilde_norm = 0.0;
  double lambda_min_P = 0.0;
  bool consistency_ok = true;   // |eta_tilde| <= sqrt(max V_tilde / lambda_min(P)) on every sample
  double early_max_eta_tilde = 0.0;  // max |eta_tilde| before the final window
  double late_max_eta_tilde = 0.0;   // max |eta_tilde| over the final window
};

/// Run-level summary of the predictor-error boundedness checks. eta_tilde
/// norms are per control tick, aligned with samples; final_window is seconds.
BoundReport ultimate_bound_report(std::span<const MonitorSample> samples,
                                  std::span<const double> eta_tilde_norms,
                                  const LyapunovData& L, double final_window = 5.0);

}  // namespace afc

#endif  // AFC_STABILITY_HPP
