#include "afc/stability.hpp"

#include <cmath>

namespace afc {

Mat12 build_Am(const GainMatrices& g) {
  for (int i = 0; i < 6; ++i) {
    if (!(g.kp(i) > 0.0) || !(g.kd(i) > 0.0)) {
      throw NotHurwitzError("build_Am: channel " + std::to_string(i) +
                            " has non-positive gain");
    }
  }
  Mat12 am = Mat12::Zero();
  am.topRightCorner<6, 6>() = Mat6::Identity();
  am.bottomLeftCorner<6, 6>() = (-g.kp).asDiagonal();
  am.bottomRightCorner<6, 6>() = (-g.kd).asDiagonal();
  return am;
}

MatX solve_lyapunov(const MatX& A, const MatX& Q) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || Q.rows() != n || Q.cols() != n) {
    throw SingularSystemError("solve_lyapunov: dimension mismatch");
  }
  // vec(A'P + PA) = (I (x) A' + A' (x) I) vec(P)
  const Eigen::Index nn = n * n;
  MatX K = MatX::Zero(nn, nn);
  for (Eigen::Index i = 0; i < n; ++i) {
    K.block(i * n, i * n, n, n) += A.transpose();
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        K(j * n + k, i * n + k) += A(i, j);  // (A' (x) I)
      }
    }
  }
  VecX q(nn);
  for (Eigen::Index col = 0; col < n; ++col) q.segment(col * n, n) = -Q.col(col);
  Eigen::FullPivLU<MatX> lu(K);
  if (!lu.isInvertible()) {
    throw SingularSystemError("solve_lyapunov: A has eigenvalue pair summing to zero");
  }
  const VecX p = lu.solve(q);
  MatX P(n, n);
  for (Eigen::Index col = 0; col < n; ++col) P.col(col) = p.segment(col * n, n);
  return 0.5 * (P + P.transpose());
}

LyapunovData make_lyapunov_data(const GainMatrices& g, const Mat12& Q) {
  LyapunovData L;
  L.A_m = build_Am(g);
  L.Q = Q;
  L.P = solve_lyapunov(L.A_m, Q);
  L.residual = (L.A_m.transpose() * L.P + L.P * L.A_m + Q).norm();
  const auto [q_lo, q_hi] = symmetric_eig_extrema(Q);
  const auto [p_lo, p_hi] = symmetric_eig_extrema(L.P);
  L.lambda = q_lo / p_hi;
  L.lambda_min_P = p_lo;
  return L;
}

MonitorSample monitor_tick(const Vec12& eta, const Vec12& eta_prev, const Vec12& eta_tilde,
                           const LyapunovData& L, double dt, double t, double delta_u,
                           const EstimateError* est) {
  MonitorSample m;
  m.t = t;
  m.V = eta.dot(L.P * eta);
  const double v_prev = eta_prev.dot(L.P * eta_prev);
  m.Vdot_num = dt > 0.0 ? (m.V - v_prev) / dt : 0.0;
  m.bound_check = m.Vdot_num + L.lambda * m.V;
  m.V_tilde = eta_tilde.dot(L.P * eta_tilde);
  if (est) {
    for (int i = 0; i < 6; ++i) {
      if (est->gamma(i) > 0.0) {
        m.V_tilde += est->alpha_tilde(i) * est->alpha_tilde(i) / est->gamma(i);
        m.V_tilde += est->beta_tilde(i) * est->beta_tilde(i) / est->gamma(i);
      }
    }
  }
  m.delta_u = delta_u;
  return m;
}

BoundReport ultimate_bound_report(std::span<const MonitorSample> samples,
                                  std::span<const double> eta_tilde_norms,
                                  const LyapunovData& L, double final_window) {
  BoundReport r;
  r.lambda_min_P = L.lambda_min_P;
  if (samples.empty()) return r;
  const double t_end = samples.back().t;
  const double t_split = t_end - final_window;
  for (size_t i = 0; i < samples.size(); ++i) {
    r.max_V_tilde = std::max(r.max_V_tilde, samples[i].V_tilde);
    const double en = i < eta_tilde_norms.size() ? eta_tilde_norms[i] : 0.0;
    r.max_eta_tilde_norm = std::max(r.max_eta_tilde_norm, en);
    if (samples[i].t < t_split) {
      r.early_max_eta_tilde = std::max(r.early_max_eta_tilde, en);
    } else {
      r.late_max_eta_tilde = std::max(r.late_max_eta_tilde, en);
    }
  }
  const double ceiling = std::sqrt(std::max(r.max_V_tilde, 0.0) / L.lambda_min_P) + 1e-12;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double en = i < eta_tilde_norms.size() ? eta_tilde_norms[i] : 0.0;
    if (en > ceiling) {
      r.consistency_ok = false;
      break;
    }
  }
  return r;
}

}  // namespace afc
