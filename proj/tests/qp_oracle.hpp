// Test-only projected-gradient oracle for the force QP. Independent of the
// active-set implementation: gradients and exact per-leg projections only.
#ifndef AFC_TESTS_QP_ORACLE_HPP
#define AFC_TESTS_QP_ORACLE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "afc/force_qp.hpp"

namespace afc::oracle {

// Euclidean projection onto {|x| <= mu z, |y| <= mu z, zmin <= z <= zmax}.
// For fixed z the x/y parts clamp independently; the remaining 1-D problem in
// z is piecewise quadratic and convex, so checking breakpoints and per-piece
// stationary points is exact.
inline Vec3 project_leg(const Vec3& f, double mu, double zmin, double zmax) {
  const double x0 = f.x(), y0 = f.y(), z0 = f.z();
  auto cost = [&](double z) {
    const double px = std::max(0.0, std::abs(x0) - mu * z);
    const double py = std::max(0.0, std::abs(y0) - mu * z);
    return px * px + py * py + (z - z0) * (z - z0);
  };
  std::vector<double> cand{zmin, zmax};
  const double bx = std::abs(x0) / mu;
  const double by = std::abs(y0) / mu;
  for (double b : {bx, by}) {
    if (b > zmin && b < zmax) cand.push_back(b);
  }
  // stationary point of each smooth piece: d/dz [sum_active (|c|-mu z)^2 + (z-z0)^2] = 0
  const double breaks[2] = {std::min(bx, by), std::max(bx, by)};
  const double lo[3] = {zmin, std::clamp(breaks[0], zmin, zmax), std::clamp(breaks[1], zmin, zmax)};
  const double hi[3] = {lo[1], lo[2], zmax};
  for (int piece = 0; piece < 3; ++piece) {
    if (lo[piece] >= hi[piece]) continue;
    const double zm = 0.5 * (lo[piece] + hi[piece]);
    double a = 1.0, b = -z0;  // (z-z0)^2 -> derivative a z + b with a=1,b=-z0
    if (std::abs(x0) - mu * zm > 0.0) {
      a += mu * mu;
      b -= mu * std::abs(x0);
    }
    if (std::abs(y0) - mu * zm > 0.0) {
      a += mu * mu;
      b -= mu * std::abs(y0);
    }
    const double zs = -b / a;
    if (zs > lo[piece] && zs < hi[piece]) cand.push_back(zs);
  }
  double best_z = zmin;
  double best = cost(zmin);
  for (double z : cand) {
    const double c = cost(z);
    if (c < best - 1e-18 || (c <= best && z < best_z)) {
      best = c;
      best_z = z;
    }
  }
  Vec3 out;
  out.z() = best_z;
  out.x() = std::clamp(x0, -mu * best_z, mu * best_z);
  out.y() = std::clamp(y0, -mu * best_z, mu * best_z);
  return out;
}

struct OracleResult {
  Vec12 F = Vec12::Zero();
  double objective = 0.0;
  long iterations = 0;
};

// Accelerated projected gradient (Nesterov momentum with restarts) followed by
// plain projected-gradient polish. S, gammas and constraints mirror the QP
// definition; the solver under test is never consulted.
inline OracleResult solve(const WrenchMatrix& wm, const Vec6& b_d, const QPWeights& w,
                          const Vec12& F_prev, const std::array<bool, 4>& stance,
                          const FrictionParams& fp, long max_iters = 400000) {
  const Mat6 S = w.s_diag.asDiagonal();
  Eigen::Matrix<double, 12, 12> H =
      2.0 * (wm.A.transpose() * S * wm.A) +
      2.0 * (w.gamma1 + w.gamma2) * Eigen::Matrix<double, 12, 12>::Identity();
  const Vec12 g = -2.0 * (wm.A.transpose() * (S * b_d)) - 2.0 * w.gamma2 * F_prev;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 12, 12>> es(H);
  const double L = es.eigenvalues().maxCoeff();
  const double mu_sc = std::max(es.eigenvalues().minCoeff(), 0.0);
  const double step = 1.0 / L;
  const double kappa = mu_sc > 0.0 ? L / mu_sc : 0.0;
  const double beta = kappa > 0.0 ? (std::sqrt(kappa) - 1.0) / (std::sqrt(kappa) + 1.0) : 0.9;

  auto project = [&](Vec12 v) {
    for (int leg = 0; leg < 4; ++leg) {
      if (stance[leg]) {
        v.segment<3>(3 * leg) =
            project_leg(v.segment<3>(3 * leg), fp.mu, fp.fz_min, fp.fz_max);
      } else {
        v.segment<3>(3 * leg).setZero();
      }
    }
    return v;
  };
  auto objective = [&](const Vec12& F) {
    const Vec6 res = wm.A * F - b_d;
    return res.dot(S * res) + w.gamma1 * F.squaredNorm() +
           w.gamma2 * (F - F_prev).squaredNorm();
  };

  Vec12 x = project(Vec12::Zero());
  Vec12 y = x;
  double f_prev_val = objective(x);
  OracleResult out;
  long it = 0;
  for (; it < max_iters; ++it) {
    const Vec12 grad = H * y + g;
    const Vec12 x_next = project(y - step * grad);
    const double f_next = objective(x_next);
    if (f_next > f_prev_val) {
      y = x;  // restart momentum
    } else {
      y = x_next + beta * (x_next - x);
    }
    const double move = (x_next - x).norm();
    x = x_next;
    f_prev_val = std::min(f_prev_val, f_next);
    if (move <= 1e-13 * (1.0 + x.norm())) break;
  }
  for (int k = 0; k < 200; ++k) {
    x = project(x - step * (H * x + g));
  }
  out.F = x;
  out.objective = objective(x);
  out.iterations = it;
  return out;
}

// KKT residuals computed from scratch (least-squares multipliers on the
// active rows), for cross-checking solver output.
struct KktResiduals {
  double stationarity = 0.0;
  double feasibility = 0.0;
  double complementarity = 0.0;
  double min_multiplier = 0.0;
};

inline KktResiduals kkt_check(const WrenchMatrix& wm, const Vec6& b_d, const QPWeights& w,
                              const Vec12& F_prev, const std::array<bool, 4>& stance,
                              const FrictionParams& fp, const Vec12& F,
                              double active_tol = 1e-7) {
  KktResiduals r;
  std::vector<int> vars;
  for (int leg = 0; leg < 4; ++leg) {
    if (stance[leg]) {
      for (int c = 0; c < 3; ++c) vars.push_back(3 * leg + c);
    } else {
      for (int c = 0; c < 3; ++c) {
        r.feasibility = std::max(r.feasibility, std::abs(F(3 * leg + c)));
      }
    }
  }
  const int n = static_cast<int>(vars.size());
  if (n == 0) return r;
  const Mat6 S = w.s_diag.asDiagonal();
  MatX At(6, n);
  for (int j = 0; j < n; ++j) At.col(j) = wm.A.col(vars[j]);
  VecX x(n), xp(n);
  for (int j = 0; j < n; ++j) {
    x(j) = F(vars[j]);
    xp(j) = F_prev(vars[j]);
  }
  const MatX H = 2.0 * (At.transpose() * S * At) +
                 2.0 * (w.gamma1 + w.gamma2) * MatX::Identity(n, n);
  const VecX g = -2.0 * (At.transpose() * (S * b_d)) - 2.0 * w.gamma2 * xp;

  std::vector<VecX> rows;
  std::vector<double> rhs;
  for (int leg = 0, blk = 0; leg < 4; ++leg) {
    if (!stance[leg]) continue;
    const int jx = blk * 3, jy = blk * 3 + 1, jz = blk * 3 + 2;
    ++blk;
    auto push = [&](double cx, double cy, double cz, double b) {
      VecX a = VecX::Zero(n);
      a(jx) = cx;
      a(jy) = cy;
      a(jz) = cz;
      rows.push_back(a);
      rhs.push_back(b);
    };
    push(1, 0, -fp.mu, 0.0);
    push(-1, 0, -fp.mu, 0.0);
    push(0, 1, -fp.mu, 0.0);
    push(0, -1, -fp.mu, 0.0);
    push(0, 0, 1.0, fp.fz_max);
    push(0, 0, -1.0, -fp.fz_min);
  }
  std::vector<int> active;
  for (size_t i = 0; i < rows.size(); ++i) {
    const double v = rows[i].dot(x) - rhs[i];
    r.feasibility = std::max(r.feasibility, v);
    if (std::abs(v) <= active_tol) active.push_back(static_cast<int>(i));
  }
  VecX resid = H * x + g;
  if (!active.empty()) {
    MatX Ca(n, static_cast<int>(active.size()));
    for (size_t i = 0; i < active.size(); ++i) Ca.col(static_cast<int>(i)) = rows[active[i]];
    const VecX lam = Ca.completeOrthogonalDecomposition().solve(-(H * x + g));
    resid += Ca * lam;
    r.min_multiplier = active.empty() ? 0.0 : lam.minCoeff();
    for (size_t i = 0; i < active.size(); ++i) {
      r.complementarity = std::max(
          r.complementarity, std::abs(lam(static_cast<int>(i)) *
                                      (rows[active[i]].dot(x) - rhs[active[i]])));
    }
  }
  r.stationarity = resid.lpNorm<Eigen::Infinity>();
  return r;
}

}  // namespace afc::oracle

#endif  // AFC_TESTS_QP_ORACLE_HPP
