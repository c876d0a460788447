#include "afc/force_qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace afc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct OneSided {
  VecX a;    // reduced row, a' x <= b
  double b;
  int id;    // 2*row_id + side
};

}  // namespace

WrenchMatrix build_wrench_matrix(const std::array<Vec3, 4>& feet, const Vec3& p_c) {
  WrenchMatrix wm;
  for (int i = 0; i < 4; ++i) {
    wm.A.block<3, 3>(0, 3 * i) = Mat3::Identity();
    wm.A.block<3, 3>(3, 3 * i) = skew(feet[i] - p_c);
  }
  return wm;
}

ConstraintSet build_constraints(const std::array<bool, 4>& contacts, const FrictionParams& fp) {
  if (!(fp.mu > 0.0) || fp.fz_min < 0.0 || !(fp.fz_min < fp.fz_max)) {
    throw InfeasibleError("build_constraints: invalid friction parameters");
  }
  ConstraintSet cs;
  cs.stance = contacts;
  int n_rows = 0;
  for (int leg = 0; leg < 4; ++leg) n_rows += contacts[leg] ? 5 : 0;
  cs.C = MatX::Zero(n_rows, 12);
  cs.d_lo = VecX::Zero(n_rows);
  cs.d_hi = VecX::Zero(n_rows);
  int r = 0;
  for (int leg = 0; leg < 4; ++leg) {
    if (!contacts[leg]) {
      for (int c = 0; c < 3; ++c) cs.zero_vars.push_back(3 * leg + c);
      continue;
    }
    const int x = 3 * leg, y = 3 * leg + 1, z = 3 * leg + 2;
    // Fx - mu Fz in (-inf, 0]
    cs.C(r, x) = 1.0; cs.C(r, z) = -fp.mu;
    cs.d_lo(r) = -kInf; cs.d_hi(r) = 0.0;
    cs.row_ids.push_back(5 * leg + 0); ++r;
    // Fx + mu Fz in [0, inf)
    cs.C(r, x) = 1.0; cs.C(r, z) = fp.mu;
    cs.d_lo(r) = 0.0; cs.d_hi(r) = kInf;
    cs.row_ids.push_back(5 * leg + 1); ++r;
    // Fy - mu Fz in (-inf, 0]
    cs.C(r, y) = 1.0; cs.C(r, z) = -fp.mu;
    cs.d_lo(r) = -kInf; cs.d_hi(r) = 0.0;
    cs.row_ids.push_back(5 * leg + 2); ++r;
    // Fy + mu Fz in [0, inf)
    cs.C(r, y) = 1.0; cs.C(r, z) = fp.mu;
    cs.d_lo(r) = 0.0; cs.d_hi(r) = kInf;
    cs.row_ids.push_back(5 * leg + 3); ++r;
    // Fz in [fz_min, fz_max]
    cs.C(r, z) = 1.0;
    cs.d_lo(r) = fp.fz_min; cs.d_hi(r) = fp.fz_max;
    cs.row_ids.push_back(5 * leg + 4); ++r;
  }
  return cs;
}

Vec6 achieved_wrench(const WrenchMatrix& wm, const ForceSolution& sol) {
  return wm.A * sol.F;
}

ForceSolution BalanceQpSolver::solve(const WrenchMatrix& wm, const Vec6& b_d,
                                     const QPWeights& w, const Vec12& F_prev,
                                     const ConstraintSet& cs) {
  // stance variable map
  std::vector<int> vars;
  for (int leg = 0; leg < 4; ++leg) {
    if (cs.stance[leg]) {
      vars.push_back(3 * leg);
      vars.push_back(3 * leg + 1);
      vars.push_back(3 * leg + 2);
    }
  }
  const int n = static_cast<int>(vars.size());
  const Mat6 S = w.s_diag.asDiagonal();

  auto full_objective = [&](const Vec12& F) {
    const Vec6 res = wm.A * F - b_d;
    return res.dot(S * res) + w.gamma1 * F.squaredNorm() +
           w.gamma2 * (F - F_prev).squaredNorm();
  };

  ForceSolution sol;
  if (n == 0) {
    sol.objective = full_objective(sol.F);
    warm_active_.clear();
    return sol;
  }

  MatX At(6, n);  // stance columns of A
  for (int j = 0; j < n; ++j) At.col(j) = wm.A.col(vars[j]);
  const MatX H = 2.0 * (At.transpose() * S * At) +
                 2.0 * (w.gamma1 + w.gamma2) * MatX::Identity(n, n);
  VecX x_prev(n);
  for (int j = 0; j < n; ++j) x_prev(j) = F_prev(vars[j]);
  const VecX g = -2.0 * (At.transpose() * (S * b_d)) - 2.0 * w.gamma2 * x_prev;

  // one-sided rows a' x <= b over the reduced variables
  std::vector<OneSided> rows;
  for (int r = 0; r < cs.C.rows(); ++r) {
    VecX a(n);
    for (int j = 0; j < n; ++j) a(j) = cs.C(r, vars[j]);
    if (std::isfinite(cs.d_hi(r))) rows.push_back({a, cs.d_hi(r), 2 * cs.row_ids[r] + 0});
    if (std::isfinite(cs.d_lo(r))) rows.push_back({-a, -cs.d_lo(r), 2 * cs.row_ids[r] + 1});
  }

  // feasible start: previous solution clamped into the per-leg pyramid/box
  VecX x = x_prev;
  {
    const FrictionParams fp = [&] {
      // recover bounds from the z rows (local row 4); mu from row 0
      FrictionParams f;
      for (int r = 0; r < cs.C.rows(); ++r) {
        const int local = cs.row_ids[r] % 5;
        const int leg = cs.row_ids[r] / 5;
        if (local == 0) f.mu = -cs.C(r, 3 * leg + 2);
        if (local == 4) { f.fz_min = cs.d_lo(r); f.fz_max = cs.d_hi(r); }
      }
      return f;
    }();
    for (int j = 0; j + 2 < n; j += 3) {
      double& fx = x(j);
      double& fy = x(j + 1);
      double& fz = x(j + 2);
      fz = std::clamp(fz, fp.fz_min, fp.fz_max);
      fx = std::clamp(fx, -fp.mu * fz, fp.mu * fz);
      fy = std::clamp(fy, -fp.mu * fz, fp.mu * fz);
    }
  }

  // warm start: previous active set, kept only where still active at x
  std::vector<int> work;
  for (int id : warm_active_) {
    for (size_t k = 0; k < rows.size(); ++k) {
      if (rows[k].id != id) continue;
      if (std::abs(rows[k].a.dot(x) - rows[k].b) <= 1e-9 &&
          static_cast<int>(work.size()) < n) {
        work.push_back(static_cast<int>(k));
      }
    }
  }

  const int max_iter = 400;
  VecX lambda;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const int m = static_cast<int>(work.size());
    VecX grad = H * x + g;
    VecX p = VecX::Zero(n);
    lambda = VecX::Zero(m);
    if (m == 0) {
      // Hp = -grad; minimum-norm solve tolerates the gamma = 0 singular case
      p = H.completeOrthogonalDecomposition().solve(-grad);
    } else {
      MatX Cw(m, n);
      for (int i = 0; i < m; ++i) Cw.row(i) = rows[work[i]].a.transpose();
      // null-space step: p = Z y with Cw Z = 0
      Eigen::ColPivHouseholderQR<MatX> qr(Cw.transpose());
      const int rank = static_cast<int>(qr.rank());
      if (rank < n) {
        MatX Qfull = qr.householderQ();
        MatX Z = Qfull.rightCols(n - rank);
        MatX Hz = Z.transpose() * H * Z;
        VecX rz = -Z.transpose() * grad;
        VecX y = Hz.completeOrthogonalDecomposition().solve(rz);
        p = Z * y;
      }
      lambda = Cw.transpose()
                   .completeOrthogonalDecomposition()
                   .solve(-(H * (x + p) + g));
    }

    if (p.lpNorm<Eigen::Infinity>() <= 1e-10 * (1.0 + x.lpNorm<Eigen::Infinity>())) {
      int worst = -1;
      double worst_val = -1e-9;
      for (int i = 0; i < m; ++i) {
        if (lambda(i) < worst_val) {
          worst_val = lambda(i);
          worst = i;
        }
      }
      if (worst < 0) break;  // optimal
      work.erase(work.begin() + worst);
      continue;
    }

    // ratio test against rows not in the working set
    double alpha = 1.0;
    int blocker = -1;
    for (size_t k = 0; k < rows.size(); ++k) {
      if (std::find(work.begin(), work.end(), static_cast<int>(k)) != work.end()) continue;
      const double d = rows[k].a.dot(p);
      if (d <= 1e-12) continue;
      const double slack = rows[k].b - rows[k].a.dot(x);
      const double ratio = std::max(slack, 0.0) / d;
      if (ratio < alpha - 1e-15) {
        alpha = ratio;
        blocker = static_cast<int>(k);
      }
    }
    x += alpha * p;
    if (blocker >= 0 && static_cast<int>(work.size()) < n) {
      work.push_back(blocker);
    } else if (blocker >= 0) {
      // working set full; drop the smallest-multiplier row first
      work.erase(work.begin());
      work.push_back(blocker);
    }
  }
  if (iter >= max_iter) {
    throw MaxIterationsError("BalanceQpSolver: active-set iteration limit");
  }

  for (int j = 0; j < n; ++j) sol.F(vars[j]) = x(j);
  sol.iterations = iter + 1;
  sol.objective = full_objective(sol.F);

  // KKT residuals over the reduced problem
  VecX stat = H * x + g;
  double compl_max = 0.0;
  double feas_max = 0.0;
  for (size_t i = 0; i < work.size(); ++i) {
    stat += lambda(static_cast<int>(i)) * rows[work[i]].a;
    compl_max = std::max(compl_max, std::abs(lambda(static_cast<int>(i)) *
                                             (rows[work[i]].a.dot(x) - rows[work[i]].b)));
  }
  for (const auto& row : rows) {
    feas_max = std::max(feas_max, row.a.dot(x) - row.b);
  }
  sol.kkt_stationarity = stat.lpNorm<Eigen::Infinity>();
  sol.kkt_feasibility = std::max(feas_max, 0.0);
  sol.kkt_complementarity = compl_max;

  sol.active_set.clear();
  for (int i : work) sol.active_set.push_back(rows[i].id);
  std::sort(sol.active_set.begin(), sol.active_set.end());
  warm_active_ = sol.active_set;
  return sol;
}

}  // namespace afc
