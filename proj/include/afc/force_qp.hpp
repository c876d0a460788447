#ifndef AFC_FORCE_QP_HPP
#define AFC_FORCE_QP_HPP

#include <array>
#include <vector>

#include "afc/so3.hpp"

namespace afc {

/// Stacked contact-wrench map: block i = [I3; skew(p_i - p_c)]. Swing-leg
/// columns stay populated; constraints zero their forces.
struct WrenchMatrix {
  Eigen::Matrix<double, 6, 12> A;
};

struct QPWeights {
  Vec6 s_diag = (Vec6() << 5, 5, 10, 50, 25, 20).finished();
  double gamma1 = 0.01;   // force magnitude penalty
  double gamma2 = 0.001;  // rate penalty vs previous solution
};

struct FrictionParams {
  double mu = 0.5;
  double fz_min = 0.0;   // N
  double fz_max = 200.0; // N
};

/// Two-sided rows d_lo <= C F <= d_hi over the stacked 12-vector, plus
/// per-component equalities F_i = 0 for swing legs. Per stance leg the five
/// rows are, in order: Fx-mu Fz <= 0, Fx+mu Fz >= 0, Fy-mu Fz <= 0,
/// Fy+mu Fz >= 0, fz_min <= Fz <= fz_max. row_ids[r] = 5*leg + local row, a
/// stable id across stance-set changes (used for warm starting).
struct ConstraintSet {
  MatX C;        // n_rows x 12
  VecX d_lo;
  VecX d_hi;
  std::vector<int> row_ids;
  std::vector<int> zero_vars;  // indices into F forced to zero (swing legs)
  std::array<bool, 4> stance{};
};

struct ForceSolution {
  Vec12 F = Vec12::Zero();
  double objective = 0.0;
  int iterations = 0;
  std::vector<int> active_set;  // one-sided ids: 2*row_id + side (0 hi, 1 lo)
  double kkt_stationarity = 0.0;
  double kkt_feasibility = 0.0;
  double kkt_complementarity = 0.0;
};

WrenchMatrix build_wrench_matrix(const std::array<Vec3, 4>& feet, const Vec3& p_c);

ConstraintSet build_constraints(const std::array<bool, 4>& contacts, const FrictionParams& fp);

Vec6 achieved_wrench(const WrenchMatrix& wm, const ForceSolution& sol);

/// Dense primal active-set solver for the 12-variable force QP
///   min (AF - b_d)' S (AF - b_d) + g1 |F|^2 + g2 |F - F_prev|^2
/// with swing equalities eliminated up front. Holds the previous active set
/// for warm starting; one instance per controller, not thread-shared.
class BalanceQpSolver {
 public:
  ForceSolution solve(const WrenchMatrix& wm, const Vec6& b_d, const QPWeights& w,
                      const Vec12& F_prev, const ConstraintSet& cs);
  void reset() { warm_active_.clear(); }

 private:
  std::vector<int> warm_active_;
};

}  // namespace afc

#endif  // AFC_FORCE_QP_HPP
