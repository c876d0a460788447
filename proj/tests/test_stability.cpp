#include "afc/stability.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace afc;

namespace {

// analytic 2x2 solution of [0 1; -a -b]' P + P [0 1; -a -b] = -I
struct ChannelP {
  double p11, p12, p22;
};

ChannelP channel_lyapunov(double a, double b) {
  ChannelP c;
  c.p12 = 1.0 / (2.0 * a);
  c.p22 = (1.0 + a) / (2.0 * a * b);
  c.p11 = b / (2.0 * a) + (1.0 + a) / (2.0 * b);
  return c;
}

}  // namespace

TEST(BuildAm, BlockStructure) {
  GainMatrices g;
  const Mat12 am = build_Am(g);
  const Mat6 tl = am.topLeftCorner<6, 6>();
  const Mat6 tr = am.topRightCorner<6, 6>();
  const Mat6 bl = am.bottomLeftCorner<6, 6>();
  const Mat6 br = am.bottomRightCorner<6, 6>();
  EXPECT_EQ(tl, Mat6::Zero());
  EXPECT_EQ(tr, Mat6::Identity());
  EXPECT_EQ(bl, Mat6(Vec6(-g.kp).asDiagonal()));
  EXPECT_EQ(br, Mat6(Vec6(-g.kd).asDiagonal()));
}

TEST(BuildAm, UnitGainsHaveHalfDecayRate) {
  GainMatrices g;
  g.kp = Vec6::Ones();
  g.kd = Vec6::Ones();
  const Mat12 am = build_Am(g);
  const Eigen::EigenSolver<Mat12> es(am);
  for (int i = 0; i < 12; ++i) {
    EXPECT_NEAR(es.eigenvalues()(i).real(), -0.5, 1e-9);
  }
}

TEST(BuildAm, TableGainsAreHurwitz) {
  const Mat12 am = build_Am(GainMatrices{});
  const Eigen::EigenSolver<Mat12> es(am);
  for (int i = 0; i < 12; ++i) {
    EXPECT_LT(es.eigenvalues()(i).real(), 0.0);
  }
}

TEST(BuildAm, RejectsZeroStiffness) {
  GainMatrices g;
  g.kp(3) = 0.0;
  EXPECT_THROW(build_Am(g), NotHurwitzError);
}

TEST(SolveLyapunov, ScalarClosedForm) {
  MatX a(1, 1), q(1, 1);
  a(0, 0) = -1.0;
  q(0, 0) = 2.0;
  const MatX p = solve_lyapunov(a, q);
  EXPECT_NEAR(p(0, 0), 1.0, 1e-14);
}

TEST(SolveLyapunov, MatchesChannelClosedForm) {
  const GainMatrices g;
  const Mat12 am = build_Am(g);
  const MatX P = solve_lyapunov(am, Mat12::Identity());
  for (int ch = 0; ch < 6; ++ch) {
    const ChannelP c = channel_lyapunov(g.kp(ch), g.kd(ch));
    EXPECT_NEAR(P(ch, ch), c.p11, 1e-10);
    EXPECT_NEAR(P(ch, ch + 6), c.p12, 1e-10);
    EXPECT_NEAR(P(ch + 6, ch + 6), c.p22, 1e-10);
    // cross-channel coupling must vanish for diagonal gains
    for (int other = 0; other < 6; ++other) {
      if (other == ch) continue;
      EXPECT_NEAR(P(ch, other), 0.0, 1e-12);
    }
  }
}

TEST(SolveLyapunov, RejectsSingularPair) {
  MatX a = MatX::Zero(2, 2);
  a(0, 1) = 1.0;
  a(1, 0) = -1.0;  // eigenvalues +-i, pair sums to zero
  EXPECT_THROW(solve_lyapunov(a, MatX::Identity(2, 2)), SingularSystemError);
}

TEST(LyapunovData, TableGainsContract) {
  const LyapunovData L = make_lyapunov_data(GainMatrices{});
  EXPECT_LE(L.residual, 1e-8);
  EXPECT_GT(L.lambda_min_P, 0.0);
  EXPECT_GT(L.lambda, 0.0);
}

TEST(LyapunovData, LinearLoopSatisfiesDecayBound) {
  const LyapunovData L = make_lyapunov_data(GainMatrices{});
  // eta' = A_m eta integrated with RK4; V' evaluated analytically
  Vec12 eta;
  for (int i = 0; i < 12; ++i) eta(i) = 0.1 * ((i % 3) - 1) + 0.05;
  const double dt = 1e-4;
  const Mat12 lhs = L.A_m.transpose() * L.P + L.P * L.A_m + L.lambda * L.P;
  for (int k = 0; k < 50000; ++k) {
    const double vdot_plus_lv = eta.dot(lhs * eta);
    EXPECT_LE(vdot_plus_lv, 1e-9);
    const Vec12 k1 = L.A_m * eta;
    const Vec12 k2 = L.A_m * (eta + 0.5 * dt * k1);
    const Vec12 k3 = L.A_m * (eta + 0.5 * dt * k2);
    const Vec12 k4 = L.A_m * (eta + dt * k3);
    eta += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
}

TEST(MonitorTick, ZeroStateZeroSample) {
  const LyapunovData L = make_lyapunov_data(GainMatrices{});
  const auto m = monitor_tick(Vec12::Zero(), Vec12::Zero(), Vec12::Zero(), L, 1e-3, 0.5, 0.0);
  EXPECT_EQ(m.V, 0.0);
  EXPECT_EQ(m.bound_check, 0.0);
  EXPECT_EQ(m.V_tilde, 0.0);
}

TEST(MonitorTick, IdentityPGivesSquaredNorm) {
  LyapunovData L;
  L.P = Mat12::Identity();
  L.lambda = 0.3;
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Vec12 eta;
  for (int i = 0; i < 12; ++i) eta(i) = d(rng);
  const auto m = monitor_tick(eta, eta, Vec12::Zero(), L, 1e-3, 0.0, 0.0);
  EXPECT_NEAR(m.V, eta.squaredNorm(), 1e-12);
  EXPECT_NEAR(m.Vdot_num, 0.0, 1e-12);
}

TEST(MonitorTick, OptionalEstimateTermsAddGammaWeightedSquares) {
  LyapunovData L;
  L.P = Mat12::Identity();
  L.lambda = 0.1;
  EstimateError est;
  est.alpha_tilde = Vec6::Ones();
  est.beta_tilde = 2.0 * Vec6::Ones();
  est.gamma = Vec6::Constant(4.0);
  const auto m = monitor_tick(Vec12::Zero(), Vec12::Zero(), Vec12::Zero(), L, 1e-3, 0.0, 0.0,
                              &est);
  // 6 * 1/4 + 6 * 4/4
  EXPECT_NEAR(m.V_tilde, 1.5 + 6.0, 1e-12);
}

TEST(UltimateBoundReport, ConsistencyAndWindows) {
  LyapunovData L;
  L.P = Mat12::Identity();
  L.lambda_min_P = 1.0;
  std::vector<MonitorSample> samples;
  std::vector<double> norms;
  for (int k = 0; k < 100; ++k) {
    MonitorSample m;
    m.t = 0.1 * k;
    const double en = k < 45 ? 0.5 : 0.1;  // high values end before the final window
    m.V_tilde = en * en;  // P = I consistent
    samples.push_back(m);
    norms.push_back(en);
  }
  const auto r = ultimate_bound_report(samples, norms, L, 5.0);
  EXPECT_TRUE(r.consistency_ok);
  EXPECT_NEAR(r.max_eta_tilde_norm, 0.5, 1e-12);
  EXPECT_NEAR(r.late_max_eta_tilde, 0.1, 1e-12);
  EXPECT_NEAR(r.early_max_eta_tilde, 0.5, 1e-12);
}
