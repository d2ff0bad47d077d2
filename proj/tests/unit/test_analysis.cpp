#include <gtest/gtest.h>

#include "slungload/analysis.hpp"
#include "slungload/error.hpp"
#include "slungload/scenario.hpp"
#include "support.hpp"

namespace slungload {
namespace {

using testing::Gen;

ErrorStateMatrices scalar_system(double a) {
  ErrorStateMatrices m;
  m.A_tilde = MatrixXd::Constant(1, 1, a);
  m.B_tilde = MatrixXd::Constant(1, 1, 1.0);
  m.block_size = 1;
  return m;
}

DisturbanceBounds unit_sum() { return {{1.0}, {0.0}, {0.0}}; }

CertificateSearchOptions small_grid() {
  CertificateSearchOptions o;
  o.epsilon_min = 1e-2;
  o.epsilon_max = 1e2;
  o.epsilon_points = 5;
  return o;
}

SimLog zero_error_log(int n, int rows, double dt) {
  SimLog log;
  log.vehicle_count = n;
  for (int k = 0; k < rows; ++k) {
    LogRecord r;
    r.t = k * dt;
    r.vehicles.resize(n);
    for (auto& v : r.vehicles) {
      v.direction = v.direction_desired = -kE3;
      v.tension = 1.0;
      v.tension_desired = -kE3;
    }
    log.records.push_back(r);
  }
  return log;
}

TEST(ErrorMatrices, ZeroGainsGiveIntegratorChains) {
  ScenarioConfig c = ScenarioConfig::Default();
  c.params.vehicles.resize(1);
  ControllerGains g;
  g.vehicles.resize(1);
  const ErrorStateMatrices m = build_error_matrices(c.params, g);
  ASSERT_EQ(m.A_tilde.rows(), 18);
  MatrixXd expected = MatrixXd::Zero(18, 18);
  expected.block(0, 0, 9, 9) = integrator_chain();
  expected.block(9, 9, 9, 9) = integrator_chain();
  EXPECT_EQ(m.A_tilde, expected);
}

TEST(ErrorMatrices, TableGainsShapeAndHurwitzBlocks) {
  const ScenarioConfig c = ScenarioConfig::Default();
  const ErrorStateMatrices m = build_error_matrices(c.params, c.gains);
  EXPECT_EQ(m.A_tilde.rows(), 36);
  EXPECT_EQ(m.A_tilde.cols(), 36);
  EXPECT_EQ(m.B_tilde.rows(), 36);
  EXPECT_EQ(m.B_tilde.cols(), 27);
  for (int b = 0; b < 4; ++b) {
    EXPECT_LT(spectral_abscissa(m.A_tilde.block(9 * b, 9 * b, 9, 9)), 0.0) << "block " << b;
  }
  // block diagonal: everything off the diagonal blocks is exactly zero
  for (int r = 0; r < 36; ++r)
    for (int k = 0; k < 36; ++k)
      if (r / 9 != k / 9) EXPECT_EQ(m.A_tilde(r, k), 0.0);
  EXPECT_EQ(MatrixXd(m.A_tilde.block(0, 0, 9, 9)), error_block(c.gains.load, 0.225));
}

// Load block oracle: per axis the characteristic polynomial is
// s³ + (kd/m)s² + (kp/m)s + ki/m; Routh-Hurwitz needs (kd/m)(kp/m) > ki/m.
TEST(ErrorMatrices, LoadBlockRouthHurwitz) {
  const PidGains g = ControllerGains::DefaultLoadGains();
  const double m = 0.225;
  for (int a = 0; a < 3; ++a) {
    const double a2 = g.kd(a) / m, a1 = g.kp(a) / m, a0 = g.ki(a) / m;
    EXPECT_GT(a2, 0);
    EXPECT_GT(a0, 0);
    EXPECT_GT(a2 * a1, a0);
  }
}

TEST(ErrorMatrices, InputPattern) {
  const ScenarioConfig c = ScenarioConfig::Default();
  const ErrorStateMatrices m = build_error_matrices(c.params, c.gains);
  const int row = 18;  // vehicle 2
  for (int r = row; r < row + 9; ++r) {
    for (int k = 0; k < 27; ++k) {
      const bool own = k >= 9 && k < 18;
      if (!own) EXPECT_EQ(m.B_tilde(r, k), 0.0);
    }
  }
  for (int ax = 0; ax < 3; ++ax) {
    EXPECT_DOUBLE_EQ(m.B_tilde(row + 6 + ax, 9 + ax), 1.0 / 0.5);
    EXPECT_DOUBLE_EQ(m.B_tilde(row + 6 + ax, 12 + ax), 1.0 / 0.5);
    EXPECT_DOUBLE_EQ(m.B_tilde(row + 6 + ax, 15 + ax), 1.0);
    for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(m.B_tilde(6 + ax, 9 * i + ax), -1.0 / 0.225);
  }
  EXPECT_EQ(m.B_tilde.topRows(6).cwiseAbs().maxCoeff(), 0.0);
}

TEST(WL, IdentityExample) {
  const ScenarioConfig c = ScenarioConfig::Default();
  const ErrorStateMatrices m = build_error_matrices(c.params, c.gains);
  const MatrixXd W = build_WL(m, MatrixXd::Identity(36, 36), 0.0, 1.0);
  ASSERT_EQ(W.rows(), 63);
  EXPECT_EQ(MatrixXd(W.topLeftCorner(36, 36)), MatrixXd(m.A_tilde + m.A_tilde.transpose()));
  EXPECT_EQ(MatrixXd(W.topRightCorner(36, 27)), m.B_tilde);
  EXPECT_EQ(MatrixXd(W.bottomRightCorner(27, 27)), MatrixXd(-MatrixXd::Identity(27, 27)));
  EXPECT_EQ(W, W.transpose());
}

TEST(WLProperty, SymmetricForRandomP) {
  Gen g(81);
  const ScenarioConfig c = ScenarioConfig::Default();
  const ErrorStateMatrices m = build_error_matrices(c.params, c.gains);
  for (int k = 0; k < 20; ++k) {
    MatrixXd R(36, 36);
    for (int i = 0; i < R.size(); ++i) R.data()[i] = g.uniform(-1, 1);
    const MatrixXd P = R * R.transpose() + MatrixXd::Identity(36, 36);
    const MatrixXd W = build_WL(m, P, g.uniform(0, 2), g.uniform(0.1, 10));
    EXPECT_EQ(W, W.transpose());
  }
}

TEST(Feasibility, Examples) {
  const Feasibility f = check_feasibility(-MatrixXd::Identity(4, 4));
  EXPECT_TRUE(f.feasible);
  EXPECT_DOUBLE_EQ(f.lambda_max, -1.0);
  VectorXd d = -VectorXd::Ones(4);
  d(0) = 1.0;
  EXPECT_FALSE(check_feasibility(MatrixXd(d.asDiagonal())).feasible);
  EXPECT_TRUE(check_feasibility(MatrixXd::Zero(2, 2)).feasible);
}

// Scaling P rescales the (1,1) block and λ_max is recomputed each time.
TEST(FeasibilityProperty, ScaleConsistent) {
  const ErrorStateMatrices m = scalar_system(-1.0);
  for (double s : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const MatrixXd W = build_WL(m, MatrixXd::Constant(1, 1, s), 0.0, 1.0);
    // [[-2s, s], [s, -1]]: λ_max = (-(2s+1) + sqrt((2s-1)² + 4s²)) / 2
    const double expected = 0.5 * (-(2 * s + 1) + std::sqrt((2 * s - 1) * (2 * s - 1) + 4 * s * s));
    const Feasibility f = check_feasibility(W);
    EXPECT_NEAR(f.lambda_max, expected, 1e-12);
    EXPECT_EQ(f.feasible, expected <= 1e-9);
  }
}

TEST(Lyapunov, SolvesRandomStableSystems) {
  Gen g(82);
  for (int k = 0; k < 20; ++k) {
    MatrixXd A(5, 5);
    for (int i = 0; i < A.size(); ++i) A.data()[i] = g.uniform(-1, 1);
    A -= (spectral_abscissa(A) + 0.5) * MatrixXd::Identity(5, 5);
    const MatrixXd P = solve_lyapunov(A, MatrixXd::Identity(5, 5));
    EXPECT_LT((A.transpose() * P + P * A + MatrixXd::Identity(5, 5)).norm(), 1e-10);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<MatrixXd>(P).eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Certificate, ScalarOracle) {
  const EllipsoidCertificate c = search_certificate(scalar_system(-1.0), unit_sum(), small_grid());
  EXPECT_DOUBLE_EQ(c.epsilon, 1.0);
  EXPECT_NEAR(c.alpha, 1.0, 1e-6);
  EXPECT_NEAR(c.P(0, 0), 1.0, 1e-6);
  EXPECT_DOUBLE_EQ(c.beta, 1.0);
  EXPECT_NEAR(c.trace_metric, 1.0, 1e-6);
  EXPECT_LE(c.lambda_max, 1e-9);
  // hand-computed W_L at (α, ε, P) = (1, 1, 1)
  const MatrixXd W = build_WL(scalar_system(-1.0), MatrixXd::Constant(1, 1, 1.0), 1.0, 1.0);
  EXPECT_EQ(W, (MatrixXd(2, 2) << -1, 1, 1, -1).finished());
  EXPECT_NEAR(check_feasibility(W).lambda_max, 0.0, 1e-15);
}

TEST(Certificate, UnstableThrows) {
  EXPECT_THROW(search_certificate(scalar_system(1.0), unit_sum(), small_grid()), NotHurwitzError);
  ScenarioConfig c = ScenarioConfig::Default();
  c.gains.load = PidGains{};
  EXPECT_THROW(search_certificate(build_error_matrices(c.params, c.gains),
                                  DisturbanceBounds::Unit(3)),
               NotHurwitzError);
}

TEST(Certificate, InfeasibleReportsBestLambda) {
  CertificateSearchOptions o = small_grid();
  o.epsilon_max = 0.1;
  o.epsilon_points = 3;
  try {
    search_certificate(scalar_system(-1.0), unit_sum(), o);
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_GT(e.best_lambda_max(), 0.0);
  }
}

TEST(Certificate, TableGainsAreCertified) {
  const ScenarioConfig c = ScenarioConfig::Default();
  const ErrorStateMatrices m = build_error_matrices(c.params, c.gains);
  const EllipsoidCertificate cert = search_certificate(m, DisturbanceBounds::Unit(3));
  EXPECT_LE(cert.lambda_max, 1e-9);
  EXPECT_LE(check_feasibility(build_WL(m, cert.P, cert.alpha, cert.epsilon)).lambda_max, 1e-9);
  EXPECT_GT(cert.radius_sq, 0.0);
  EXPECT_TRUE(std::isfinite(cert.radius_sq));
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<MatrixXd>(cert.P).eigenvalues().minCoeff(), 0.0);
  EXPECT_EQ(cert.P, cert.P.transpose());
}

TEST(Certificate, ThreadCountDoesNotChangeResult) {
  const ScenarioConfig c = ScenarioConfig::Default();
  const ErrorStateMatrices m = build_error_matrices(c.params, c.gains);
  CertificateSearchOptions one, many;
  one.threads = 1;
  many.threads = 7;
  const auto a = search_certificate(m, DisturbanceBounds::Unit(3), one);
  const auto b = search_certificate(m, DisturbanceBounds::Unit(3), many);
  EXPECT_EQ(a.alpha, b.alpha);
  EXPECT_EQ(a.epsilon, b.epsilon);
  EXPECT_EQ(a.P, b.P);
}

TEST(Bounds, PerfectTrackingIsZero) {
  const DisturbanceBounds b = estimate_disturbance_bounds(zero_error_log(3, 100, 0.1), 5.0);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(b.c1[i], 0.0);
    EXPECT_EQ(b.c2[i], 0.0);
    EXPECT_EQ(b.c3[i], 0.0);
  }
}

TEST(Bounds, ConstantOffset) {
  SimLog log = zero_error_log(2, 100, 0.1);
  for (auto& r : log.records) r.vehicles[1].zeta = Vec3(0.1, 0, 0);
  const DisturbanceBounds b = estimate_disturbance_bounds(log, 5.0);
  EXPECT_NEAR(b.c1[1], 0.01, 1e-15);
  EXPECT_EQ(b.c1[0], 0.0);
}

TEST(Bounds, SecondDifferenceOfDesiredDirection) {
  SimLog log = zero_error_log(1, 200, 0.01);
  // α_d = (sin t, 0, ·): second derivative -sin t, peak near t = π/2
  for (auto& r : log.records) r.vehicles[0].direction_desired = Vec3(std::sin(r.t), 0, -1);
  const DisturbanceBounds b = estimate_disturbance_bounds(log, 0.0);
  EXPECT_NEAR(b.c2[0], 1.0, 1e-4);
}

TEST(Bounds, ShortLogThrows) {
  EXPECT_THROW(estimate_disturbance_bounds(zero_error_log(1, 10, 0.1), 5.0), AnalysisError);
  EXPECT_THROW(estimate_disturbance_bounds(SimLog{1, {}}, 0.0), AnalysisError);
}

TEST(Membership, Examples) {
  EllipsoidCertificate c;
  c.P = MatrixXd::Identity(2, 2) * 2.0;
  c.alpha = 0.5;
  c.beta = 4.0;
  Membership m = ellipsoid_membership(VectorXd::Zero(2), c);
  EXPECT_TRUE(m.inside);
  EXPECT_EQ(m.level, 0.0);
  // χᵀPχ = β/α = 8 at χ = (2, 0)
  m = ellipsoid_membership((VectorXd(2) << 2.0, 0.0).finished(), c);
  EXPECT_DOUBLE_EQ(m.level, 1.0);
  EXPECT_TRUE(m.inside);
  m = ellipsoid_membership((VectorXd(2) << 2.0, 0.1).finished(), c);
  EXPECT_FALSE(m.inside);
}

TEST(Chi, ConstantErrorIntegrates) {
  SimLog log = zero_error_log(1, 2001, 1e-3);
  for (auto& r : log.records) r.load_error = Vec3(1, 0, 0);
  const auto chis = chi_series(log);
  VectorXd expected = VectorXd::Zero(18);
  expected(0) = 2.0;
  expected(3) = 1.0;
  ASSERT_EQ(chis.back().size(), 18);
  EXPECT_LT((chis.back() - expected).norm(), 1e-12);
  EXPECT_EQ(chis.front().head<3>(), Vec3::Zero());
}

TEST(Chi, Dimensions) {
  EXPECT_EQ(chi_series(zero_error_log(3, 2, 0.1)).front().size(), 36);
  for (const VectorXd& chi : chi_series(zero_error_log(3, 20, 0.1))) EXPECT_EQ(chi.norm(), 0.0);
}

TEST(Containment, ZeroErrorLogIsFullyInside) {
  const ScenarioConfig c = ScenarioConfig::Default();
  const EllipsoidCertificate cert =
      search_certificate(build_error_matrices(c.params, c.gains), DisturbanceBounds::Unit(3));
  const ContainmentStats s = containment_stats(zero_error_log(3, 100, 0.1), cert, 5.0);
  EXPECT_EQ(s.samples, 50);
  EXPECT_EQ(s.containment_fraction, 1.0);
  EXPECT_EQ(s.lyapunov_violation_rate, 0.0);
  EXPECT_THROW(containment_stats(zero_error_log(2, 10, 0.1), cert, 0.0), AnalysisError);
}

}  // namespace
}  // namespace slungload
