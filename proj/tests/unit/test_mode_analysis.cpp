#include <doctest.h>

#include "chainsync/errors.hpp"
#include "chainsync/gaussian_dynamics.hpp"
#include "chainsync/mode_analysis.hpp"

#include <cmath>
#include <numbers>

using namespace chainsync;

namespace {

// Eigenpairs of the bare probe block, computed independently of the
// closed-form angle.
Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> probe_eigen(double w1, double w2, double lambda) {
  Eigen::Matrix2d A;
  A << w1 * w1 + lambda, -lambda, -lambda, w2 * w2 + lambda;
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(A);
}

double gqle_error(const NetworkConfig& cfg, const ProbePair& p, double horizon, double dt) {
  const SystemModes sm = system_modes(cfg, p);
  const Kernels k = damping_kernels(sm, chain_frequencies(cfg), dt,
                                    static_cast<int>(std::llround(horizon / dt)) + 1);
  const double c = std::cos(sm.theta), s = std::sin(sm.theta);
  const Eigen::Vector2d x0(0.3, -0.7);
  const Eigen::Vector2d q0(c * x0(0) + s * x0(1), -s * x0(0) + c * x0(1));
  const GqleTrajectory tr =
      solve_gqle_means(k, sm.Lambda1, sm.Lambda2, q0, Eigen::Vector2d::Zero(), horizon, dt);

  std::array<ProbeState, 2> ps;
  ps[0].x = x0(0);
  ps[1].x = x0(1);
  const NormalModes nm(assemble_full_potential(cfg, p));
  const ModalTrajectory traj(nm, initial_composite_state(ps, cfg));
  double err = 0.0;
  for (int i = 0; i < tr.q1.size(); ++i) {
    const double t = i * dt;
    const double x1 = traj.mean_at(0, t).first, x2 = traj.mean_at(1, t).first;
    err = std::max(err, std::abs(tr.q1(i) - (c * x1 + s * x2)));
    err = std::max(err, std::abs(tr.q2(i) - (-s * x1 + c * x2)));
  }
  return err;
}

}  // namespace

TEST_SUITE("mode_analysis") {

TEST_CASE("mode angle special cases") {
  CHECK(system_mode_angle(1.0, 1.1, 0.0).theta == 0.0);
  CHECK(system_mode_angle(1.0, 1.0, 0.3).theta == doctest::Approx(std::numbers::pi / 4));
  const ModeAngle deg = system_mode_angle(1.0, 1.0, 0.0);
  CHECK(deg.degenerate);
  CHECK(deg.theta == 0.0);
  CHECK_FALSE(system_mode_angle(1.0, 1.1, 0.5).degenerate);
}

TEST_CASE("mode angle agrees with a 2x2 eigenvector solve") {
  const double theta = system_mode_angle(1.0, 1.1, 0.5).theta;
  CHECK(theta == doctest::Approx(0.6818).epsilon(1e-4));
  CHECK(std::sin(2 * theta) == doctest::Approx(0.9786).epsilon(1e-4));
  for (auto [w1, w2, l] : {std::tuple{1.0, 1.1, 0.5}, std::tuple{1.0, 1.2, 0.05},
                           std::tuple{0.7, 1.6, 2.0}}) {
    const double th = system_mode_angle(w1, w2, l).theta;
    const auto es = probe_eigen(w1, w2, l);
    const Eigen::Vector2d lower = es.eigenvectors().col(0);
    // q1 = cos x1 + sin x2 is the lower mode, up to sign.
    CHECK(std::abs(std::abs(lower(0) * std::cos(th) + lower(1) * std::sin(th)) - 1.0) < 1e-12);
  }
}

TEST_CASE("eigenfrequencies") {
  auto [a, b] = system_eigenfrequencies(1.0, 1.1, 0.0);
  CHECK(a == doctest::Approx(1.0));
  CHECK(b == doctest::Approx(1.1));
  std::tie(a, b) = system_eigenfrequencies(1.0, 1.0, 0.5);
  CHECK(a == doctest::Approx(1.0));
  CHECK(b == doctest::Approx(std::sqrt(2.0)));
  std::tie(a, b) = system_eigenfrequencies(1.0, 1.1, 0.5);
  const auto es = probe_eigen(1.0, 1.1, 0.5);
  CHECK(a * a == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
  CHECK(b * b == doctest::Approx(es.eigenvalues()(1)).epsilon(1e-12));
  CHECK(a * a == doctest::Approx(1.094).epsilon(1e-3));
  CHECK(b * b == doctest::Approx(2.116).epsilon(1e-3));
}

TEST_CASE("coupling coefficients") {
  const int M = 9;
  auto [z1, z2] = coupling_coefficients(0.4, 0.0, 1, 3, M);
  CHECK(z1.norm() == 0.0);
  CHECK(z2.norm() == 0.0);

  const double K = 0.3;
  const double pre = std::sqrt(2.0 * K * K / (M + 1));
  auto [c1, c2] = coupling_coefficients(0.0, K, 1, 4, M);
  for (int j = 1; j <= M; ++j) {
    CHECK(c1(j - 1) == doctest::Approx(pre * std::sin(std::numbers::pi * j / (M + 1))));
    CHECK(c2(j - 1) == doctest::Approx(pre * std::sin(std::numbers::pi * j * 4 / (M + 1))));
  }

  // Equal sites at theta = pi/4: q2 decouples.
  auto [e1, e2] = coupling_coefficients(std::numbers::pi / 4, K, 2, 2, M);
  CHECK(e2.cwiseAbs().maxCoeff() < 1e-15);
  CHECK(e1(0) == doctest::Approx(pre * std::sqrt(2.0) * std::sin(2 * std::numbers::pi / (M + 1))));

  // Oracle: project K x1 X_m + s K x2 X_n onto (q, Q) coordinates directly.
  const double th = 0.6;
  for (int sign : {+1, -1}) {
    auto [d1, d2] = coupling_coefficients(th, K, 3, 7, M, sign);
    const Matrix O = sine_modes(M);
    for (int j = 0; j < M; ++j) {
      const double a = K * O(2, j), b = sign * K * O(6, j);
      CHECK(d1(j) == doctest::Approx(std::cos(th) * a + std::sin(th) * b));
      CHECK(d2(j) == doctest::Approx(-std::sin(th) * a + std::cos(th) * b));
    }
  }
}

TEST_CASE("edge cross kernel nearly cancels") {
  NetworkConfig cfg;
  ProbePair p;
  p.lambda = 0.0;
  p.site_m = 1;
  p.site_n = cfg.M;
  const SystemModes sm = system_modes(cfg, p);
  const Kernels k = damping_kernels(sm, chain_frequencies(cfg), 0.1, 2);
  // c1(j) c2(j) alternates in sign with j.
  CHECK(std::abs(k.eta_0) < 1e-3 * k.gamma1_0);
}

TEST_CASE("single-mode kernel is an exact cosine") {
  SystemModes sm;
  sm.c1 = Vector::Constant(1, 0.3);
  sm.c2 = Vector::Constant(1, -0.2);
  const Vector w = Vector::Constant(1, 0.9);
  const Kernels k = damping_kernels(sm, w, 0.05, 200);
  for (int i = 0; i < 200; ++i) {
    const double c = std::cos(0.9 * i * 0.05) / 0.81;
    CHECK(k.gamma1(i) == doctest::Approx(0.09 * c));
    CHECK(k.gamma2(i) == doctest::Approx(0.04 * c));
    CHECK(k.eta(i) == doctest::Approx(-0.06 * c));
  }
  CHECK(k.gamma1_0 == doctest::Approx(0.09 / 0.81));
  CHECK_THROWS_AS(damping_kernels(sm, Vector::Zero(1), 0.05, 10), ZeroModeError);
}

TEST_CASE("fig2 kernels by direct summation") {
  NetworkConfig cfg;
  ProbePair p;
  p.lambda = 0.5;
  p.K = 0.2;
  const SystemModes sm = system_modes(cfg, p);
  const Vector w = chain_frequencies(cfg);
  const Kernels k = damping_kernels(sm, w, 0.5, 5);
  double g1 = 0.0, et = 0.0, g1t = 0.0;
  for (int j = 0; j < cfg.M; ++j) {
    g1 += sm.c1(j) * sm.c1(j) / (w(j) * w(j));
    et += sm.c1(j) * sm.c2(j) / (w(j) * w(j));
    g1t += sm.c1(j) * sm.c1(j) / (w(j) * w(j)) * std::cos(w(j) * 2.0);
  }
  CHECK(k.gamma1_0 > 0.0);
  CHECK(k.gamma1_0 == doctest::Approx(g1).epsilon(1e-12));
  CHECK(k.eta_0 == doctest::Approx(et).epsilon(1e-12));
  CHECK(k.gamma1(4) == doctest::Approx(g1t).epsilon(1e-12));
}

TEST_CASE("rayleigh reduction") {
  Eigen::Matrix2d A;
  A << 1.5, -0.5, -0.5, 1.71;
  const RayleighReport uni = rayleigh_reduction(A, 0.1 * Eigen::Matrix2d::Identity());
  CHECK(uni.gap == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_FALSE(uni.predicts_sync);
  CHECK(uni.commutator_norm < 1e-15);
  CHECK(std::abs(uni.Gp(0, 1)) < 1e-15);

  // Common-bath damping acting on x1 + x2 only.
  const double theta = system_mode_angle(1.0, 1.1, 0.5).theta;
  Eigen::Matrix2d G = Eigen::Matrix2d::Constant(0.01);
  const RayleighReport r = rayleigh_reduction(A, G);
  CHECK(r.ratio == doctest::Approx(ohmic_gap_ratio(theta).value).epsilon(1e-9));
  CHECK(r.predicts_sync);
  CHECK(r.tau_S == doctest::Approx(1.0 / std::max(r.Gp(0, 0), r.Gp(1, 1))));
  CHECK(r.gap == doctest::Approx(std::abs(r.Gp(0, 0) - r.Gp(1, 1))));
  const Eigen::Matrix2d comm = G * A - A * G;
  CHECK(r.commutator_norm == doctest::Approx(comm.norm()));
}

TEST_CASE("ohmic gap ratio") {
  CHECK(ohmic_gap_ratio(0.0).value == 1.0);
  CHECK(ohmic_gap_ratio(std::numbers::pi / 4).infinite);
  const double theta = system_mode_angle(1.0, 1.1, 0.5).theta;
  const double s2 = 1.0 / std::sqrt(1.0 + 0.21 * 0.21);  // 2 lambda / hypot(2 lambda, w2^2 - w1^2)
  CHECK(ohmic_gap_ratio(theta).value == doctest::Approx((1 + s2) / (1 - s2)).epsilon(1e-12));
  CHECK(ohmic_gap_ratio(theta).value == doctest::Approx(92.5).epsilon(5e-3));
}

TEST_CASE("damping matrix for fig2 predicts sync") {
  NetworkConfig cfg;
  ProbePair p;
  p.lambda = 0.5;
  const RayleighReport r = rayleigh_for(cfg, p);
  CHECK(r.predicts_sync);
  CHECK(r.Gp(0, 0) > r.Gp(1, 1));

  p.lambda = 0.0;
  p.K = 0.1;
  const RayleighReport w = rayleigh_for(cfg, p);
  CHECK_FALSE(w.predicts_sync);
  CHECK(w.gap < 1e-12);
}

TEST_CASE("damping matrix is symmetric positive semidefinite") {
  NetworkConfig cfg;
  cfg.M = 40;
  ProbePair p;
  p.site_m = 3;
  p.site_n = 17;
  p.sign2 = -1;
  const Eigen::Matrix2d G = markov_damping_matrix(cfg, p, 1.05, 20.0);
  CHECK(G(0, 1) == G(1, 0));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(G);
  CHECK(es.eigenvalues()(0) > -1e-15);
}

TEST_CASE("resonant modes") {
  NetworkConfig cfg;
  cfg.M = 40;
  const Vector w = chain_frequencies(cfg);
  ResonantModes r = resonant_mode_indices(w(16), 5.0, w);
  CHECK(r.k_minus == 17);
  CHECK_FALSE(r.minus_out_of_band);
  CHECK(r.plus_out_of_band);
  CHECK(r.k_plus == 40);
  r = resonant_mode_indices(0.2, 1.0, w);
  CHECK(r.minus_out_of_band);
  CHECK(r.k_minus == 1);
  // Tie goes to the lower index.
  Vector even(3);
  even << 1.0, 2.0, 3.0;
  CHECK(resonant_mode_indices(1.5, 2.5, even).k_minus == 1);
  CHECK(resonant_mode_indices(1.5, 2.5, even).k_plus == 2);

  const auto [L1, L2] = system_eigenfrequencies(1.0, 1.1, 0.5);
  r = resonant_mode_indices(L1, L2, w);
  int best = 0;
  for (int j = 1; j < w.size(); ++j)
    if (std::abs(w(j) - L2) < std::abs(w(best) - L2)) best = j;
  CHECK(r.k_plus == best + 1);
}

TEST_CASE("group velocity") {
  const double v = max_group_velocity(0.4, 1.2);
  double brute = 0.0;
  for (int i = 1; i < 200000; ++i) {
    const double k = std::numbers::pi * i / 200000;
    const double s = std::sin(0.5 * k);
    brute = std::max(brute, 1.2 * std::sin(k) / std::sqrt(0.16 + 4.8 * s * s));
  }
  CHECK(v == doctest::Approx(brute).epsilon(1e-9));
  CHECK(max_group_velocity(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gqle with zero kernels gives free cosines") {
  Kernels k;
  k.dt = 0.01;
  k.gamma1 = k.gamma2 = k.eta = Vector::Zero(2001);
  const GqleTrajectory tr =
      solve_gqle_means(k, 1.0, 1.3, Eigen::Vector2d(1.0, 0.5), Eigen::Vector2d::Zero(), 20.0, 0.01);
  double err = 0.0;
  for (int i = 0; i < tr.q1.size(); ++i) {
    err = std::max(err, std::abs(tr.q1(i) - std::cos(i * 0.01)));
    err = std::max(err, std::abs(tr.q2(i) - 0.5 * std::cos(1.3 * i * 0.01)));
  }
  CHECK(err < 1e-3);
}

TEST_CASE("gqle guards") {
  Kernels k;
  k.dt = 0.5;
  k.gamma1 = k.gamma2 = k.eta = Vector::Zero(100);
  CHECK_THROWS_AS(solve_gqle_means(k, 1.0, 1.1, Eigen::Vector2d::Ones(), Eigen::Vector2d::Zero(),
                                   10.0, 0.5),
                  StepTooLarge);
  k.dt = 0.01;
  CHECK_THROWS(solve_gqle_means(k, 1.0, 1.1, Eigen::Vector2d::Ones(), Eigen::Vector2d::Zero(),
                                10.0, 0.01));
}

TEST_CASE("gqle converges to the exact means at second order") {
  NetworkConfig cfg;
  cfg.M = 30;
  ProbePair p;
  p.lambda = 0.5;
  p.K = 0.3;
  const double e1 = gqle_error(cfg, p, 40.0, 0.04);
  const double e2 = gqle_error(cfg, p, 40.0, 0.02);
  CHECK(e2 < 5e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
}

}
