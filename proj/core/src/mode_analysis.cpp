#include "chainsync/mode_analysis.hpp"

#include "chainsync/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace chainsync {

ModeAngle system_mode_angle(double omega1, double omega2, double lambda) {
  const double detune = omega2 * omega2 - omega1 * omega1;
  if (lambda == 0.0 && detune == 0.0) return {0.0, true};
  if (lambda == 0.0) return {detune > 0.0 ? 0.0 : std::numbers::pi / 2, false};
  // atan2 keeps theta in (0, pi/2) for lambda > 0 and gives exactly pi/4 at
  // zero detuning.
  return {0.5 * std::atan2(2.0 * lambda, detune), false};
}

std::pair<double, double> system_eigenfrequencies(double omega1, double omega2,
                                                  double lambda) {
  const double w1 = omega1 * omega1;
  const double w2 = omega2 * omega2;
  const double mid = lambda + 0.5 * (w1 + w2);
  const double half = 0.5 * std::hypot(2.0 * lambda, w1 - w2);
  return {std::sqrt(mid - half), std::sqrt(mid + half)};
}

std::pair<Vector, Vector> coupling_coefficients(double theta, double K, int site_m,
                                                int site_n, int M, int sign2) {
  Vector c1(M), c2(M);
  const double pre = std::sqrt(2.0 * K * K / (M + 1));
  const double c = std::cos(theta), s = std::sin(theta);
  for (int j = 1; j <= M; ++j) {
    const double sm = std::sin(std::numbers::pi * j * site_m / (M + 1));
    const double sn = sign2 * std::sin(std::numbers::pi * j * site_n / (M + 1));
    c1(j - 1) = pre * (c * sm + s * sn);
    c2(j - 1) = pre * (c * sn - s * sm);
  }
  return {c1, c2};
}

SystemModes system_modes(const NetworkConfig& cfg, const ProbePair& probes) {
  probes.validate(cfg.M);
  SystemModes out;
  out.theta = system_mode_angle(probes.omega1, probes.omega2, probes.lambda).theta;
  std::tie(out.Lambda1, out.Lambda2) =
      system_eigenfrequencies(probes.omega1, probes.omega2, probes.lambda);
  if (!cfg.coupling_matrix) {
    std::tie(out.c1, out.c2) = coupling_coefficients(out.theta, probes.K, probes.site_m,
                                                     probes.site_n, cfg.M, probes.sign2);
    return out;
  }
  const ChainModes cm = chain_modes(cfg);
  const double c = std::cos(out.theta), s = std::sin(out.theta);
  const auto um = cm.vectors.row(probes.site_m - 1).transpose();
  const auto un = (probes.sign2 * cm.vectors.row(probes.site_n - 1)).transpose();
  out.c1 = probes.K * (c * um + s * un);
  out.c2 = probes.K * (c * un - s * um);
  return out;
}

Vector chain_frequencies(const NetworkConfig& cfg) {
  return chain_modes(cfg).omega_sq.cwiseMax(0.0).cwiseSqrt();
}

Kernels damping_kernels(const SystemModes& modes, const Vector& chain_freqs, double dt,
                        int samples) {
  const int M = static_cast<int>(chain_freqs.size());
  if (modes.c1.size() != M || modes.c2.size() != M)
    throw std::invalid_argument("coupling arrays and chain frequencies differ in length");
  if (samples < 1) throw std::invalid_argument("need at least one kernel sample");
  for (int j = 0; j < M; ++j)
    if (!(chain_freqs(j) > 0.0))
      throw ZeroModeError("chain mode " + std::to_string(j + 1) +
                          " has zero frequency; damping kernels diverge");

  Vector w11(M), w22(M), w12(M);
  for (int j = 0; j < M; ++j) {
    const double inv = 1.0 / (chain_freqs(j) * chain_freqs(j));
    w11(j) = modes.c1(j) * modes.c1(j) * inv;
    w22(j) = modes.c2(j) * modes.c2(j) * inv;
    w12(j) = modes.c1(j) * modes.c2(j) * inv;
  }

  Kernels k;
  k.dt = dt;
  k.gamma1.resize(samples);
  k.gamma2.resize(samples);
  k.eta.resize(samples);
  for (int n = 0; n < samples; ++n) {
    const double t = n * dt;
    double a = 0.0, b = 0.0, e = 0.0;
    for (int j = 0; j < M; ++j) {
      const double cs = std::cos(chain_freqs(j) * t);
      a += w11(j) * cs;
      b += w22(j) * cs;
      e += w12(j) * cs;
    }
    k.gamma1(n) = a;
    k.gamma2(n) = b;
    k.eta(n) = e;
  }
  k.gamma1_0 = w11.sum();
  k.gamma2_0 = w22.sum();
  k.eta_0 = w12.sum();
  return k;
}

RayleighReport rayleigh_reduction(const Eigen::Matrix2d& A, const Eigen::Matrix2d& G,
                                  double gap_threshold) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(A);
  const Eigen::Matrix2d Mv = es.eigenvectors();
  RayleighReport r;
  // Mv is orthogonal, so M^-1 = M^T.
  r.Gp = Mv.transpose() * G * Mv;
  r.commutator_norm = (G * A - A * G).norm();
  const double g11 = r.Gp(0, 0), g22 = r.Gp(1, 1);
  const double big = std::max(std::abs(g11), std::abs(g22));
  r.gap = std::abs(g11 - g22);
  r.tau_S = big > 0.0 ? 1.0 / big : std::numeric_limits<double>::infinity();
  r.ratio = g22 != 0.0 ? g11 / g22 : std::numeric_limits<double>::infinity();
  r.predicts_sync = big > 0.0 && r.gap > gap_threshold * big;
  return r;
}

OhmicRatio ohmic_gap_ratio(double theta) {
  const double s = std::sin(2.0 * theta);
  if (1.0 - s <= 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {(1.0 + s) / (1.0 - s), false};
}

Eigen::Matrix2d probe_stiffness(const ProbePair& probes) {
  Eigen::Matrix2d A;
  A << probes.omega1 * probes.omega1 + probes.lambda, -probes.lambda, -probes.lambda,
      probes.omega2 * probes.omega2 + probes.lambda;
  return A;
}

Eigen::Matrix2d markov_damping_matrix(const NetworkConfig& cfg, const ProbePair& probes,
                                      double omega_ref, double taper_time) {
  probes.validate(cfg.M);
  const ChainModes cm = chain_modes(cfg);
  const double a = 1.0 / taper_time;
  auto lorentz = [a](double x) { return a / (a * a + x * x); };
  Eigen::Matrix2d G = Eigen::Matrix2d::Zero();
  for (int j = 0; j < cfg.M; ++j) {
    const double w2 = cm.omega_sq(j);
    if (!(w2 > 0.0)) throw ZeroModeError("chain zero mode in damping matrix");
    const double w = std::sqrt(w2);
    const double d1 = probes.K * cm.vectors(probes.site_m - 1, j);
    const double d2 = probes.sign2 * probes.K * cm.vectors(probes.site_n - 1, j);
    // int_0^inf exp(-a t) cos(w t) cos(w_ref t) dt
    const double weight = 0.5 * (lorentz(w - omega_ref) + lorentz(w + omega_ref)) / w2;
    G(0, 0) += d1 * d1 * weight;
    G(1, 1) += d2 * d2 * weight;
    G(0, 1) += d1 * d2 * weight;
  }
  G(1, 0) = G(0, 1);
  return G;
}

RayleighReport rayleigh_for(const NetworkConfig& cfg, const ProbePair& probes,
                            double gap_threshold) {
  const auto [L1, L2] = system_eigenfrequencies(probes.omega1, probes.omega2, probes.lambda);
  const Eigen::Matrix2d G = markov_damping_matrix(cfg, probes, 0.5 * (L1 + L2), 0.5 * cfg.M);
  return rayleigh_reduction(probe_stiffness(probes), G, gap_threshold);
}

namespace {

std::pair<int, bool> nearest_mode(double target, const Vector& freqs) {
  int best = 0;
  double best_d = std::abs(freqs(0) - target);
  for (int j = 1; j < freqs.size(); ++j) {
    const double d = std::abs(freqs(j) - target);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  const bool out = target < freqs(0) || target > freqs(freqs.size() - 1);
  return {best + 1, out};
}

}  // namespace

ResonantModes resonant_mode_indices(double Lambda1, double Lambda2, const Vector& chain_freqs) {
  if (chain_freqs.size() == 0) throw std::invalid_argument("empty chain spectrum");
  ResonantModes r;
  std::tie(r.k_minus, r.minus_out_of_band) = nearest_mode(Lambda1, chain_freqs);
  std::tie(r.k_plus, r.plus_out_of_band) = nearest_mode(Lambda2, chain_freqs);
  return r;
}

double max_group_velocity(double omega0, double g) {
  auto vg = [&](double k) {
    const double s = std::sin(0.5 * k);
    return g * std::sin(k) / std::sqrt(omega0 * omega0 + 4.0 * g * s * s);
  };
  // Coarse scan then golden-section refinement; vg is unimodal on (0, pi).
  constexpr int kScan = 2000;
  int best = 1;
  for (int i = 1; i < kScan; ++i)
    if (vg(std::numbers::pi * i / kScan) > vg(std::numbers::pi * best / kScan)) best = i;
  double lo = std::numbers::pi * (best - 1) / kScan;
  double hi = std::numbers::pi * (best + 1) / kScan;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
    if (vg(a) < vg(b)) lo = a; else hi = b;
  }
  return vg(0.5 * (lo + hi));
}

GqleTrajectory solve_gqle_means(const Kernels& kernels, double Lambda1, double Lambda2,
                                const Eigen::Vector2d& q0, const Eigen::Vector2d& v0,
                                double horizon, double dt) {
  if (!(dt > 0.0) || !(horizon > 0.0)) throw std::invalid_argument("dt and horizon must be > 0");
  const double fastest = std::max(Lambda1, Lambda2);
  if (dt > (2.0 * std::numbers::pi / fastest) / 20.0)
    throw StepTooLarge("GQLE step " + std::to_string(dt) +
                       " does not resolve the fastest normal mode");
  if (std::abs(kernels.dt - dt) > 1e-12 * dt)
    throw std::invalid_argument("kernels must be sampled with the solver step");
  const int steps = static_cast<int>(std::llround(horizon / dt));
  if (kernels.samples() < steps + 1)
    throw std::invalid_argument("kernels do not cover the requested horizon");

  Eigen::Matrix2d L2 = Eigen::Matrix2d::Zero();
  L2(0, 0) = Lambda1 * Lambda1;
  L2(1, 1) = Lambda2 * Lambda2;
  const Eigen::Matrix2d G0 = kernels.at(0);
  const Eigen::Matrix2d stiff = L2 - G0;
  // Omega_eff + Gamma(0) = diag(Lambda^2), so the implicit system is constant.
  const Eigen::Matrix2d lhs_inv =
      (Eigen::Matrix2d::Identity() + 0.25 * dt * dt * L2).inverse();

  GqleTrajectory out;
  out.dt = dt;
  out.q1.resize(steps + 1);
  out.q2.resize(steps + 1);
  std::vector<double> v1(static_cast<std::size_t>(steps) + 1);
  std::vector<double> v2(static_cast<std::size_t>(steps) + 1);

  Eigen::Vector2d q = q0, v = v0;
  Eigen::Vector2d acc = -L2 * q0;
  out.q1(0) = q(0);
  out.q2(0) = q(1);
  v1[0] = v(0);
  v2[0] = v(1);

  const double* g1 = kernels.gamma1.data();
  const double* g2 = kernels.gamma2.data();
  const double* et = kernels.eta.data();

  for (int n = 0; n < steps; ++n) {
    const int m = n + 1;
    // Memory integral at t_m without the implicit v_m endpoint.
    double h1 = 0.5 * (g1[m] * v1[0] + et[m] * v2[0]);
    double h2 = 0.5 * (et[m] * v1[0] + g2[m] * v2[0]);
    for (int k = 1; k <= n; ++k) {
      const int lag = m - k;
      const double a = v1[static_cast<std::size_t>(k)];
      const double b = v2[static_cast<std::size_t>(k)];
      h1 += g1[lag] * a + et[lag] * b;
      h2 += et[lag] * a + g2[lag] * b;
    }
    const Eigen::Vector2d hist(dt * h1, dt * h2);
    const Eigen::Vector2d slip = kernels.at(m) * q0;

    const Eigen::Vector2d rhs =
        v + 0.5 * dt * acc + 0.5 * dt * (-stiff * (q + 0.5 * dt * v) - hist - slip);
    const Eigen::Vector2d v_next = lhs_inv * rhs;
    const Eigen::Vector2d q_next = q + 0.5 * dt * (v + v_next);
    acc = -stiff * q_next - hist - 0.5 * dt * G0 * v_next - slip;
    q = q_next;
    v = v_next;
    out.q1(m) = q(0);
    out.q2(m) = q(1);
    v1[static_cast<std::size_t>(m)] = v(0);
    v2[static_cast<std::size_t>(m)] = v(1);
  }
  return out;
}

}  // namespace chainsync
