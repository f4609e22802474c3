#pragma once

#include "chainsync/lattice_model.hpp"

#include <Eigen/Dense>

#include <utility>

namespace chainsync {

// Rotation angle of the probe normal modes:
//   q1 =  cos(theta) x1 + sin(theta) x2
//   q2 = -sin(theta) x1 + cos(theta) x2
// with tan(2 theta) = 2 lambda / (omega2^2 - omega1^2). q1 is always the
// lower-frequency mode. `degenerate` is set when lambda = 0 and
// omega1 = omega2, where any angle diagonalizes the probe block.
struct ModeAngle {
  double theta = 0.0;
  bool degenerate = false;
};

ModeAngle system_mode_angle(double omega1, double omega2, double lambda);

// (Lambda1, Lambda2) with Lambda1 <= Lambda2.
std::pair<double, double> system_eigenfrequencies(double omega1, double omega2,
                                                  double lambda);

// Bilinear couplings of q1, q2 to the chain normal modes Q_j, j = 1..M.
// `sign2` multiplies every term that originates from the second probe.
std::pair<Vector, Vector> coupling_coefficients(double theta, double K, int site_m,
                                                int site_n, int M, int sign2 = +1);

struct SystemModes {
  double theta = 0.0;
  double Lambda1 = 0.0;
  double Lambda2 = 0.0;
  Vector c1;
  Vector c2;
};

SystemModes system_modes(const NetworkConfig& cfg, const ProbePair& probes);

// Chain normal-mode frequencies Omega_j (not squared), ascending.
Vector chain_frequencies(const NetworkConfig& cfg);

// Memory kernels sampled on t_k = k dt, k = 0..samples-1.
struct Kernels {
  double dt = 0.0;
  Vector gamma1;
  Vector gamma2;
  Vector eta;
  double gamma1_0 = 0.0;
  double gamma2_0 = 0.0;
  double eta_0 = 0.0;

  int samples() const noexcept { return static_cast<int>(gamma1.size()); }
  Eigen::Matrix2d at(int k) const {
    Eigen::Matrix2d G;
    G << gamma1(k), eta(k), eta(k), gamma2(k);
    return G;
  }
};

// gamma_s(t) = sum_j c_s(j)^2 / Omega_j^2 cos(Omega_j t), eta likewise with
// c1 c2. Summation runs over j in ascending order. Throws ZeroModeError if
// any Omega_j is zero.
Kernels damping_kernels(const SystemModes& modes, const Vector& chain_freqs,
                        double dt, int samples);

struct RayleighReport {
  Eigen::Matrix2d Gp = Eigen::Matrix2d::Zero();
  double gap = 0.0;
  double tau_S = 0.0;
  double ratio = 0.0;
  bool predicts_sync = false;
  // Frobenius norm of [G, A]; zero when the reduction is exact.
  double commutator_norm = 0.0;
};

inline constexpr double kDefaultSyncGapThreshold = 0.5;

// Rayleigh reduction: with M the orthonormal eigenvectors of the stiffness A
// (ascending eigenvalues), G' = M^-1 G M and only its diagonal is kept.
RayleighReport rayleigh_reduction(const Eigen::Matrix2d& A, const Eigen::Matrix2d& G,
                                  double gap_threshold = kDefaultSyncGapThreshold);

struct OhmicRatio {
  double value = 1.0;
  bool infinite = false;
};

// (1 + sin 2 theta) / (1 - sin 2 theta): damping ratio of the two probe
// normal modes when only x1 + x2 couples to an Ohmic bath.
OhmicRatio ohmic_gap_ratio(double theta);

// Probe stiffness block diag(w1^2 + lambda, w2^2 + lambda) - lambda offdiag.
Eigen::Matrix2d probe_stiffness(const ProbePair& probes);

// Time-local damping matrix in the (x1, x2) basis. Each entry is the cosine
// transform of the probe-space memory kernel at `omega_ref`, with an
// exponential taper exp(-t / taper_time) so the finite-chain spectrum is
// smoothed over a few level spacings. `taper_time` should stay below the
// revival time 2M.
Eigen::Matrix2d markov_damping_matrix(const NetworkConfig& cfg, const ProbePair& probes,
                                      double omega_ref, double taper_time);

// Rayleigh report for a full configuration: A = probe_stiffness, G from
// markov_damping_matrix at the mean of the two normal-mode frequencies and
// a taper of M/2.
RayleighReport rayleigh_for(const NetworkConfig& cfg, const ProbePair& probes,
                            double gap_threshold = kDefaultSyncGapThreshold);

struct ResonantModes {
  int k_minus = 0;  // 1-based chain mode closest to Lambda1
  int k_plus = 0;   // 1-based chain mode closest to Lambda2
  bool minus_out_of_band = false;
  bool plus_out_of_band = false;
};

ResonantModes resonant_mode_indices(double Lambda1, double Lambda2,
                                    const Vector& chain_freqs);

// Largest group velocity max_k dOmega/dk of the chain dispersion, in sites
// per unit time.
double max_group_velocity(double omega0, double g);

struct GqleTrajectory {
  double dt = 0.0;
  Vector q1;
  Vector q2;
};

// Solves the generalized quantum Langevin equation for the noise-averaged
// probe normal modes,
//   q'' + (Lambda^2 - Gamma(0)) q + int_0^t Gamma(t - s) q'(s) ds = -Gamma(t) q(0),
// with Gamma = [[gamma1, eta], [eta, gamma2]]. Both the time stepping and
// the memory integral use the trapezoidal rule, so the scheme is second
// order in dt. Kernels must be sampled with the same dt and cover the
// horizon. Throws StepTooLarge if dt > (2 pi / Lambda2) / 20.
GqleTrajectory solve_gqle_means(const Kernels& kernels, double Lambda1, double Lambda2,
                                const Eigen::Vector2d& q0, const Eigen::Vector2d& v0,
                                double horizon, double dt);

}  // namespace chainsync
