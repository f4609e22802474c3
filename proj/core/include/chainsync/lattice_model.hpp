#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace chainsync {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Boundary { kFixed };

// Homogeneous harmonic chain acting as a finite environment. Frequencies are
// in units of the first probe frequency, stiffnesses in its square.
struct NetworkConfig {
  int M = 300;
  double omega0 = 0.4;
  double g = 1.2;
  Boundary boundary = Boundary::kFixed;
  // Optional symmetric, non-negative, zero-diagonal adjacency that replaces
  // the chain. Enters the potential as (1/2) sum_{j<k} A_jk (X_j - X_k)^2.
  std::optional<Matrix> coupling_matrix;

  void validate() const;
};

// The two detuned oscillators and how they plug into the network.
// Sites are 1-based, as in the chain labelling.
struct ProbePair {
  double omega1 = 1.0;
  double omega2 = 1.1;
  double lambda = 0.0;
  double K = 0.2;
  int site_m = 1;
  int site_n = 1;
  int sign2 = +1;

  void validate(int M) const;
};

// Index layout of the composite phase space. Probes come first, then the
// chain sites; measures go through this instead of hard-coding offsets.
struct ModeLayout {
  int chain_sites = 0;

  int dim() const noexcept { return chain_sites + 2; }
  static constexpr int probe(int which) noexcept { return which; }
  // 1-based chain site -> configuration index
  static constexpr int site(int j) noexcept { return j + 1; }
  std::vector<int> probes() const { return {0, 1}; }
  std::vector<int> chain() const;
};

// H = 1/2 p^T p + 1/2 x^T V x with unit masses.
struct QuadraticForm {
  Matrix V;
  ModeLayout layout;

  int dim() const noexcept { return static_cast<int>(V.rows()); }
};

inline constexpr double kDefaultStabilityTolerance = 1e-10;

// Squared chain normal-mode frequencies Omega_0^2 + 4 g sin^2(pi j / 2(M+1)),
// j = 1..M, in ascending order.
Vector chain_dispersion(int M, double omega0, double g);

// Orthogonal sine-mode matrix: O_jk = sqrt(2/(M+1)) sin(pi j k/(M+1)).
Matrix sine_modes(int M);

Matrix build_chain_potential(const NetworkConfig& cfg);

// Normal modes of the isolated network: omega_sq(j) with eigenvector
// column j of `vectors` (rows are sites). For the chain these are the
// closed-form dispersion and sine modes; a custom coupling matrix is
// diagonalized numerically.
struct ChainModes {
  Vector omega_sq;
  Matrix vectors;
};

ChainModes chain_modes(const NetworkConfig& cfg);

QuadraticForm assemble_full_potential(const NetworkConfig& cfg,
                                      const ProbePair& probes);

// Returns the smallest eigenvalue of V. Throws InstabilityError when it does
// not exceed `tolerance`.
double check_stability(const QuadraticForm& qf,
                       double tolerance = kDefaultStabilityTolerance);

}  // namespace chainsync
