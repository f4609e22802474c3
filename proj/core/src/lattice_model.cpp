#include "chainsync/lattice_model.hpp"

#include "chainsync/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace chainsync {

void NetworkConfig::validate() const {
  if (M < 2) throw RangeError("M must be >= 2, got " + std::to_string(M));
  if (!(omega0 >= 0.0)) throw RangeError("omega0 must be >= 0");
  if (!(g > 0.0)) throw RangeError("g must be > 0");
  if (coupling_matrix) {
    const Matrix& A = *coupling_matrix;
    if (A.rows() != M || A.cols() != M)
      throw RangeError("coupling_matrix must be M x M");
    for (int j = 0; j < M; ++j) {
      if (A(j, j) != 0.0) throw RangeError("coupling_matrix diagonal must be zero");
      for (int k = 0; k < M; ++k) {
        if (A(j, k) < 0.0) throw RangeError("coupling_matrix entries must be >= 0");
        if (A(j, k) != A(k, j)) throw RangeError("coupling_matrix must be symmetric");
      }
    }
  }
}

void ProbePair::validate(int M) const {
  if (!(omega1 > 0.0) || !(omega2 > 0.0))
    throw RangeError("probe frequencies must be > 0");
  if (!(lambda >= 0.0)) throw RangeError("lambda must be >= 0");
  if (site_m < 1 || site_m > M)
    throw RangeError("site_m must lie in [1, " + std::to_string(M) + "], got " +
                     std::to_string(site_m));
  if (site_n < 1 || site_n > M)
    throw RangeError("site_n must lie in [1, " + std::to_string(M) + "], got " +
                     std::to_string(site_n));
  if (sign2 != 1 && sign2 != -1) throw RangeError("sign2 must be +1 or -1");
}

std::vector<int> ModeLayout::chain() const {
  std::vector<int> out(static_cast<std::size_t>(chain_sites));
  for (int j = 1; j <= chain_sites; ++j) out[static_cast<std::size_t>(j - 1)] = site(j);
  return out;
}

Vector chain_dispersion(int M, double omega0, double g) {
  Vector w2(M);
  const double den = 2.0 * (M + 1);
  for (int j = 1; j <= M; ++j) {
    const double s = std::sin(std::numbers::pi * j / den);
    w2(j - 1) = omega0 * omega0 + 4.0 * g * s * s;
  }
  return w2;
}

Matrix sine_modes(int M) {
  Matrix O(M, M);
  const double norm = std::sqrt(2.0 / (M + 1));
  for (int j = 1; j <= M; ++j)
    for (int k = 1; k <= M; ++k)
      O(j - 1, k - 1) = norm * std::sin(std::numbers::pi * j * k / (M + 1));
  return O;
}

Matrix build_chain_potential(const NetworkConfig& cfg) {
  cfg.validate();
  const int M = cfg.M;
  const double w02 = cfg.omega0 * cfg.omega0;
  Matrix V = Matrix::Zero(M, M);
  if (cfg.coupling_matrix) {
    const Matrix& A = *cfg.coupling_matrix;
    for (int j = 0; j < M; ++j) {
      V(j, j) = w02 + A.row(j).sum();
      for (int k = 0; k < M; ++k)
        if (k != j) V(j, k) = -A(j, k);
    }
    return V;
  }
  // Fixed ends: X_0 = X_{M+1} = 0, so every site sees two springs.
  for (int j = 0; j < M; ++j) {
    V(j, j) = w02 + 2.0 * cfg.g;
    if (j + 1 < M) {
      V(j, j + 1) = -cfg.g;
      V(j + 1, j) = -cfg.g;
    }
  }
  return V;
}

ChainModes chain_modes(const NetworkConfig& cfg) {
  cfg.validate();
  if (!cfg.coupling_matrix) return {chain_dispersion(cfg.M, cfg.omega0, cfg.g), sine_modes(cfg.M)};
  Eigen::SelfAdjointEigenSolver<Matrix> es(build_chain_potential(cfg));
  return {es.eigenvalues(), es.eigenvectors()};
}

QuadraticForm assemble_full_potential(const NetworkConfig& cfg,
                                      const ProbePair& probes) {
  cfg.validate();
  probes.validate(cfg.M);

  QuadraticForm qf;
  qf.layout.chain_sites = cfg.M;
  const int N = qf.layout.dim();
  qf.V = Matrix::Zero(N, N);

  const int p1 = ModeLayout::probe(0);
  const int p2 = ModeLayout::probe(1);
  qf.V(p1, p1) = probes.omega1 * probes.omega1 + probes.lambda;
  qf.V(p2, p2) = probes.omega2 * probes.omega2 + probes.lambda;
  qf.V(p1, p2) = -probes.lambda;
  qf.V(p2, p1) = -probes.lambda;

  qf.V.bottomRightCorner(cfg.M, cfg.M) = build_chain_potential(cfg);

  // K x1 X_m + sign2 K x2 X_n, no counter-term.
  const int cm = ModeLayout::site(probes.site_m);
  const int cn = ModeLayout::site(probes.site_n);
  qf.V(p1, cm) += probes.K;
  qf.V(cm, p1) += probes.K;
  qf.V(p2, cn) += probes.sign2 * probes.K;
  qf.V(cn, p2) += probes.sign2 * probes.K;

  qf.V = 0.5 * (qf.V + qf.V.transpose()).eval();
  return qf;
}

double check_stability(const QuadraticForm& qf, double tolerance) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(qf.V, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  if (!(lo > tolerance)) {
    std::ostringstream msg;
    msg << "potential is not positive definite: smallest eigenvalue " << lo
        << " <= " << tolerance << " (coupling K too strong for the chosen frequencies?)";
    throw InstabilityError(lo, msg.str());
  }
  return lo;
}

}  // namespace chainsync
