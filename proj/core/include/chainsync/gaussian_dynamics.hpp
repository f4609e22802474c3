#pragma once

#include "chainsync/lattice_model.hpp"

#include <Eigen/Dense>

#include <array>
#include <span>
#include <vector>

namespace chainsync {

// Phase-space vectors are ordered (x_0..x_{N-1}, p_0..p_{N-1}).
// J = [[0, I], [-I, 0]].
Matrix symplectic_form(int modes);

// sigma_ab = 1/2 <{r_a, r_b}> - <r_a><r_b>, hbar = 1, vacuum eigenvalue 1/2.
struct GaussianState {
  Vector mean;
  Matrix cov;

  int modes() const noexcept { return static_cast<int>(mean.size() / 2); }
};

struct SymplecticMap {
  Matrix S;
  double t = 0.0;
};

enum class Quadrature { kPosition, kMomentum };

// Ground-state covariance (2M x 2M) of the isolated network.
// Throws ZeroModeError if the network has a zero mode.
Matrix chain_ground_state(const NetworkConfig& cfg);

// Squeezed vacuum of a local oscillator of frequency omega. With the default
// position squeezing: diag(e^{-2r} / (2 omega), omega e^{2r} / 2).
Eigen::Matrix2d squeezed_vacuum_local(double omega, double r,
                                      Quadrature squeezed = Quadrature::kPosition);

// Initial data of one probe; cov is (x, p) ordered.
struct ProbeState {
  double x = 0.0;
  double p = 0.0;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Identity() * 0.5;
};

// Product of the two probe states and the network ground state. Throws
// UncertaintyViolation if a probe covariance is unphysical.
GaussianState initial_composite_state(const std::array<ProbeState, 2>& probes,
                                      const NetworkConfig& cfg);

// Eigendecomposition V = O diag(nu^2) O^T of a stable quadratic form, shared
// by every propagation routine.
class NormalModes {
 public:
  // Throws InstabilityError when the smallest eigenvalue is <= tolerance.
  explicit NormalModes(const QuadraticForm& qf,
                       double tolerance = kDefaultStabilityTolerance);

  int dim() const noexcept { return static_cast<int>(nu_.size()); }
  const Matrix& vectors() const noexcept { return O_; }
  const Vector& frequencies() const noexcept { return nu_; }
  const QuadraticForm& form() const noexcept { return qf_; }

  SymplecticMap map(double t) const;

  // Rotates a phase-space vector / covariance into normal coordinates.
  Vector to_normal(const Vector& r) const;
  Matrix to_normal(const Matrix& cov) const;

 private:
  QuadraticForm qf_;
  Matrix O_;
  Vector nu_;
};

SymplecticMap propagator(const QuadraticForm& qf, double t);

GaussianState evolve(const GaussianState& state, const SymplecticMap& map);

// Classical RK4 integration of the mean (Hamilton equations) and of the
// covariance (Lyapunov equation). Test oracle only. Throws StepTooLarge if
// dt > (2 pi / nu_max) / 20.
GaussianState rk4_reference(const GaussianState& state, const QuadraticForm& qf,
                            double horizon, double dt);

// Marginal over `modes` (configuration indices). Output keeps the requested
// order: (x_{modes}, p_{modes}).
GaussianState reduce(const GaussianState& state, std::span<const int> modes);

// <H> = 1/2 (p^T p + x^T V x) + 1/2 Tr(sigma_pp + V sigma_xx).
double energy(const GaussianState& state, const QuadraticForm& qf);

// Smallest eigenvalue of the Hermitian matrix cov + (i/2) J; non-negative
// exactly when the covariance satisfies the uncertainty principle.
double uncertainty_margin(const Matrix& cov);

// Evaluates selected observables of a Gaussian state at arbitrary times
// directly in normal coordinates, where the flow is a set of independent
// rotations. Costs O(N) per mean sample and one (4B x 2N)(2N x 2N) product
// per batch of B subsystem covariances, instead of conjugating the full
// covariance with a 2N x 2N map at every step.
class ModalTrajectory {
 public:
  ModalTrajectory(const NormalModes& modes, const GaussianState& initial);

  // Means (x, p) of configuration index `site` at time t.
  std::pair<double, double> mean_at(int site, double t) const;

  // Means of several sites at every time in `times`: row i -> time i,
  // columns (x_{sites}, p_{sites}).
  Matrix means(std::span<const int> sites, std::span<const double> times) const;

  // Covariance (x_{sites}, p_{sites}) at each time.
  std::vector<Matrix> covariances(std::span<const int> sites,
                                  std::span<const double> times) const;

 private:
  const NormalModes* modes_;
  Vector mean_n_;  // initial mean in normal coordinates
  Matrix cov_n_;   // initial covariance in normal coordinates
};

}  // namespace chainsync
