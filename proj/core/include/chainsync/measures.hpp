#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace chainsync {

inline constexpr int kMinWindowSamples = 8;
inline constexpr double kDegenerateVariance = 1e-30;

// Pearson correlation of two equally long sample windows. Throws
// DegenerateWindow if either window has (sum of squared deviations) below
// kDegenerateVariance, std::invalid_argument for fewer than
// kMinWindowSamples samples or mismatched lengths.
double pearson(std::span<const double> f, std::span<const double> g);

// Sliding-window synchronization indicator C(t, window) of f(t) against
// g(t + delay). values[i] is empty where the window was degenerate.
struct SyncSeries {
  std::vector<double> times;  // window start times
  std::vector<std::optional<double>> values;
  double window = 0.0;
  double stride = 0.0;
  double delay = 0.0;

  // Defined values of windows lying entirely inside [t_lo, t_hi].
  std::vector<double> values_within(double t_lo, double t_hi) const;
};

inline constexpr double kDefaultSyncWindow = 20.0;

// Both series are sampled on t_k = k dt. `delay` must be a multiple of dt;
// windows that would run past either series are dropped.
SyncSeries sync_series(std::span<const double> f, std::span<const double> g, double dt,
                       double window, double stride, double delay = 0.0);

struct DelayScan {
  double delay = 0.0;
  double C = 0.0;
};

// Scans delays over [-max_delay, max_delay] in steps of `delay_step`
// (rounded to the sampling grid; 0 means dt) for the single window starting
// at `start` and returns the delay maximizing |C|. Ties go to the delay of
// smallest magnitude (zero first, then negative before positive).
DelayScan best_delay(std::span<const double> f, std::span<const double> g, double dt,
                     double start, double window, double max_delay,
                     double delay_step = 0.0);

// Angular frequency from the mean spacing of sign changes: pi / (mean
// half-period). Crossing times are linearly interpolated. Throws NoCrossings
// if fewer than two sign changes occur.
double dominant_frequency(std::span<const double> f, double dt);

inline constexpr double kPhysicalTolerance = 1e-6;

// Symplectic eigenvalues of an (x..., p...) ordered covariance, ascending.
// With `require_physical`, throws NonPhysical when one falls below
// 1/2 - kPhysicalTolerance.
Eigen::VectorXd symplectic_spectrum(const Eigen::MatrixXd& cov, bool require_physical = true);

// Von Neumann entropy sum_k g(nu_k),
// g(nu) = (nu + 1/2) ln(nu + 1/2) - (nu - 1/2) ln(nu - 1/2).
double vn_entropy(const Eigen::MatrixXd& cov);

// Two-mode (x1, x2, p1, p2) covariance helpers.
Eigen::Matrix2d mode_marginal(const Eigen::Matrix4d& cov, int mode);
double mutual_information(const Eigen::Matrix4d& cov);

// E = max(0, -ln(2 nu~)) with nu~ the smallest symplectic eigenvalue of the
// partial transpose (p2 -> -p2).
double log_negativity(const Eigen::Matrix4d& cov);

struct CorrelationReport {
  std::vector<double> times;
  std::vector<double> E;
  std::vector<double> MI;
  std::vector<double> S1;
  std::vector<double> S2;
  std::vector<double> S12;
};

CorrelationReport correlation_report(std::span<const double> times,
                                     std::span<const Eigen::Matrix4d> probe_covs);

}  // namespace chainsync
