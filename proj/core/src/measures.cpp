#include "chainsync/measures.hpp"

#include "chainsync/errors.hpp"
#include "chainsync/gaussian_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace chainsync {

double pearson(std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size()) throw std::invalid_argument("pearson: series lengths differ");
  if (f.size() < static_cast<std::size_t>(kMinWindowSamples))
    throw std::invalid_argument("pearson: window needs at least 8 samples");
  const double n = static_cast<double>(f.size());
  double mf = 0.0, mg = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    mf += f[i];
    mg += g[i];
  }
  mf /= n;
  mg /= n;
  double sfg = 0.0, sff = 0.0, sgg = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = f[i] - mf, b = g[i] - mg;
    sfg += a * b;
    sff += a * a;
    sgg += b * b;
  }
  if (sff < kDegenerateVariance || sgg < kDegenerateVariance)
    throw DegenerateWindow("pearson: constant signal in window");
  return sfg / std::sqrt(sff * sgg);
}

std::vector<double> SyncSeries::values_within(double t_lo, double t_hi) const {
  constexpr double kSlack = 1e-9;
  std::vector<double> out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!values[i]) continue;
    if (times[i] + kSlack >= t_lo && times[i] + window <= t_hi + kSlack) out.push_back(*values[i]);
  }
  return out;
}

namespace {

long steps_of(double span, double dt, const char* what, bool exact) {
  const double q = span / dt;
  const long n = std::lround(q);
  if (exact && std::abs(q - static_cast<double>(n)) > 1e-6)
    throw std::invalid_argument(std::string(what) + " must be a multiple of the sampling step");
  return n;
}

}  // namespace

SyncSeries sync_series(std::span<const double> f, std::span<const double> g, double dt,
                       double window, double stride, double delay) {
  if (!(dt > 0.0) || !(window > 0.0) || !(stride > 0.0))
    throw std::invalid_argument("sync_series: dt, window and stride must be > 0");
  const long w = steps_of(window, dt, "window", false);
  const long s = std::max(1L, steps_of(stride, dt, "stride", false));
  const long d = steps_of(delay, dt, "delay", true);

  SyncSeries out;
  out.window = static_cast<double>(w) * dt;
  out.stride = static_cast<double>(s) * dt;
  out.delay = static_cast<double>(d) * dt;

  const long nf = static_cast<long>(f.size());
  const long ng = static_cast<long>(g.size());
  const long start = std::max(0L, -d);
  for (long i = start; i + w <= nf && i + d + w <= ng; i += s) {
    out.times.push_back(static_cast<double>(i) * dt);
    try {
      out.values.emplace_back(pearson(f.subspan(static_cast<std::size_t>(i), static_cast<std::size_t>(w)),
                                      g.subspan(static_cast<std::size_t>(i + d), static_cast<std::size_t>(w))));
    } catch (const DegenerateWindow&) {
      out.values.emplace_back(std::nullopt);
    }
  }
  return out;
}

DelayScan best_delay(std::span<const double> f, std::span<const double> g, double dt,
                     double start, double window, double max_delay, double delay_step) {
  const long i = steps_of(start, dt, "start", false);
  const long w = steps_of(window, dt, "window", false);
  const long dmax = steps_of(max_delay, dt, "max_delay", false);
  const long dstep = delay_step > 0.0 ? std::max(1L, steps_of(delay_step, dt, "delay_step", false)) : 1L;
  const long nf = static_cast<long>(f.size()), ng = static_cast<long>(g.size());
  if (i < 0 || i + w > nf) throw std::invalid_argument("best_delay: window outside series");

  DelayScan best{0.0, 0.0};
  bool found = false;
  double best_abs = -1.0;
  auto try_delay = [&](long d) {
    if (i + d < 0 || i + d + w > ng) return;
    double c;
    try {
      c = pearson(f.subspan(static_cast<std::size_t>(i), static_cast<std::size_t>(w)),
                  g.subspan(static_cast<std::size_t>(i + d), static_cast<std::size_t>(w)));
    } catch (const DegenerateWindow&) {
      return;
    }
    if (std::abs(c) > best_abs) {
      best_abs = std::abs(c);
      best = {static_cast<double>(d) * dt, c};
      found = true;
    }
  };
  try_delay(0);
  for (long m = dstep; m <= dmax; m += dstep) {
    try_delay(-m);
    try_delay(m);
  }
  if (!found) throw DegenerateWindow("best_delay: no admissible delay");
  return best;
}

double dominant_frequency(std::span<const double> f, double dt) {
  std::vector<double> crossings;
  for (std::size_t k = 0; k + 1 < f.size(); ++k) {
    const double a = f[k], b = f[k + 1];
    if ((a < 0.0) != (b < 0.0)) {
      const double frac = (a == b) ? 0.0 : a / (a - b);
      crossings.push_back((static_cast<double>(k) + frac) * dt);
    }
  }
  if (crossings.size() < 2) throw NoCrossings("dominant_frequency: signal does not oscillate");
  const double half = (crossings.back() - crossings.front()) /
                      static_cast<double>(crossings.size() - 1);
  return std::acos(-1.0) / half;
}

Eigen::VectorXd symplectic_spectrum(const Eigen::MatrixXd& cov, bool require_physical) {
  const int n2 = static_cast<int>(cov.rows());
  if (n2 % 2 != 0 || cov.cols() != n2)
    throw std::invalid_argument("symplectic_spectrum: covariance must be 2n x 2n");
  const int n = n2 / 2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (cov + cov.transpose()));
  if (es.eigenvalues()(0) <= 0.0)
    throw NonPhysical("symplectic_spectrum: covariance is not positive definite");
  const Eigen::MatrixXd root = es.operatorSqrt();
  const Eigen::MatrixXd J = symplectic_form(n);
  // i sqrt(s) J sqrt(s) is Hermitian with eigenvalues +-nu_k.
  const Eigen::MatrixXcd H =
      std::complex<double>(0.0, 1.0) * (root * J * root).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(H, Eigen::EigenvaluesOnly);
  Eigen::VectorXd nu = hs.eigenvalues().tail(n);
  if (require_physical && nu(0) < 0.5 - kPhysicalTolerance) {
    std::ostringstream msg;
    msg << "symplectic eigenvalue " << nu(0) << " below the vacuum value 1/2";
    throw NonPhysical(msg.str());
  }
  return nu;
}

namespace {

double entropy_term(double nu) {
  const double up = nu + 0.5;
  const double down = nu - 0.5;
  double s = up * std::log(up);
  if (down > 1e-15) s -= down * std::log(down);
  return s;
}

}  // namespace

double vn_entropy(const Eigen::MatrixXd& cov) {
  const Eigen::VectorXd nu = symplectic_spectrum(cov);
  double s = 0.0;
  for (int k = 0; k < nu.size(); ++k) s += entropy_term(std::max(nu(k), 0.5));
  return s;
}

Eigen::Matrix2d mode_marginal(const Eigen::Matrix4d& cov, int mode) {
  Eigen::Matrix2d m;
  m << cov(mode, mode), cov(mode, 2 + mode), cov(2 + mode, mode), cov(2 + mode, 2 + mode);
  return m;
}

double mutual_information(const Eigen::Matrix4d& cov) {
  return vn_entropy(mode_marginal(cov, 0)) + vn_entropy(mode_marginal(cov, 1)) - vn_entropy(cov);
}

double log_negativity(const Eigen::Matrix4d& cov) {
  // Partial transposition of mode 2 flips its momentum.
  const Eigen::Vector4d flip(1.0, 1.0, 1.0, -1.0);
  const Eigen::Matrix4d pt = flip.asDiagonal() * cov * flip.asDiagonal();
  const double nu = symplectic_spectrum(pt, false)(0);
  return std::max(0.0, -std::log(2.0 * nu));
}

CorrelationReport correlation_report(std::span<const double> times,
                                     std::span<const Eigen::Matrix4d> probe_covs) {
  if (times.size() != probe_covs.size())
    throw std::invalid_argument("correlation_report: one covariance per time required");
  CorrelationReport r;
  r.times.assign(times.begin(), times.end());
  for (const Eigen::Matrix4d& c : probe_covs) {
    const double s1 = vn_entropy(mode_marginal(c, 0));
    const double s2 = vn_entropy(mode_marginal(c, 1));
    const double s12 = vn_entropy(c);
    r.S1.push_back(s1);
    r.S2.push_back(s2);
    r.S12.push_back(s12);
    r.MI.push_back(s1 + s2 - s12);
    r.E.push_back(log_negativity(c));
  }
  return r;
}

}  // namespace chainsync
