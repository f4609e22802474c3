#include "chainsync/gaussian_dynamics.hpp"

#include "chainsync/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace chainsync {

namespace {

// sin(nu t) / nu with its nu -> 0 limit.
double sin_over(double nu, double s, double t) { return nu > 0.0 ? s / nu : t; }

void check_probe_cov(const Eigen::Matrix2d& c, int which) {
  const double det = c.determinant();
  if (std::abs(c(0, 1) - c(1, 0)) > 1e-12 * std::max(1.0, c.cwiseAbs().maxCoeff()) ||
      !(c(0, 0) > 0.0) || !(c(1, 1) > 0.0) || !(det >= 0.0) ||
      std::sqrt(det) < 0.5 - 1e-12) {
    std::ostringstream msg;
    msg << "probe " << which + 1 << " covariance violates the uncertainty principle "
        << "(symplectic eigenvalue " << std::sqrt(std::max(det, 0.0)) << " < 1/2)";
    throw UncertaintyViolation(msg.str());
  }
}

}  // namespace

Matrix symplectic_form(int modes) {
  Matrix J = Matrix::Zero(2 * modes, 2 * modes);
  J.topRightCorner(modes, modes).setIdentity();
  J.bottomLeftCorner(modes, modes) = -Matrix::Identity(modes, modes);
  return J;
}

Matrix chain_ground_state(const NetworkConfig& cfg) {
  const ChainModes cm = chain_modes(cfg);
  const int M = cfg.M;
  Vector w(M);
  for (int j = 0; j < M; ++j) {
    if (!(cm.omega_sq(j) > 0.0))
      throw ZeroModeError("network has a zero mode; its ground state is not normalizable");
    w(j) = std::sqrt(cm.omega_sq(j));
  }
  const Matrix& O = cm.vectors;
  Matrix cov = Matrix::Zero(2 * M, 2 * M);
  cov.topLeftCorner(M, M) = 0.5 * O * w.cwiseInverse().asDiagonal() * O.transpose();
  cov.bottomRightCorner(M, M) = 0.5 * O * w.asDiagonal() * O.transpose();
  return cov;
}

Eigen::Matrix2d squeezed_vacuum_local(double omega, double r, Quadrature squeezed) {
  if (!(omega > 0.0)) throw std::invalid_argument("oscillator frequency must be > 0");
  const double sx = squeezed == Quadrature::kPosition ? std::exp(-2.0 * r) : std::exp(2.0 * r);
  Eigen::Matrix2d c = Eigen::Matrix2d::Zero();
  c(0, 0) = sx / (2.0 * omega);
  c(1, 1) = omega / (2.0 * sx);
  return c;
}

GaussianState initial_composite_state(const std::array<ProbeState, 2>& probes,
                                      const NetworkConfig& cfg) {
  for (int i = 0; i < 2; ++i) check_probe_cov(probes[static_cast<std::size_t>(i)].cov, i);
  const int M = cfg.M;
  const int N = M + 2;
  GaussianState s;
  s.mean = Vector::Zero(2 * N);
  s.cov = Matrix::Zero(2 * N, 2 * N);
  for (int i = 0; i < 2; ++i) {
    const ProbeState& p = probes[static_cast<std::size_t>(i)];
    const int a = ModeLayout::probe(i);
    s.mean(a) = p.x;
    s.mean(N + a) = p.p;
    s.cov(a, a) = p.cov(0, 0);
    s.cov(a, N + a) = p.cov(0, 1);
    s.cov(N + a, a) = p.cov(1, 0);
    s.cov(N + a, N + a) = p.cov(1, 1);
  }
  const Matrix chain = chain_ground_state(cfg);
  const int c0 = ModeLayout::site(1);
  s.cov.block(c0, c0, M, M) = chain.topLeftCorner(M, M);
  s.cov.block(N + c0, N + c0, M, M) = chain.bottomRightCorner(M, M);
  s.cov.block(c0, N + c0, M, M) = chain.topRightCorner(M, M);
  s.cov.block(N + c0, c0, M, M) = chain.bottomLeftCorner(M, M);
  return s;
}

NormalModes::NormalModes(const QuadraticForm& qf, double tolerance) : qf_(qf) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(qf.V);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition of the potential failed");
  const double lo = es.eigenvalues()(0);
  if (!(lo > tolerance)) {
    std::ostringstream msg;
    msg << "potential is not positive definite: smallest eigenvalue " << lo;
    throw InstabilityError(lo, msg.str());
  }
  O_ = es.eigenvectors();
  nu_ = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
}

SymplecticMap NormalModes::map(double t) const {
  const int N = dim();
  Vector c(N), s_nu(N), nu_s(N);
  for (int k = 0; k < N; ++k) {
    const double s = std::sin(nu_(k) * t);
    c(k) = std::cos(nu_(k) * t);
    s_nu(k) = sin_over(nu_(k), s, t);
    nu_s(k) = nu_(k) * s;
  }
  SymplecticMap m;
  m.t = t;
  m.S.resize(2 * N, 2 * N);
  const Matrix cc = O_ * c.asDiagonal() * O_.transpose();
  m.S.topLeftCorner(N, N) = cc;
  m.S.bottomRightCorner(N, N) = cc;
  m.S.topRightCorner(N, N) = O_ * s_nu.asDiagonal() * O_.transpose();
  m.S.bottomLeftCorner(N, N) = -(O_ * nu_s.asDiagonal() * O_.transpose());
  return m;
}

Vector NormalModes::to_normal(const Vector& r) const {
  const int N = dim();
  Vector out(2 * N);
  out.head(N) = O_.transpose() * r.head(N);
  out.tail(N) = O_.transpose() * r.tail(N);
  return out;
}

Matrix NormalModes::to_normal(const Matrix& cov) const {
  const int N = dim();
  Matrix T = Matrix::Zero(2 * N, 2 * N);
  T.topLeftCorner(N, N) = O_.transpose();
  T.bottomRightCorner(N, N) = O_.transpose();
  Matrix out = T * cov * T.transpose();
  return 0.5 * (out + out.transpose());
}

SymplecticMap propagator(const QuadraticForm& qf, double t) { return NormalModes(qf).map(t); }

GaussianState evolve(const GaussianState& state, const SymplecticMap& map) {
  if (map.S.rows() != state.mean.size())
    throw std::invalid_argument("map and state dimensions differ");
  GaussianState out;
  out.mean = map.S * state.mean;
  Matrix c = map.S * state.cov * map.S.transpose();
  out.cov = 0.5 * (c + c.transpose());
  return out;
}

GaussianState rk4_reference(const GaussianState& state, const QuadraticForm& qf,
                            double horizon, double dt) {
  const int N = qf.dim();
  if (state.mean.size() != 2 * N) throw std::invalid_argument("state and form dimensions differ");
  Eigen::SelfAdjointEigenSolver<Matrix> es(qf.V, Eigen::EigenvaluesOnly);
  const double nu_max = std::sqrt(std::max(es.eigenvalues()(N - 1), 0.0));
  if (!(dt > 0.0) || (nu_max > 0.0 && dt > (2.0 * std::numbers::pi / nu_max) / 20.0))
    throw StepTooLarge("RK4 step does not resolve the fastest mode");

  Matrix A = Matrix::Zero(2 * N, 2 * N);
  A.topRightCorner(N, N).setIdentity();
  A.bottomLeftCorner(N, N) = -qf.V;
  const Matrix At = A.transpose();

  const long steps = std::max<long>(1, static_cast<long>(std::ceil(horizon / dt - 1e-9)));
  const double h = horizon / static_cast<double>(steps);

  Vector m = state.mean;
  Matrix c = state.cov;
  auto lyap = [&](const Matrix& x) -> Matrix { return A * x + x * At; };
  for (long i = 0; i < steps; ++i) {
    const Vector k1 = A * m;
    const Vector k2 = A * (m + 0.5 * h * k1);
    const Vector k3 = A * (m + 0.5 * h * k2);
    const Vector k4 = A * (m + h * k3);
    m += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const Matrix l1 = lyap(c);
    const Matrix l2 = lyap(c + 0.5 * h * l1);
    const Matrix l3 = lyap(c + 0.5 * h * l2);
    const Matrix l4 = lyap(c + h * l3);
    c += (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
  }
  return {m, 0.5 * (c + c.transpose())};
}

GaussianState reduce(const GaussianState& state, std::span<const int> modes) {
  const int N = state.modes();
  const int n = static_cast<int>(modes.size());
  std::vector<int> idx(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    const int a = modes[static_cast<std::size_t>(i)];
    if (a < 0 || a >= N) throw std::out_of_range("mode index out of range");
    idx[static_cast<std::size_t>(i)] = a;
    idx[static_cast<std::size_t>(n + i)] = N + a;
  }
  GaussianState out;
  out.mean.resize(2 * n);
  out.cov.resize(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    out.mean(i) = state.mean(idx[static_cast<std::size_t>(i)]);
    for (int j = 0; j < 2 * n; ++j)
      out.cov(i, j) = state.cov(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  return out;
}

double energy(const GaussianState& state, const QuadraticForm& qf) {
  const int N = qf.dim();
  const auto x = state.mean.head(N);
  const auto p = state.mean.tail(N);
  const double classical = 0.5 * (p.squaredNorm() + x.dot(qf.V * x));
  const double fluct =
      0.5 * (state.cov.bottomRightCorner(N, N).trace() +
             (qf.V * state.cov.topLeftCorner(N, N)).trace());
  return classical + fluct;
}

double uncertainty_margin(const Matrix& cov) {
  const int n = static_cast<int>(cov.rows() / 2);
  const Matrix J = symplectic_form(n);
  Eigen::MatrixXcd H = cov.cast<std::complex<double>>();
  H += std::complex<double>(0.0, 0.5) * J.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

ModalTrajectory::ModalTrajectory(const NormalModes& modes, const GaussianState& initial)
    : modes_(&modes),
      mean_n_(modes.to_normal(initial.mean)),
      cov_n_(modes.to_normal(initial.cov)) {
  if (initial.modes() != modes.dim())
    throw std::invalid_argument("state and normal modes differ in dimension");
}

std::pair<double, double> ModalTrajectory::mean_at(int site, double t) const {
  const int N = modes_->dim();
  const Matrix& O = modes_->vectors();
  const Vector& nu = modes_->frequencies();
  double x = 0.0, p = 0.0;
  for (int k = 0; k < N; ++k) {
    const double c = std::cos(nu(k) * t), s = std::sin(nu(k) * t);
    const double a = mean_n_(k), b = mean_n_(N + k);
    x += O(site, k) * (c * a + sin_over(nu(k), s, t) * b);
    p += O(site, k) * (-nu(k) * s * a + c * b);
  }
  return {x, p};
}

Matrix ModalTrajectory::means(std::span<const int> sites, std::span<const double> times) const {
  const int N = modes_->dim();
  const int ns = static_cast<int>(sites.size());
  const Matrix& O = modes_->vectors();
  const Vector& nu = modes_->frequencies();
  // Pre-project the initial amplitudes onto each requested site.
  Matrix xa(ns, N), xb(ns, N);
  for (int i = 0; i < ns; ++i)
    for (int k = 0; k < N; ++k) {
      xa(i, k) = O(sites[static_cast<std::size_t>(i)], k) * mean_n_(k);
      xb(i, k) = O(sites[static_cast<std::size_t>(i)], k) * mean_n_(N + k);
    }
  Matrix out(static_cast<Eigen::Index>(times.size()), 2 * ns);
  Vector c(N), s(N);
  for (std::size_t r = 0; r < times.size(); ++r) {
    const double t = times[r];
    for (int k = 0; k < N; ++k) {
      c(k) = std::cos(nu(k) * t);
      s(k) = std::sin(nu(k) * t);
    }
    for (int i = 0; i < ns; ++i) {
      double x = 0.0, p = 0.0;
      for (int k = 0; k < N; ++k) {
        x += c(k) * xa(i, k) + sin_over(nu(k), s(k), t) * xb(i, k);
        p += -nu(k) * s(k) * xa(i, k) + c(k) * xb(i, k);
      }
      out(static_cast<Eigen::Index>(r), i) = x;
      out(static_cast<Eigen::Index>(r), ns + i) = p;
    }
  }
  return out;
}

std::vector<Matrix> ModalTrajectory::covariances(std::span<const int> sites,
                                                 std::span<const double> times) const {
  constexpr std::size_t kBatch = 64;
  const int N = modes_->dim();
  const int ns = static_cast<int>(sites.size());
  const int rows = 2 * ns;
  const Matrix& O = modes_->vectors();
  const Vector& nu = modes_->frequencies();

  std::vector<Matrix> out;
  out.reserve(times.size());
  for (std::size_t b0 = 0; b0 < times.size(); b0 += kBatch) {
    const std::size_t nb = std::min(kBatch, times.size() - b0);
    Matrix W(static_cast<Eigen::Index>(nb) * rows, 2 * N);
    for (std::size_t r = 0; r < nb; ++r) {
      const double t = times[b0 + r];
      const Eigen::Index base = static_cast<Eigen::Index>(r) * rows;
      for (int k = 0; k < N; ++k) {
        const double c = std::cos(nu(k) * t), s = std::sin(nu(k) * t);
        const double sn = sin_over(nu(k), s, t);
        for (int i = 0; i < ns; ++i) {
          const double o = O(sites[static_cast<std::size_t>(i)], k);
          W(base + i, k) = o * c;
          W(base + i, N + k) = o * sn;
          W(base + ns + i, k) = -o * nu(k) * s;
          W(base + ns + i, N + k) = o * c;
        }
      }
    }
    const Matrix X = W * cov_n_;
    for (std::size_t r = 0; r < nb; ++r) {
      const Eigen::Index base = static_cast<Eigen::Index>(r) * rows;
      Matrix c = X.middleRows(base, rows) * W.middleRows(base, rows).transpose();
      out.emplace_back(0.5 * (c + c.transpose()));
    }
  }
  return out;
}

}  // namespace chainsync
