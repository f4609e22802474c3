#include "chainsync/scenario.hpp"

#include "chainsync/errors.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#ifndef CHAINSYNC_VERSION
#define CHAINSYNC_VERSION "0.0.0"
#endif

namespace chainsync {

namespace fs = std::filesystem;

std::string_view version() { return CHAINSYNC_VERSION; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

GaussianState initial_state(const ScenarioSpec& spec) {
  std::array<ProbeState, 2> probes;
  probes[0] = {spec.initial.x1, spec.initial.p1,
               squeezed_vacuum_local(spec.probes.omega1, spec.initial.r1, spec.initial.squeeze)};
  probes[1] = {spec.initial.x2, spec.initial.p2,
               squeezed_vacuum_local(spec.probes.omega2, spec.initial.r2, spec.initial.squeeze)};
  return initial_composite_state(probes, spec.network);
}

namespace {

std::vector<double> grid(double horizon, double dt) {
  const long n = std::lround(horizon / dt);
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (long k = 0; k <= n; ++k) t[static_cast<std::size_t>(k)] = static_cast<double>(k) * dt;
  return t;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double band_mean(const std::vector<double>& t, const std::vector<double>& v, double lo, double hi) {
  std::vector<double> sel;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= lo && t[i] <= hi) sel.push_back(v[i]);
  return mean_of(sel);
}

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

ScenarioResult simulate(const ScenarioSpec& spec) {
  spec.validate();
  ScenarioResult r;
  r.spec = spec;
  r.tau_R = 2.0 * spec.network.M / spec.probes.omega1;

  const QuadraticForm qf = assemble_full_potential(spec.network, spec.probes);
  const NormalModes nm(qf, spec.measure.stability_tol);
  r.min_eigenvalue = nm.frequencies()(0) * nm.frequencies()(0);

  const GaussianState s0 = initial_state(spec);
  const ModalTrajectory traj(nm, s0);
  const std::vector<int> probes = qf.layout.probes();

  r.times = grid(spec.run.horizon, spec.run.dt);
  const Matrix m = traj.means(probes, r.times);
  const auto col = [&m](int c) {
    std::vector<double> v(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) v[static_cast<std::size_t>(i)] = m(i, c);
    return v;
  };
  r.x1 = col(0);
  r.x2 = col(1);
  r.p1 = col(2);
  r.p2 = col(3);

  r.modes = system_modes(spec.network, spec.probes);
  const double c = std::cos(r.modes.theta), s = std::sin(r.modes.theta);
  r.q1.resize(r.times.size());
  r.q2.resize(r.times.size());
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    r.q1[i] = c * r.x1[i] + s * r.x2[i];
    r.q2[i] = -s * r.x1[i] + c * r.x2[i];
  }

  const MeasureConfig& mc = spec.measure;
  r.sync_means = sync_series(r.x1, r.x2, spec.run.dt, mc.window, mc.stride, mc.delay);
  if (mc.delay_scan > 0.0) {
    const double step = std::max(spec.run.dt, 0.1);
    for (double t0 : r.sync_means.times)
      r.delayed.push_back(best_delay(r.x1, r.x2, spec.run.dt, t0, r.sync_means.window,
                                     mc.delay_scan, step));
  }

  if (spec.run.quantum) {
    r.quantum_times = grid(spec.run.horizon, mc.quantum_dt);
    const std::vector<Matrix> covs = traj.covariances(probes, r.quantum_times);
    r.probe_cov.reserve(covs.size());
    for (const Matrix& cv : covs) {
      const Eigen::Matrix4d c4 = cv;
      r.probe_cov.push_back(c4);
      r.var_x1.push_back(c4(0, 0));
      r.var_x2.push_back(c4(1, 1));
    }
    r.quantum = correlation_report(r.quantum_times, r.probe_cov);
    r.sync_variances = sync_series(r.var_x1, r.var_x2, mc.quantum_dt, mc.window, mc.stride,
                                   mc.delay);
  }

  r.rayleigh = rayleigh_for(spec.network, spec.probes, mc.gap_threshold);
  r.ohmic = ohmic_gap_ratio(r.modes.theta);
  r.resonant = resonant_mode_indices(r.modes.Lambda1, r.modes.Lambda2,
                                     chain_frequencies(spec.network));
  return r;
}

namespace {

class OutputWriter {
 public:
  explicit OutputWriter(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (out) {
      written_.push_back(p);
      out << body;
      out.flush();
    }
    if (!out) {
      rollback();
      throw IoError("cannot write " + p.string());
    }
  }

  void rollback() noexcept {
    std::error_code ec;
    for (const fs::path& p : written_) fs::remove(p, ec);
    written_.clear();
  }

  const std::vector<fs::path>& written() const noexcept { return written_; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::string key_values(const std::map<std::string, std::string>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

}  // namespace

RunRecord write_outputs(const ScenarioResult& r, const fs::path& out_dir) {
  ensure_dir(out_dir);
  OutputWriter w(out_dir);
  const ScenarioSpec& spec = r.spec;
  const std::string config_text = resolved_config(spec);

  try {
    w.write("resolved_config.ini", config_text);

    std::string means = "t,x1,x2,p1,p2,q1,q2\n";
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      means += format_number(r.times[i]) + ',' + format_number(r.x1[i]) + ',' +
               format_number(r.x2[i]) + ',' + format_number(r.p1[i]) + ',' +
               format_number(r.p2[i]) + ',' + format_number(r.q1[i]) + ',' +
               format_number(r.q2[i]) + '\n';
    }
    w.write("means.csv", means);

    std::string vars = "t,var_x1,var_x2\n";
    for (std::size_t i = 0; i < r.quantum_times.size(); ++i)
      vars += format_number(r.quantum_times[i]) + ',' + format_number(r.var_x1[i]) + ',' +
              format_number(r.var_x2[i]) + '\n';
    w.write("variances.csv", vars);

    std::string sync = "t_start,C_means,C_variances,after_revival";
    const bool delayed = !r.delayed.empty();
    if (delayed) sync += ",best_delay,C_best_delay";
    sync += '\n';
    std::size_t j = 0;
    const SyncSeries& sv = r.sync_variances;
    for (std::size_t i = 0; i < r.sync_means.times.size(); ++i) {
      const double t = r.sync_means.times[i];
      while (j < sv.times.size() && sv.times[j] < t - 1e-9) ++j;
      std::optional<double> cv;
      if (j < sv.times.size() && std::abs(sv.times[j] - t) <= 1e-9) cv = sv.values[j];
      sync += format_number(t) + ',' + opt_number(r.sync_means.values[i]) + ',' +
              opt_number(cv) + ',' + (t + r.sync_means.window > r.tau_R ? "1" : "0");
      if (delayed)
        sync += ',' + format_number(r.delayed[i].delay) + ',' + format_number(r.delayed[i].C);
      sync += '\n';
    }
    w.write("sync.csv", sync);

    std::string q = "t,E,MI,S1,S2,S12\n";
    for (std::size_t i = 0; i < r.quantum.times.size(); ++i)
      q += format_number(r.quantum.times[i]) + ',' + format_number(r.quantum.E[i]) + ',' +
           format_number(r.quantum.MI[i]) + ',' + format_number(r.quantum.S1[i]) + ',' +
           format_number(r.quantum.S2[i]) + ',' + format_number(r.quantum.S12[i]) + '\n';
    w.write("quantum.csv", q);

    std::map<std::string, std::string> ray;
    ray["Gp_11"] = format_number(r.rayleigh.Gp(0, 0));
    ray["Gp_12"] = format_number(r.rayleigh.Gp(0, 1));
    ray["Gp_21"] = format_number(r.rayleigh.Gp(1, 0));
    ray["Gp_22"] = format_number(r.rayleigh.Gp(1, 1));
    ray["gap"] = format_number(r.rayleigh.gap);
    ray["gap_threshold"] = format_number(spec.measure.gap_threshold);
    ray["tau_S"] = format_number(r.rayleigh.tau_S);
    ray["ratio"] = format_number(r.rayleigh.ratio);
    ray["predicts_sync"] = r.rayleigh.predicts_sync ? "true" : "false";
    ray["commutator_norm"] = format_number(r.rayleigh.commutator_norm);
    ray["ohmic_ratio"] = format_number(r.ohmic.value);
    ray["ohmic_ratio_infinite"] = r.ohmic.infinite ? "true" : "false";
    ray["theta"] = format_number(r.modes.theta);
    ray["Lambda1"] = format_number(r.modes.Lambda1);
    ray["Lambda2"] = format_number(r.modes.Lambda2);
    ray["k_minus"] = std::to_string(r.resonant.k_minus);
    ray["k_plus"] = std::to_string(r.resonant.k_plus);
    ray["k_minus_out_of_band"] = r.resonant.minus_out_of_band ? "true" : "false";
    ray["k_plus_out_of_band"] = r.resonant.plus_out_of_band ? "true" : "false";
    ray["tau_R"] = format_number(r.tau_R);
    w.write("rayleigh.txt", key_values(ray));

    const double lo = r.tau_R / 6.0;
    const double hi = std::min(0.9 * r.tau_R, spec.run.horizon);
    std::map<std::string, std::string> rec;
    rec["version"] = std::string(version());
    rec["config_hash"] = hex64(fnv1a(config_text));
    rec["preset"] = std::string(preset_name(spec.preset));
    rec["tau_R"] = format_number(r.tau_R);
    rec["tau_CT"] = format_number(0.5 * r.tau_R);
    rec["min_eigenvalue"] = format_number(r.min_eigenvalue);
    rec["sync_window"] = format_number(r.sync_means.window);
    rec["sync_stride"] = format_number(r.sync_means.stride);
    rec["sync_delay"] = format_number(r.sync_means.delay);
    rec["sync_window_note"] = "window length is a configurable choice (measure.window)";
    rec["plateau_band"] = format_number(lo) + " " + format_number(hi);
    rec["sync_means_plateau_mean"] = format_number(mean_of(r.sync_means.values_within(lo, hi)));
    rec["sync_variances_plateau_mean"] =
        format_number(mean_of(r.sync_variances.values_within(lo, hi)));
    rec["E_plateau_mean"] = format_number(band_mean(r.quantum.times, r.quantum.E, lo, hi));
    rec["MI_plateau_mean"] = format_number(band_mean(r.quantum.times, r.quantum.MI, lo, hi));
    rec["rayleigh_predicts_sync"] = r.rayleigh.predicts_sync ? "true" : "false";
    rec["tau_S"] = format_number(r.rayleigh.tau_S);
    std::string files;
    for (const fs::path& p : w.written()) files += (files.empty() ? "" : " ") + p.filename().string();
    files += " record.txt";
    rec["files"] = files;
    w.write("record.txt", key_values(rec));

    RunRecord out;
    out.summary = std::move(rec);
    out.files = w.written();
    return out;
  } catch (const IoError&) {
    throw;
  } catch (...) {
    w.rollback();
    throw;
  }
}

RunRecord run_scenario(const ScenarioSpec& spec, const fs::path& out_dir) {
  return write_outputs(simulate(spec), out_dir);
}

}  // namespace chainsync
