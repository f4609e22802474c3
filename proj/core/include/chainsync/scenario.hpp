#pragma once

#include "chainsync/config.hpp"
#include "chainsync/gaussian_dynamics.hpp"
#include "chainsync/measures.hpp"
#include "chainsync/mode_analysis.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace chainsync {

std::string_view version();

// Everything a scenario produces, kept in memory.
struct ScenarioResult {
  ScenarioSpec spec;
  double min_eigenvalue = 0.0;
  double tau_R = 0.0;  // revival-time estimate 2M / omega1

  // Means on t_k = k * run.dt.
  std::vector<double> times;
  std::vector<double> x1, x2, p1, p2, q1, q2;

  // Probe covariances on t_k = k * measure.quantum_dt (empty when
  // run.quantum is false).
  std::vector<double> quantum_times;
  std::vector<Eigen::Matrix4d> probe_cov;
  std::vector<double> var_x1, var_x2;
  CorrelationReport quantum;

  SyncSeries sync_means;
  SyncSeries sync_variances;
  // Per-window best delay (only when measure.delay_scan > 0).
  std::vector<DelayScan> delayed;

  SystemModes modes;
  RayleighReport rayleigh;
  OhmicRatio ohmic;
  ResonantModes resonant;
};

// Initial composite state described by a spec (probe vacua of the bare
// frequencies, optionally squeezed).
GaussianState initial_state(const ScenarioSpec& spec);

// Runs the full pipeline. Throws InstabilityError for an unstable form.
ScenarioResult simulate(const ScenarioSpec& spec);

// Flat key/value summary plus the list of written files.
struct RunRecord {
  std::map<std::string, std::string> summary;
  std::vector<std::filesystem::path> files;
};

// Writes resolved_config.ini, means.csv, variances.csv, sync.csv,
// quantum.csv, rayleigh.txt and record.txt into `out_dir`. On an I/O failure
// every file written so far is removed and IoError is thrown.
RunRecord run_scenario(const ScenarioSpec& spec, const std::filesystem::path& out_dir);
RunRecord write_outputs(const ScenarioResult& result, const std::filesystem::path& out_dir);

// One row of the plug-site density grid.
struct SweepRow {
  int site = 0;
  std::vector<double> times;
  std::vector<std::optional<double>> C;
  std::string error;  // non-empty when this site failed
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

// Runs the scenario for each site_n in [first, last] (means only) on up to
// `workers` threads. Rows are independent and ordered by site, so the result
// does not depend on the worker count. Failing sites keep their error text.
SweepResult sweep_plug_site(const ScenarioSpec& spec, int first, int last, int workers);

// Writes sweep.csv (site, t, C) and sweep_errors.txt when any site failed.
std::vector<std::filesystem::path> write_sweep(const SweepResult& sweep,
                                               const ScenarioSpec& spec,
                                               const std::filesystem::path& out_dir);

// 12 significant digits, scientific notation.
std::string format_number(double v);

}  // namespace chainsync
