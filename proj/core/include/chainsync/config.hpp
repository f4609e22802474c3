#pragma once

#include "chainsync/gaussian_dynamics.hpp"
#include "chainsync/lattice_model.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chainsync {

enum class Preset {
  kFig2Dissipation,
  kFig3CommonNode,
  kFig4Edges,
  kFig5EntanglementCommon,
  kFig6MiEdges,
  kAppBSweep,
  kCustom,
};

std::string_view preset_name(Preset p);
Preset preset_from_name(std::string_view name);  // throws ConfigError
std::vector<Preset> all_presets();
std::string_view preset_summary(Preset p);

struct InitialConditions {
  double x1 = 0.0;
  double x2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  Quadrature squeeze = Quadrature::kPosition;
};

struct MeasureConfig {
  double window = 20.0;
  double stride = 2.0;
  double delay = 0.0;
  // Half-width of the delay scan reported in sync.csv; 0 disables it.
  double delay_scan = 0.0;
  double quantum_dt = 0.1;
  double gap_threshold = 0.5;
  double stability_tol = kDefaultStabilityTolerance;
};

struct RunConfig {
  double horizon = 600.0;
  double dt = 0.02;
  bool quantum = true;
  int sweep_first = 1;
  int sweep_last = 0;  // 0: up to M
};

struct ScenarioSpec {
  Preset preset = Preset::kCustom;
  NetworkConfig network;
  ProbePair probes;
  InitialConditions initial;
  MeasureConfig measure;
  RunConfig run;

  // Throws RangeError on any violated invariant.
  void validate() const;
};

// Defaults of a preset before any override.
ScenarioSpec preset_spec(Preset p);

// A single "key = value" assignment. `key` may be bare ("K") or qualified
// with its section ("probes.K").
struct Override {
  std::string key;
  std::string value;
};

// Parses the line-oriented config format:
//
//   # comment
//   preset = fig2_dissipation
//   [probes]
//   K = 0.8
//
// Preset defaults apply first, then file assignments in order, then
// `overrides` (which may also select the preset). Throws ParseError with the
// offending line, UnknownKey, or RangeError.
ScenarioSpec parse_config(std::string_view text, const std::vector<Override>& overrides = {});

Override parse_override(std::string_view assignment);

// Canonical text of a fully resolved spec; parse_config(resolved_config(s))
// reproduces s exactly.
std::string resolved_config(const ScenarioSpec& spec);

// Every accepted key as (section, key, description).
struct KeyInfo {
  std::string_view section;
  std::string_view key;
  std::string_view help;
};
const std::vector<KeyInfo>& config_keys();

}  // namespace chainsync
