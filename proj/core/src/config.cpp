#include "chainsync/config.hpp"

#include "chainsync/errors.hpp"
#include "chainsync/measures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace chainsync {

namespace {

struct PresetInfo {
  Preset preset;
  std::string_view name;
  std::string_view summary;
};

constexpr PresetInfo kPresets[] = {
    {Preset::kFig2Dissipation, "fig2_dissipation",
     "coupled detuned probes at site 1, anti-synchronization by common dissipation"},
    {Preset::kFig3CommonNode, "fig3_common_node",
     "uncoupled probes at site 1; K = 0.1 weak branch, set K = 0.8 for the strong branch"},
    {Preset::kFig4Edges, "fig4_edges",
     "uncoupled probes at opposite chain edges, synchronization by cross-talk"},
    {Preset::kFig5EntanglementCommon, "fig5_entanglement_common",
     "squeezed probes strongly coupled at site 1, entanglement and variance sync"},
    {Preset::kFig6MiEdges, "fig6_mi_edges",
     "squeezed probes at opposite edges, mutual information without entanglement"},
    {Preset::kAppBSweep, "appB_sweep",
     "fig2 probes with K = 0.06, second probe swept along the chain"},
    {Preset::kCustom, "custom", "user-defined; defaults to detuned probes at site 1"},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v, int line, std::string_view key) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (!v.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || v.empty())
    throw ParseError(line, "value of '" + std::string(key) + "' is not a number: '" + v + "'");
  return out;
}

int to_int(const std::string& v, int line, std::string_view key) {
  int out = 0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (!v.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || v.empty())
    throw ParseError(line, "value of '" + std::string(key) + "' is not an integer: '" + v + "'");
  return out;
}

bool to_bool(const std::string& v, int line, std::string_view key) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ParseError(line, "value of '" + std::string(key) + "' is not a boolean: '" + v + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Setter = std::function<void(ScenarioSpec&, const std::string&, int)>;
using Getter = std::function<std::string(const ScenarioSpec&)>;

struct KeyDef {
  KeyInfo info;
  Setter set;
  Getter get;
};

#define CS_DOUBLE(section, name, field, help)                                              \
  KeyDef {                                                                                  \
    {section, #name, help},                                                                 \
        [](ScenarioSpec& s, const std::string& v, int l) { s.field = to_double(v, l, #name); }, \
        [](const ScenarioSpec& s) { return fmt(s.field); }                                  \
  }
#define CS_INT(section, name, field, help)                                                 \
  KeyDef {                                                                                  \
    {section, #name, help},                                                                 \
        [](ScenarioSpec& s, const std::string& v, int l) { s.field = to_int(v, l, #name); }, \
        [](const ScenarioSpec& s) { return std::to_string(s.field); }                       \
  }

const std::vector<KeyDef>& key_defs() {
  static const std::vector<KeyDef> defs = {
      KeyDef{{"run", "preset", "scenario preset (see `chainsync presets`)"},
             [](ScenarioSpec& s, const std::string& v, int l) {
               try {
                 s.preset = preset_from_name(v);
               } catch (const ConfigError& e) {
                 throw ParseError(l, e.what());
               }
             },
             [](const ScenarioSpec& s) { return std::string(preset_name(s.preset)); }},
      CS_DOUBLE("run", horizon, run.horizon, "total simulated time [1/omega1]"),
      CS_DOUBLE("run", dt, run.dt, "output sampling step for means [1/omega1]"),
      KeyDef{{"run", "quantum", "compute covariances, entropies and negativity"},
             [](ScenarioSpec& s, const std::string& v, int l) { s.run.quantum = to_bool(v, l, "quantum"); },
             [](const ScenarioSpec& s) { return std::string(s.run.quantum ? "true" : "false"); }},
      CS_INT("run", sweep_first, run.sweep_first, "first swept site for `sweep`"),
      CS_INT("run", sweep_last, run.sweep_last, "last swept site for `sweep` (0 = M)"),

      CS_INT("network", M, network.M, "number of chain sites"),
      CS_DOUBLE("network", omega0, network.omega0, "chain on-site frequency [omega1]"),
      CS_DOUBLE("network", g, network.g, "nearest-neighbour stiffness [omega1^2]"),

      CS_DOUBLE("probes", omega1, probes.omega1, "first probe frequency (unit of frequency)"),
      CS_DOUBLE("probes", omega2, probes.omega2, "second probe frequency [omega1]"),
      CS_DOUBLE("probes", lambda, probes.lambda, "direct probe-probe coupling [omega1^2]"),
      CS_DOUBLE("probes", K, probes.K, "probe-chain coupling [omega1^2]"),
      CS_INT("probes", site_m, probes.site_m, "chain site of probe 1 (1-based)"),
      CS_INT("probes", site_n, probes.site_n, "chain site of probe 2 (1-based)"),
      CS_INT("probes", sign2, probes.sign2, "sign of probe 2 coupling (+1 or -1)"),

      CS_DOUBLE("initial", x1, initial.x1, "<x1(0)> [omega1^-1/2]"),
      CS_DOUBLE("initial", x2, initial.x2, "<x2(0)> [omega1^-1/2]"),
      CS_DOUBLE("initial", p1, initial.p1, "<p1(0)> [omega1^1/2]"),
      CS_DOUBLE("initial", p2, initial.p2, "<p2(0)> [omega1^1/2]"),
      CS_DOUBLE("initial", r1, initial.r1, "squeezing parameter of probe 1"),
      CS_DOUBLE("initial", r2, initial.r2, "squeezing parameter of probe 2"),
      KeyDef{{"initial", "squeeze", "squeezed quadrature: position | momentum"},
             [](ScenarioSpec& s, const std::string& v, int l) {
               if (v == "position") s.initial.squeeze = Quadrature::kPosition;
               else if (v == "momentum") s.initial.squeeze = Quadrature::kMomentum;
               else throw ParseError(l, "squeeze must be 'position' or 'momentum'");
             },
             [](const ScenarioSpec& s) {
               return std::string(s.initial.squeeze == Quadrature::kPosition ? "position" : "momentum");
             }},

      CS_DOUBLE("measure", window, measure.window, "Pearson window length [1/omega1]"),
      CS_DOUBLE("measure", stride, measure.stride, "spacing of window starts [1/omega1]"),
      CS_DOUBLE("measure", delay, measure.delay, "shift of the second signal [1/omega1]"),
      CS_DOUBLE("measure", delay_scan, measure.delay_scan,
                "half-width of per-window delay scan (0 = off) [1/omega1]"),
      CS_DOUBLE("measure", quantum_dt, measure.quantum_dt,
                "sampling step for covariances [1/omega1]"),
      CS_DOUBLE("measure", gap_threshold, measure.gap_threshold,
                "Rayleigh gap threshold as a fraction of the larger damping"),
      CS_DOUBLE("measure", stability_tol, measure.stability_tol,
                "smallest admissible eigenvalue of the potential [omega1^2]"),
  };
  return defs;
}

#undef CS_DOUBLE
#undef CS_INT

const KeyDef* find_key(std::string_view section, std::string_view key) {
  for (const KeyDef& d : key_defs())
    if (d.info.key == key && (section.empty() || d.info.section == section)) return &d;
  return nullptr;
}

struct Assignment {
  std::string section;
  std::string key;
  std::string value;
  int line;
};

const KeyDef& resolve(const Assignment& a) {
  const KeyDef* d = find_key(a.section, a.key);
  if (!d) {
    std::string where = a.section.empty() ? std::string("top level") : "[" + a.section + "]";
    std::string msg = "unknown key '" + a.key + "' in " + where;
    if (a.line > 0) msg = "line " + std::to_string(a.line) + ": " + msg;
    throw UnknownKey(msg);
  }
  return *d;
}

}  // namespace

std::string_view preset_name(Preset p) {
  for (const auto& i : kPresets)
    if (i.preset == p) return i.name;
  return "custom";
}

std::string_view preset_summary(Preset p) {
  for (const auto& i : kPresets)
    if (i.preset == p) return i.summary;
  return {};
}

Preset preset_from_name(std::string_view name) {
  for (const auto& i : kPresets)
    if (i.name == name) return i.preset;
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::vector<Preset> all_presets() {
  std::vector<Preset> out;
  for (const auto& i : kPresets) out.push_back(i.preset);
  return out;
}

ScenarioSpec preset_spec(Preset p) {
  ScenarioSpec s;
  s.preset = p;
  s.network = NetworkConfig{};  // M = 300, Omega0 = 0.4, g = 1.2
  s.probes = ProbePair{};
  s.probes.omega1 = 1.0;
  switch (p) {
    case Preset::kFig2Dissipation:
      s.probes.omega2 = 1.1;
      s.probes.lambda = 0.5;
      s.probes.K = 0.2;
      s.probes.site_m = s.probes.site_n = 1;
      s.initial.x1 = 0.14;
      s.initial.x2 = 1.4;
      s.run.horizon = 1200.0;
      break;
    case Preset::kFig3CommonNode:
      s.probes.omega2 = 1.1;
      s.probes.lambda = 0.0;
      s.probes.K = 0.1;
      s.probes.site_m = s.probes.site_n = 1;
      // Not stated for this figure; symmetric displacements as in fig4.
      s.initial.x1 = 1.4;
      s.initial.x2 = 1.4;
      s.run.horizon = 900.0;
      break;
    case Preset::kFig4Edges:
      s.probes.omega2 = 1.1;
      s.probes.lambda = 0.0;
      s.probes.K = 0.2;
      s.probes.site_m = 1;
      s.probes.site_n = 300;
      s.initial.x1 = 1.4;
      s.initial.x2 = 1.4;
      s.run.horizon = 900.0;
      s.measure.delay_scan = 0.0;
      break;
    case Preset::kFig5EntanglementCommon:
      s.probes.omega2 = 1.2;
      s.probes.lambda = 0.0;
      s.probes.K = 0.8;
      s.probes.site_m = s.probes.site_n = 1;
      s.initial.r1 = s.initial.r2 = 2.0;
      s.run.horizon = 900.0;
      break;
    case Preset::kFig6MiEdges:
      s.probes.omega2 = 1.2;
      s.probes.lambda = 0.0;
      s.probes.K = 0.2;
      s.probes.site_m = 1;
      s.probes.site_n = 300;
      s.initial.r1 = s.initial.r2 = 2.0;
      s.run.horizon = 900.0;
      break;
    case Preset::kAppBSweep:
      s.probes.omega2 = 1.1;
      s.probes.lambda = 0.5;
      s.probes.K = 0.06;
      s.probes.site_m = s.probes.site_n = 1;
      s.initial.x1 = 0.14;
      s.initial.x2 = 1.4;
      s.run.horizon = 600.0;
      s.run.quantum = false;
      break;
    case Preset::kCustom:
      s.probes.omega2 = 1.1;
      s.probes.lambda = 0.0;
      s.probes.K = 0.2;
      s.probes.site_m = s.probes.site_n = 1;
      s.initial.x1 = 1.0;
      s.initial.x2 = 1.0;
      s.run.horizon = 600.0;
      break;
  }
  return s;
}

void ScenarioSpec::validate() const {
  network.validate();
  probes.validate(network.M);
  if (!(run.horizon > 0.0)) throw RangeError("horizon must be > 0");
  if (!(run.dt > 0.0)) throw RangeError("dt must be > 0");
  if (run.dt > run.horizon) throw RangeError("dt must not exceed the horizon");
  if (!(measure.window > 0.0)) throw RangeError("window must be > 0");
  if (!(measure.stride > 0.0)) throw RangeError("stride must be > 0");
  if (!(measure.delay_scan >= 0.0)) throw RangeError("delay_scan must be >= 0");
  if (!(measure.quantum_dt > 0.0)) throw RangeError("quantum_dt must be > 0");
  if (!(measure.gap_threshold >= 0.0)) throw RangeError("gap_threshold must be >= 0");
  auto on_grid = [](double span, double step) {
    const double q = span / step;
    return std::abs(q - std::round(q)) <= 1e-6;
  };
  if (!on_grid(measure.delay, run.dt) || (run.quantum && !on_grid(measure.delay, measure.quantum_dt)))
    throw RangeError("delay must be a multiple of dt (and of quantum_dt when quantum = true)");
  if (measure.window < kMinWindowSamples * run.dt)
    throw RangeError("window must span at least 8 samples");
  if (!(initial.r1 >= 0.0) || !(initial.r2 >= 0.0))
    throw RangeError("squeezing parameters must be >= 0");
  if (run.sweep_first < 1 || run.sweep_first > network.M)
    throw RangeError("sweep_first must lie in [1, M]");
  if (run.sweep_last != 0 && (run.sweep_last < run.sweep_first || run.sweep_last > network.M))
    throw RangeError("sweep_last must be 0 or lie in [sweep_first, M]");
}

Override parse_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ParseError(0, "override '" + std::string(assignment) + "' is not of the form key=value");
  return {trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1))};
}

ScenarioSpec parse_config(std::string_view text, const std::vector<Override>& overrides) {
  std::vector<Assignment> entries;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section != "network" && section != "probes" && section != "initial" &&
          section != "measure" && section != "run")
        throw ParseError(line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    Assignment a{section, trim(std::string_view(line).substr(0, eq)),
                 trim(std::string_view(line).substr(eq + 1)), line_no};
    if (a.key.empty()) throw ParseError(line_no, "empty key");
    // Only the preset may precede the first section.
    if (a.section.empty() && a.key != "preset") {
      throw ParseError(line_no, "key '" + a.key + "' must appear inside a [section]");
    }
    if (a.section.empty()) a.section = "run";
    resolve(a);
    entries.push_back(std::move(a));
  }

  std::vector<Assignment> cli;
  for (const Override& o : overrides) {
    Assignment a{"", o.key, o.value, 0};
    const auto dot = o.key.find('.');
    if (dot != std::string::npos) {
      a.section = o.key.substr(0, dot);
      a.key = o.key.substr(dot + 1);
    }
    resolve(a);
    cli.push_back(std::move(a));
  }

  // Preset first: the last assignment to it wins.
  ScenarioSpec probe;
  for (const auto* list : {&entries, &cli})
    for (const Assignment& a : *list)
      if (a.key == "preset") resolve(a).set(probe, a.value, a.line);
  ScenarioSpec spec = preset_spec(probe.preset);

  bool site_n_set = false;
  for (const auto* list : {&entries, &cli})
    for (const Assignment& a : *list) {
      if (a.key == "preset") continue;
      resolve(a).set(spec, a.value, a.line);
      site_n_set = site_n_set || a.key == "site_n";
    }

  // Edge presets follow the chain length unless the site is pinned.
  if (!site_n_set &&
      (spec.preset == Preset::kFig4Edges || spec.preset == Preset::kFig6MiEdges))
    spec.probes.site_n = spec.network.M;

  spec.validate();
  return spec;
}

std::string resolved_config(const ScenarioSpec& spec) {
  std::ostringstream out;
  out << "# chainsync resolved configuration\n";
  out << "preset = " << preset_name(spec.preset) << "\n";
  for (std::string_view sec : {"run", "network", "probes", "initial", "measure"}) {
    out << "\n[" << sec << "]\n";
    for (const KeyDef& d : key_defs()) {
      if (d.info.section != sec || d.info.key == "preset") continue;
      out << d.info.key << " = " << d.get(spec) << "\n";
    }
  }
  return out.str();
}

const std::vector<KeyInfo>& config_keys() {
  static const std::vector<KeyInfo> keys = [] {
    std::vector<KeyInfo> k;
    for (const KeyDef& d : key_defs()) k.push_back(d.info);
    return k;
  }();
  return keys;
}

}  // namespace chainsync
