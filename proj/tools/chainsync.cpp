// chainsync command line: run presets, sweep plugging sites, list presets
// and keys, validate configurations.

#include "chainsync/errors.hpp"
#include "chainsync/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace cs = chainsync;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kInstability = 3, kIo = 4 };

struct Common {
  std::string config;
  std::vector<std::string> sets;
};

cs::ScenarioSpec load_spec(const Common& c) {
  std::string text;
  if (!c.config.empty()) {
    std::ifstream in(c.config, std::ios::binary);
    if (!in) throw cs::IoError("cannot read config file " + c.config);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  std::vector<cs::Override> overrides;
  overrides.reserve(c.sets.size());
  for (const std::string& s : c.sets) overrides.push_back(cs::parse_override(s));
  return cs::parse_config(text, overrides);
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "configuration file");
  cmd->add_option("--set", c.sets, "override key=value (repeatable)")->take_all();
}

int cmd_run(const Common& c, const std::string& out) {
  const cs::ScenarioSpec spec = load_spec(c);
  const cs::RunRecord rec = cs::run_scenario(spec, out);
  for (const auto& [k, v] : rec.summary)
    if (k != "files") std::cout << k << " = " << v << '\n';
  std::cout << "wrote " << rec.files.size() << " files to " << out << '\n';
  return kOk;
}

int cmd_sweep(const Common& c, const std::string& out, int workers) {
  const cs::ScenarioSpec spec = load_spec(c);
  if (spec.preset != cs::Preset::kAppBSweep && spec.preset != cs::Preset::kCustom)
    throw cs::ConfigError("sweep requires preset appB_sweep or custom");
  const int last = spec.run.sweep_last == 0 ? spec.network.M : spec.run.sweep_last;
  const cs::SweepResult res = cs::sweep_plug_site(spec, spec.run.sweep_first, last, workers);
  cs::write_sweep(res, spec, out);
  int failed = 0;
  for (const cs::SweepRow& row : res.rows) {
    if (row.error.empty()) continue;
    ++failed;
    std::cerr << "site " << row.site << ": " << row.error << '\n';
  }
  std::cout << "swept sites " << spec.run.sweep_first << ".." << last << " (" << failed
            << " failed) into " << out << '\n';
  return kOk;
}

int cmd_presets() {
  std::cout << "presets:\n";
  for (cs::Preset p : cs::all_presets())
    std::printf("  %-26s %s\n", std::string(cs::preset_name(p)).c_str(),
                std::string(cs::preset_summary(p)).c_str());
  std::cout << "\nkeys (section.key):\n";
  for (const cs::KeyInfo& k : cs::config_keys()) {
    const std::string name = std::string(k.section) + "." + std::string(k.key);
    std::printf("  %-26s %s\n", name.c_str(), std::string(k.help).c_str());
  }
  return kOk;
}

int cmd_validate(const Common& c) {
  const cs::ScenarioSpec spec = load_spec(c);
  const cs::QuadraticForm qf = cs::assemble_full_potential(spec.network, spec.probes);
  const double min_ev = cs::check_stability(qf, spec.measure.stability_tol);
  std::cout << cs::resolved_config(spec) << "# stable, smallest eigenvalue "
            << cs::format_number(min_ev) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two detuned oscillators coupled through a harmonic chain"};
  app.set_version_flag("--version", std::string(cs::version()));
  app.require_subcommand(1);

  Common common;
  std::string out = "out";
  int workers = 1;

  CLI::App* run = app.add_subcommand("run", "simulate one scenario and write its outputs");
  add_common(run, common);
  run->add_option("--out", out, "output directory")->capture_default_str();

  CLI::App* sweep = app.add_subcommand("sweep", "sweep the second probe along the chain");
  add_common(sweep, common);
  sweep->add_option("--out", out, "output directory")->capture_default_str();
  sweep->add_option("--workers", workers, "worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI::App* presets = app.add_subcommand("presets", "list presets and configuration keys");
  CLI::App* validate = app.add_subcommand("validate", "parse a configuration and check stability");
  add_common(validate, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(common, out);
    if (*sweep) return cmd_sweep(common, out, workers);
    if (*presets) return cmd_presets();
    if (*validate) return cmd_validate(common);
  } catch (const cs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const cs::InstabilityError& e) {
    std::cerr << "instability: " << e.what() << '\n';
    return kInstability;
  } catch (const cs::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
