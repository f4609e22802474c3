#include <doctest.h>

#include "chainsync/config.hpp"
#include "chainsync/errors.hpp"

using namespace chainsync;

TEST_SUITE("config") {

TEST_CASE("fig2 preset from an empty file") {
  const ScenarioSpec s = parse_config("preset = fig2_dissipation\n");
  CHECK(s.preset == Preset::kFig2Dissipation);
  CHECK(s.network.M == 300);
  CHECK(s.network.omega0 == 0.4);
  CHECK(s.network.g == 1.2);
  CHECK(s.probes.omega1 == 1.0);
  CHECK(s.probes.omega2 == 1.1);
  CHECK(s.probes.lambda == 0.5);
  CHECK(s.probes.K == 0.2);
  CHECK(s.probes.site_m == 1);
  CHECK(s.probes.site_n == 1);
  CHECK(s.initial.x1 == 0.14);
  CHECK(s.initial.x2 == 1.4);
}

TEST_CASE("preset table") {
  const ScenarioSpec f3 = preset_spec(Preset::kFig3CommonNode);
  CHECK(f3.probes.lambda == 0.0);
  CHECK(f3.probes.K == 0.1);
  const ScenarioSpec f4 = preset_spec(Preset::kFig4Edges);
  CHECK(f4.probes.site_n == 300);
  CHECK(f4.initial.x1 == 1.4);
  CHECK(f4.initial.x2 == 1.4);
  const ScenarioSpec f5 = preset_spec(Preset::kFig5EntanglementCommon);
  CHECK(f5.probes.omega2 == 1.2);
  CHECK(f5.probes.K == 0.8);
  CHECK(f5.initial.r1 == 2.0);
  CHECK(f5.initial.r2 == 2.0);
  const ScenarioSpec f6 = preset_spec(Preset::kFig6MiEdges);
  CHECK(f6.probes.K == 0.2);
  CHECK(f6.probes.site_n == 300);
  const ScenarioSpec ab = preset_spec(Preset::kAppBSweep);
  CHECK(ab.probes.K == 0.06);
  CHECK(ab.probes.lambda == 0.5);
  for (Preset p : all_presets()) CHECK(preset_from_name(preset_name(p)) == p);
  CHECK_THROWS_AS(preset_from_name("fig9"), ConfigError);
}

TEST_CASE("overrides apply after the file") {
  const std::string text =
      "# strong branch\n"
      "preset = fig3_common_node\n"
      "[probes]\n"
      "K = 0.8   # stiff\n"
      "\n"
      "[run]\n"
      "horizon = 100\n";
  ScenarioSpec s = parse_config(text);
  CHECK(s.probes.K == 0.8);
  CHECK(s.run.horizon == 100.0);
  s = parse_config(text, {parse_override("K=0.3"), parse_override("run.dt = 0.05")});
  CHECK(s.probes.K == 0.3);
  CHECK(s.run.dt == 0.05);
}

TEST_CASE("edge presets follow M") {
  ScenarioSpec s = parse_config("preset = fig4_edges\n[network]\nM = 60\n");
  CHECK(s.probes.site_n == 60);
  s = parse_config("preset = fig6_mi_edges\n[network]\nM = 60\n[probes]\nsite_n = 30\n");
  CHECK(s.probes.site_n == 30);
  s = parse_config("", {parse_override("preset=fig4_edges"), parse_override("M=80")});
  CHECK(s.probes.site_n == 80);
}

TEST_CASE("parse errors carry the line") {
  try {
    parse_config("preset = fig2_dissipation\n[probes]\nK 0.8\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_config("[probes]\nK = abc\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[nowhere]\nK = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("K = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[probes\n"), ParseError);
  CHECK_THROWS_AS(parse_override("K"), ParseError);
}

TEST_CASE("unknown keys are errors") {
  CHECK_THROWS_AS(parse_config("[probes]\nkappa = 1\n"), UnknownKey);
  CHECK_THROWS_AS(parse_config("[network]\nK = 1\n"), UnknownKey);
  CHECK_THROWS_AS(parse_config("", {parse_override("bogus=1")}), UnknownKey);
  CHECK_THROWS_AS(parse_config("", {parse_override("network.K=1")}), UnknownKey);
}

TEST_CASE("range errors") {
  CHECK_THROWS_AS(parse_config("[probes]\nsite_m = 0\n"), RangeError);
  CHECK_THROWS_AS(parse_config("[network]\nM = 10\n[probes]\nsite_n = 11\n"), RangeError);
  CHECK_THROWS_AS(parse_config("[run]\nhorizon = 0\n"), RangeError);
  CHECK_THROWS_AS(parse_config("[run]\ndt = -1\n"), RangeError);
  CHECK_THROWS_AS(parse_config("[measure]\nwindow = 0.1\n"), RangeError);
  CHECK_THROWS_AS(parse_config("[measure]\ndelay = 0.03\n"), RangeError);
  CHECK_THROWS_AS(parse_config("[initial]\nr1 = -1\n"), RangeError);
  CHECK_NOTHROW(parse_config("[measure]\ndelay = -0.4\n"));
}

TEST_CASE("value syntax") {
  ScenarioSpec s = parse_config("[run]\nquantum = off\n[initial]\nsqueeze = momentum\n");
  CHECK_FALSE(s.run.quantum);
  CHECK(s.initial.squeeze == Quadrature::kMomentum);
  CHECK_THROWS_AS(parse_config("[run]\nquantum = maybe\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[network]\nM = 3.5\n"), ParseError);
}

TEST_CASE("resolved config round trips exactly") {
  for (Preset p : all_presets()) {
    ScenarioSpec s = preset_spec(p);
    s.probes.K = 0.1 + 0.2;  // not representable in short decimal form
    s.measure.gap_threshold = 1.0 / 3.0;
    const std::string text = resolved_config(s);
    const ScenarioSpec back = parse_config(text);
    CHECK(resolved_config(back) == text);
    CHECK(back.probes.K == s.probes.K);
    CHECK(back.measure.gap_threshold == s.measure.gap_threshold);
  }
}

TEST_CASE("every key is documented") {
  const auto& keys = config_keys();
  CHECK(keys.size() > 20);
  for (const KeyInfo& k : keys) {
    CHECK_FALSE(k.help.empty());
    CHECK_FALSE(k.section.empty());
  }
}

}
