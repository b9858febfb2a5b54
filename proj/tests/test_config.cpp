#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "spindimer/config.hpp"

using namespace spindimer;

namespace {

KeyValues flags(std::initializer_list<std::pair<std::string, std::string>> kv) {
  KeyValues out;
  for (const auto& [k, v] : kv) out[k] = {v, "--" + k};
  return out;
}

KeyValues full_flag_set() {
  return flags({{"model.units", "dimensionless"},
                {"model.j", "1"},
                {"model.delta", "1"},
                {"model.d_over_j", "0.5"},
                {"model.g1", "2"},
                {"model.g2", "2"},
                {"model.b", "0.2"},
                {"model.t", "0.3"},
                {"run.out", "out.csv"},
                {"run.parallel", "2"},
                {"run.grid", "90x45"}});
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(ParseIni, SectionsCommentsAndWhitespace) {
  const KeyValues kv = parse_ini("# comment\n[model]\n  j = 2 \n; other\n\n[run]\ngrid=10x5\n", "mem");
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv.at("model.j").value, "2");
  EXPECT_EQ(kv.at("model.j").origin, "mem:3");
  EXPECT_EQ(kv.at("run.grid").value, "10x5");
}

TEST(ParseIni, ErrorsCarryLineReferences) {
  EXPECT_NE(error_of([] { parse_ini("[model]\nfoo = 1\n", "cfg.ini"); }).find("cfg.ini:2"), std::string::npos);
  EXPECT_NE(error_of([] { parse_ini("[nope]\n", "c"); }).find("unknown section"), std::string::npos);
  EXPECT_NE(error_of([] { parse_ini("j = 1\n", "c"); }).find("outside"), std::string::npos);
  EXPECT_NE(error_of([] { parse_ini("[model]\nj 1\n", "c"); }).find("c:2"), std::string::npos);
  EXPECT_NE(error_of([] { parse_ini("[model]\nj = 1\nj = 2\n", "c"); }).find("duplicate"), std::string::npos);
  EXPECT_NE(error_of([] { parse_ini("[model\n", "c"); }).find("malformed"), std::string::npos);
}

TEST(Resolve, EmptyFileAndFullFlagSet) {
  const CliConfig cfg = resolve_config({}, full_flag_set());
  EXPECT_EQ(cfg.model.units.mode, UnitMode::dimensionless);
  EXPECT_EQ(cfg.model.d, 0.5);
  EXPECT_EQ(cfg.model.b, 0.2);
  EXPECT_EQ(*cfg.temperature, 0.3);
  EXPECT_EQ(cfg.run.out, "out.csv");
  EXPECT_EQ(cfg.run.parallel, 2u);
  EXPECT_EQ(cfg.run.grid.phi, 90u);
  EXPECT_EQ(cfg.run.grid.theta, 45u);
}

TEST(Resolve, Defaults) {
  const CliConfig cfg = resolve_config({}, {});
  EXPECT_EQ(cfg.model.j, 1.0);
  EXPECT_EQ(cfg.model.delta, 1.0);
  EXPECT_EQ(cfg.model.d, 0.0);
  EXPECT_EQ(cfg.model.g1, 2.0);
  EXPECT_EQ(cfg.model.b, 0.0);
  EXPECT_FALSE(cfg.temperature.has_value());
  EXPECT_EQ(cfg.run.format, "csv");
  EXPECT_EQ(cfg.run.grid.phi, 360u);
  EXPECT_EQ(cfg.run.tol, 1e-6);
}

TEST(Resolve, ScientificNotation) {
  const CliConfig cfg = resolve_config({}, flags({{"model.b", "2.5e-1"}, {"model.t", "1E2"}}));
  EXPECT_EQ(cfg.model.b, 0.25);
  EXPECT_EQ(*cfg.temperature, 100.0);
}

TEST(Resolve, BothUnitModesRejected) {
  const KeyValues file = parse_ini("[model]\nj = 1\nj_over_kb_kelvin = 141\n", "both.ini");
  EXPECT_NE(error_of([&] { resolve_config(file, {}); }).find("both"), std::string::npos);
  EXPECT_THROW(resolve_config({}, flags({{"model.d_over_j", "1"}, {"model.d_over_kb_kelvin", "3"}})), ConfigError);
  EXPECT_THROW(resolve_config(parse_ini("[model]\nunits = physical\nj = 1\n", "c"), {}), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"model.units", "kelvin"}})), ConfigError);
}

TEST(Resolve, PhysicalModeNeedsCoupling) {
  EXPECT_THROW(resolve_config({}, flags({{"model.units", "physical"}})), ConfigError);
  const CliConfig cfg = resolve_config({}, flags({{"model.j_over_kb_kelvin", "141"}}));
  EXPECT_EQ(cfg.model.units.mode, UnitMode::physical);
  EXPECT_EQ(cfg.model.j, 141.0);
}

TEST(Resolve, RangeChecks) {
  EXPECT_THROW(resolve_config({}, flags({{"model.t", "0"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"model.t", "-1"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"model.b", "-0.1"}})), ConfigError);
  EXPECT_NO_THROW(resolve_config({}, flags({{"model.b", "0"}})));
  EXPECT_THROW(resolve_config({}, flags({{"model.j", "0"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"model.g1", "abc"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"model.g1", "2x"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"run.grid", "10"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"run.grid", "0x10"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"run.command", "plot"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"run.format", "xml"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"run.moving", "d"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"run.measure", "discord"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"run.tol", "0"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"sweep.temperatures", "1,-2"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"sweep.measures", "hs_min,mutual"}})), ConfigError);
}

TEST(Resolve, SweepAxes) {
  const CliConfig cfg =
      resolve_config({}, flags({{"sweep.axis1", "b:0:3:121"}, {"sweep.axis2", "t:0.1,0.5,1"}, {"sweep.measures", "negativity"}}));
  ASSERT_EQ(cfg.sweep.axes.size(), 2u);
  EXPECT_EQ(cfg.sweep.axes[0].kind, AxisKind::b);
  EXPECT_EQ(cfg.sweep.axes[0].points, 121u);
  EXPECT_EQ(cfg.sweep.axes[1].values(), (std::vector<double>{0.1, 0.5, 1.0}));
  EXPECT_FALSE(cfg.sweep.measures.hs_min);
  EXPECT_TRUE(cfg.sweep.measures.negativity);
  EXPECT_THROW(resolve_config({}, flags({{"sweep.axis2", "b:0:1:3"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"sweep.axis1", "b:0:1"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"sweep.axis1", "b:1:0:5"}})), ConfigError);
  EXPECT_THROW(resolve_config({}, flags({{"sweep.axis1", "x:0:1:5"}})), ConfigError);
}

// Each row: (key, file value, flag value, expected winner) over every
// combination of presence in the two layers.
TEST(Precedence, FlagsOverFileOverDefaults) {
  struct Case {
    const char* key;
    const char* file;
    const char* flag;
    double expect;
  };
  const std::vector<Case> cases = {
      {"model.delta", nullptr, nullptr, 1.0}, {"model.delta", "0.5", nullptr, 0.5},
      {"model.delta", nullptr, "0.7", 0.7},   {"model.delta", "0.5", "0.7", 0.7},
      {"model.g1", nullptr, nullptr, 2.0},    {"model.g1", "2.1", nullptr, 2.1},
      {"model.g1", nullptr, "2.3", 2.3},      {"model.g1", "2.1", "2.3", 2.3},
      {"model.b", nullptr, nullptr, 0.0},     {"model.b", "1.5", nullptr, 1.5},
      {"model.b", nullptr, "2.5", 2.5},       {"model.b", "1.5", "2.5", 2.5},
      {"model.j", nullptr, nullptr, 1.0},     {"model.j", "3", nullptr, 3.0},
      {"model.j", nullptr, "4", 4.0},         {"model.j", "3", "4", 4.0},
  };
  for (const auto& c : cases) {
    KeyValues file, flag;
    if (c.file) file[c.key] = {c.file, "file:1"};
    if (c.flag) flag[c.key] = {c.flag, "--flag"};
    const CliConfig cfg = resolve_config(file, flag);
    const std::string key = c.key;
    const double got = key == "model.delta" ? cfg.model.delta
                       : key == "model.g1"  ? cfg.model.g1
                       : key == "model.b"   ? cfg.model.b
                                            : cfg.model.j;
    EXPECT_EQ(got, c.expect) << c.key << " file=" << (c.file ? c.file : "-") << " flag=" << (c.flag ? c.flag : "-");
  }
}

TEST(Precedence, RunAndTemperatureKeys) {
  KeyValues file = parse_ini("[model]\nt = 0.5\n[run]\nout = a.csv\nparallel = 3\ngrid = 10x5\n", "f");
  CliConfig cfg = resolve_config(file, flags({{"model.t", "0.7"}, {"run.grid", "20x10"}}));
  EXPECT_EQ(*cfg.temperature, 0.7);
  EXPECT_EQ(cfg.run.out, "a.csv");
  EXPECT_EQ(cfg.run.parallel, 3u);
  EXPECT_EQ(cfg.run.grid.phi, 20u);
}

TEST(Precedence, FlagUnitModeReplacesFileUnitKeys) {
  const KeyValues file = parse_ini("[model]\nunits = physical\nj_over_kb_kelvin = 141\ng1 = 2.2\n", "f");
  const CliConfig cfg = resolve_config(file, flags({{"model.units", "dimensionless"}, {"model.j", "2"}}));
  EXPECT_EQ(cfg.model.units.mode, UnitMode::dimensionless);
  EXPECT_EQ(cfg.model.j, 2.0);
  EXPECT_EQ(cfg.model.g1, 2.2);

  const CliConfig same = resolve_config(file, flags({{"model.j_over_kb_kelvin", "100"}}));
  EXPECT_EQ(same.model.units.mode, UnitMode::physical);
  EXPECT_EQ(same.model.j, 100.0);
}

TEST(ParseConfig, ShippedCuniSample) {
  const CliConfig cfg = parse_config(std::filesystem::path(SPINDIMER_DOCS_DIR) / "cuni.ini");
  EXPECT_EQ(cfg.model.units.mode, UnitMode::physical);
  EXPECT_EQ(cfg.model.j, 141.0);
  EXPECT_EQ(cfg.model.g1, 2.20);
  EXPECT_EQ(cfg.model.g2, 2.29);
  EXPECT_EQ(cfg.model.d, 0.0);
  EXPECT_EQ(*cfg.temperature, 300.0);
}

TEST(ParseConfig, ShippedDimensionlessSample) {
  const CliConfig cfg = parse_config(std::filesystem::path(SPINDIMER_DOCS_DIR) / "dimensionless.ini");
  EXPECT_EQ(cfg.model.units.mode, UnitMode::dimensionless);
  EXPECT_EQ(cfg.model.d, 0.5);
  ASSERT_EQ(cfg.sweep.axes.size(), 1u);
  EXPECT_EQ(cfg.sweep.axes[0].points, 61u);
}

TEST(ParseConfig, MissingFile) {
  EXPECT_THROW(parse_config("/nonexistent/spindimer.ini"), ConfigError);
}
