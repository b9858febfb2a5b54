#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "spindimer/io.hpp"
#include "spindimer/sweep.hpp"

using namespace spindimer;

namespace {

SweepSpec simple_spec() {
  SweepSpec s;
  s.label = "test";
  s.base.d = 0.5;
  s.temperature = 0.3;
  s.axes = {Axis::linspace(AxisKind::b, 0.1, 1.0, 4), Axis::linspace(AxisKind::t, 0.2, 1.0, 3)};
  return s;
}

double hs_threshold_b(double d_over_j, MeasureKind m) {
  ThresholdQuery q;
  q.base.d = d_over_j;
  q.temperature = 0.1;
  q.moving = MovingVariable::b;
  q.measure = m;
  q.lo = 0.01;
  q.hi = 3.0;
  q.tol = 1e-6;
  return find_threshold(q);
}

}  // namespace

TEST(Axis, LinspaceEndpointsExact) {
  const auto v = Axis::linspace(AxisKind::t, 0.1, 300.0, 300).values();
  ASSERT_EQ(v.size(), 300u);
  EXPECT_EQ(v.front(), 0.1);
  EXPECT_EQ(v.back(), 300.0);
  EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
}

TEST(Axis, Validation) {
  EXPECT_THROW(Axis::linspace(AxisKind::b, 1.0, 0.0, 5).validate(), InvalidParameter);
  EXPECT_THROW(Axis::linspace(AxisKind::b, 0.0, 1.0, 0).validate(), InvalidParameter);
  EXPECT_THROW(Axis::linspace(AxisKind::b, 0.0, 1.0, 1).validate(), InvalidParameter);
  EXPECT_THROW(Axis::linspace(AxisKind::b, 0.0, INFINITY, 3).validate(), InvalidParameter);
  EXPECT_NO_THROW(Axis::linspace(AxisKind::b, 0.5, 0.5, 1).validate());
  EXPECT_NO_THROW(Axis::values_of(AxisKind::t, {0.1, 2.0}).validate());
  EXPECT_THROW(parse_axis_kind("q"), InvalidParameter);
  EXPECT_EQ(parse_axis_kind("d_over_j"), AxisKind::d_over_j);
}

TEST(SweepSpec, Validation) {
  SweepSpec s = simple_spec();
  s.axes[1].kind = AxisKind::b;
  EXPECT_THROW(s.validate(), InvalidParameter);
  s.axes.clear();
  EXPECT_THROW(s.validate(), InvalidParameter);
  s = simple_spec();
  s.axes.push_back(Axis::linspace(AxisKind::g1, 1.9, 2.1, 2));
  EXPECT_THROW(run_sweep(s), InvalidParameter);
}

TEST(RunSweep, SinglePointEqualsDirectEvaluation) {
  SweepSpec s;
  s.base.d = 0.5;
  s.temperature = 0.3;
  s.axes = {Axis::linspace(AxisKind::b, 0.2, 0.2, 1)};
  const SweepResult r = run_sweep(s);
  ASSERT_EQ(r.rows.size(), 1u);
  DimerParams p = s.base;
  p.b = 0.2;
  const ComplexMatrix rho = gibbs_state_analytic(p, 0.3).rho;
  EXPECT_EQ(*r.rows[0].hs_min, hs_min(rho));
  EXPECT_EQ(*r.rows[0].f_min, f_min(rho));
  EXPECT_EQ(*r.rows[0].negativity, negativity(rho));
  EXPECT_EQ(r.rows[0].z, partition_function(p, 0.3));
  EXPECT_EQ(r.rows[0].axis1, 0.2);
  EXPECT_FALSE(r.rows[0].axis2.has_value());
}

TEST(RunSweep, RowCountAndRowMajorOrder) {
  const SweepResult r = run_sweep(simple_spec(), 1);
  ASSERT_EQ(r.rows.size(), 12u);
  EXPECT_EQ(simple_spec().size(), 12u);
  EXPECT_EQ(r.rows[0].axis1, 0.1);
  EXPECT_EQ(*r.rows[0].axis2, 0.2);
  EXPECT_EQ(r.rows[1].axis1, 0.1);
  EXPECT_NEAR(*r.rows[1].axis2, 0.6, 1e-15);
  EXPECT_EQ(r.rows[3].axis1, 0.4);
  EXPECT_EQ(*r.rows[11].axis2, 1.0);
}

TEST(RunSweep, DeterministicAcrossParallelism) {
  const std::string serial = to_csv(run_sweep(simple_spec(), 1));
  EXPECT_EQ(serial, to_csv(run_sweep(simple_spec(), 4)));
  EXPECT_EQ(serial, to_csv(run_sweep(simple_spec(), 0)));
}

TEST(RunSweep, FailedPointsAreFlaggedNotDropped) {
  SweepSpec s;
  s.axes = {Axis::values_of(AxisKind::t, {-1.0, 0.0, 0.5})};
  const SweepResult r = run_sweep(s);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].status, "NonPositiveTemperature");
  EXPECT_EQ(r.rows[1].status, "NonPositiveTemperature");
  EXPECT_EQ(r.rows[2].status, "ok");
  EXPECT_FALSE(r.rows[0].hs_min.has_value());
}

TEST(RunSweep, UnrequestedMeasuresStayEmpty) {
  SweepSpec s = simple_spec();
  s.measures = {false, false, true};
  for (const auto& row : run_sweep(s).rows) {
    EXPECT_FALSE(row.hs_min.has_value());
    EXPECT_FALSE(row.f_min.has_value());
    EXPECT_TRUE(row.negativity.has_value());
  }
}

TEST(RunSweep, CuniHsMinNonincreasingInTemperatureAtOneTesla) {
  SweepSpec s;
  s.base = DimerParams::cuni(1.0);
  s.axes = {Axis::linspace(AxisKind::t, 0.1, 300.0, 300)};
  s.measures = {true, false, false};
  const SweepResult r = run_sweep(s);
  for (std::size_t i = 1; i < r.rows.size(); ++i) EXPECT_LE(*r.rows[i].hs_min, *r.rows[i - 1].hs_min) << i;
}

TEST(RunSweep, HighFieldCorrelationReemergesWithTemperature) {
  SweepSpec s;
  s.base = DimerParams::cuni(150.0);
  s.axes = {Axis::linspace(AxisKind::t, 0.1, 300.0, 300)};
  s.measures = {true, true, false};
  const SweepResult r = run_sweep(s);
  EXPECT_LT(*r.rows.front().hs_min, 1e-6);
  EXPECT_LT(*r.rows.front().f_min, 1e-6);
  double hs = 0.0, f = 0.0;
  for (const auto& row : r.rows) {
    hs = std::max(hs, *row.hs_min);
    f = std::max(f, *row.f_min);
  }
  EXPECT_GT(hs, 1e-4);
  EXPECT_GT(f, 1e-4);
}

TEST(Bisect, SyntheticMonotoneMeasure) {
  auto f = [](double x) { return std::max(0.0, 0.5 - x); };
  EXPECT_NEAR(bisect_crossing(f, 0.0, 1.0, 1e-9), 0.5 - kThresholdCutoff, 1e-9);
  auto g = [](double x) { return std::max(0.0, x - 0.5); };
  EXPECT_NEAR(bisect_crossing(g, 0.0, 1.0, 1e-9, 0.0), 0.5, 1e-9);
  EXPECT_THROW(bisect_crossing(f, 0.6, 1.0, 1e-9), BracketInvalid);
  EXPECT_THROW(bisect_crossing(f, 0.0, 0.4, 1e-9), BracketInvalid);
  EXPECT_THROW(bisect_crossing(f, 0.0, 1.0, 0.0), InvalidParameter);
}

TEST(Threshold, CuniEntanglementDeathTemperature) {
  ThresholdQuery q;
  q.base = DimerParams::cuni(0.01);
  q.moving = MovingVariable::t;
  q.measure = MeasureKind::negativity;
  q.lo = 1.0;
  q.hi = 300.0;
  q.tol = 1e-3;
  const double t_star = find_threshold(q);
  EXPECT_GE(t_star, 127.0);
  EXPECT_LE(t_star, 155.0);
}

TEST(Threshold, AnisotropyWidensCorrelatedFieldRange) {
  EXPECT_GT(hs_threshold_b(1.5, MeasureKind::hs_min), hs_threshold_b(-0.5, MeasureKind::hs_min));
  EXPECT_GT(hs_threshold_b(1.5, MeasureKind::f_min), hs_threshold_b(-0.5, MeasureKind::f_min));
}

TEST(Threshold, InvalidBracket) {
  ThresholdQuery q;
  q.base = DimerParams::cuni(0.01);
  q.moving = MovingVariable::t;
  q.measure = MeasureKind::negativity;
  q.lo = 200.0;
  q.hi = 300.0;
  EXPECT_THROW(find_threshold(q), BracketInvalid);
}

TEST(Presets, AllPassInvariants) {
  for (auto name : kPresetNames) {
    const auto specs = figure_preset(name);
    ASSERT_FALSE(specs.empty()) << name;
    for (const auto& s : specs) EXPECT_NO_THROW(s.validate()) << name << " " << s.label;
  }
  EXPECT_THROW(figure_preset("fig7"), UnknownPreset);
}

TEST(Presets, Fig1) {
  const auto specs = figure_preset("fig1");
  ASSERT_EQ(specs.size(), 2u);
  std::vector<double> dj;
  for (const auto& s : specs) {
    dj.push_back(s.base.d / s.base.j);
    EXPECT_EQ(s.base.g1, 2.0);
    EXPECT_EQ(s.base.g2, 2.0);
    EXPECT_EQ(s.base.delta, 1.0);
    EXPECT_EQ(s.base.units.mode, UnitMode::dimensionless);
    EXPECT_EQ(s.axes[0].kind, AxisKind::b);
    EXPECT_EQ(s.axes[1].kind, AxisKind::t);
    EXPECT_EQ(s.axes[1].values(), (std::vector<double>{0.1, 0.5, 1.0, 2.0}));
  }
  EXPECT_EQ(dj, (std::vector<double>{-0.5, 1.5}));

  PresetOptions opt;
  opt.temperatures = std::vector<double>{0.2, 0.4};
  EXPECT_EQ(figure_preset("fig1", opt)[0].axes[1].values(), (std::vector<double>{0.2, 0.4}));
}

TEST(Presets, Fig3ShipsBothReadings) {
  const auto specs = figure_preset("fig3");
  ASSERT_EQ(specs.size(), 6u);
  std::vector<std::pair<double, double>> gs;
  for (const auto& s : specs) gs.emplace_back(s.base.g1, s.base.g2);
  EXPECT_NE(std::find(gs.begin(), gs.end(), std::pair{2.2, 2.2}), gs.end());
  EXPECT_NE(std::find(gs.begin(), gs.end(), std::pair{2.2, 2.0}), gs.end());
  EXPECT_NE(std::find(gs.begin(), gs.end(), std::pair{2.0, 2.2}), gs.end());
  std::vector<std::string> labels;
  for (const auto& s : specs) labels.push_back(s.label);
  std::sort(labels.begin(), labels.end());
  EXPECT_EQ(std::adjacent_find(labels.begin(), labels.end()), labels.end());
}

TEST(Presets, Fig4UsesCuni) {
  const auto specs = figure_preset("fig4");
  ASSERT_EQ(specs.size(), 1u);
  const auto& p = specs[0].base;
  EXPECT_EQ(p.j, 141.0);
  EXPECT_EQ(p.g1, 2.2);
  EXPECT_EQ(p.g2, 2.29);
  EXPECT_EQ(p.d, 0.0);
  EXPECT_EQ(p.units.mode, UnitMode::physical);
  EXPECT_EQ(specs[0].axes[0].kind, AxisKind::t);
  EXPECT_EQ(specs[0].axes[1].kind, AxisKind::b);
}
