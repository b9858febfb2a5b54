#pragma once

// Grid evaluation of the correlation measures, threshold bisection and the
// named figure presets.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "spindimer/error.hpp"
#include "spindimer/measures.hpp"
#include "spindimer/model.hpp"
#include "spindimer/thermal.hpp"

namespace spindimer {

enum class AxisKind { b, t, d_over_j, g1, g2, delta };

inline std::string_view to_string(AxisKind k) {
  switch (k) {
    case AxisKind::b: return "b";
    case AxisKind::t: return "t";
    case AxisKind::d_over_j: return "d_over_j";
    case AxisKind::g1: return "g1";
    case AxisKind::g2: return "g2";
    case AxisKind::delta: return "delta";
  }
  return "?";
}

inline AxisKind parse_axis_kind(std::string_view s) {
  for (AxisKind k : {AxisKind::b, AxisKind::t, AxisKind::d_over_j, AxisKind::g1, AxisKind::g2, AxisKind::delta})
    if (s == to_string(k)) return k;
  throw InvalidParameter("unknown sweep axis '" + std::string(s) + "'");
}

/// A sweep axis: either `points` evenly spaced values on [min, max], or an
/// explicit list of values (used for the fixed temperature or field families
/// of the figure presets).
struct Axis {
  AxisKind kind = AxisKind::b;
  double min = 0.0;
  double max = 1.0;
  std::size_t points = 2;
  std::vector<double> list;

  static Axis linspace(AxisKind kind, double min, double max, std::size_t points) {
    return {kind, min, max, points, {}};
  }
  static Axis values_of(AxisKind kind, std::vector<double> values) {
    Axis a{kind, 0.0, 0.0, values.size(), std::move(values)};
    if (!a.list.empty()) {
      a.min = *std::min_element(a.list.begin(), a.list.end());
      a.max = *std::max_element(a.list.begin(), a.list.end());
    }
    return a;
  }

  void validate() const {
    if (!list.empty()) {
      for (double v : list)
        if (!std::isfinite(v)) throw InvalidParameter("axis values must be finite");
      return;
    }
    if (!std::isfinite(min) || !std::isfinite(max)) throw InvalidParameter("axis bounds must be finite");
    if (points == 0) throw InvalidParameter("axis needs at least one point");
    // A single point is a degenerate grid pinned at min == max.
    if (points == 1 && min != max) throw InvalidParameter("single-point axis requires min == max");
    if (points >= 2 && !(min < max)) throw InvalidParameter("axis requires min < max");
  }

  [[nodiscard]] std::vector<double> values() const {
    if (!list.empty()) return list;
    if (points == 1) return {min};
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i)
      v[i] = i + 1 == points ? max : min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1);
    return v;
  }
};

struct SweepSpec {
  std::string label;
  DimerParams base;
  double temperature = 1.0;  // used unless an axis is the temperature
  std::vector<Axis> axes;
  MeasureSet measures;
  GridResolution grid;
  std::string output;

  void validate() const {
    if (axes.empty() || axes.size() > 2) throw InvalidParameter("a sweep needs one or two axes");
    if (axes.size() == 2 && axes[0].kind == axes[1].kind) throw InvalidParameter("sweep axes must differ");
    for (const auto& a : axes) a.validate();
    base.validate();
  }

  [[nodiscard]] std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.values().size();
    return n;
  }
};

struct SweepRow {
  double axis1 = 0.0;
  std::optional<double> axis2;
  double z = 0.0;
  double purity = 0.0;
  double x_norm = 0.0;
  std::optional<double> hs_min;
  std::optional<double> f_min;
  std::optional<double> negativity;
  std::string status = "ok";
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // row-major: axis1 outer, axis2 inner
};

/// Applies one axis value to the parameters or the temperature.
inline void apply_axis(AxisKind kind, double v, DimerParams& p, double& temperature) {
  switch (kind) {
    case AxisKind::b: p.b = v; break;
    case AxisKind::t: temperature = v; break;
    case AxisKind::d_over_j: p.d = v * p.j; break;
    case AxisKind::g1: p.g1 = v; break;
    case AxisKind::g2: p.g2 = v; break;
    case AxisKind::delta: p.delta = v; break;
  }
}

inline std::string status_of(const Error& e) {
  if (dynamic_cast<const NonPositiveTemperature*>(&e)) return "NonPositiveTemperature";
  if (dynamic_cast<const InvalidParameter*>(&e)) return "InvalidParameter";
  if (dynamic_cast<const NotAState*>(&e)) return "NotAState";
  if (dynamic_cast<const NonHermitianInput*>(&e)) return "NonHermitianInput";
  if (dynamic_cast<const NumericalError*>(&e)) return "NumericalError";
  return "Error";
}

/// Thermal state and requested measures at one parameter point.
inline SweepRow evaluate_point(const DimerParams& p, double temperature, MeasureSet measures = {},
                               GridResolution grid = {}) {
  SweepRow row;
  try {
    const ThermalState ts = gibbs_state_analytic(p, temperature);
    const MeasureReport r = measure_state(ts.rho, measures, grid);
    row.z = ts.partition();
    row.purity = r.purity;
    row.x_norm = r.marginal_bloch_norm;
    row.hs_min = r.hs_min;
    row.f_min = r.f_min;
    row.negativity = r.negativity;
  } catch (const Error& e) {
    row.status = status_of(e);
  }
  return row;
}

/// Evaluates every grid point of the sweep. Points are independent; workers
/// write disjoint slots of a preallocated table, so the result does not depend
/// on scheduling.
inline SweepResult run_sweep(const SweepSpec& spec, std::size_t parallelism = 0) {
  spec.validate();
  const std::vector<double> v1 = spec.axes[0].values();
  const std::vector<double> v2 = spec.axes.size() == 2 ? spec.axes[1].values() : std::vector<double>{};
  const std::size_t n2 = spec.axes.size() == 2 ? v2.size() : 1;
  const std::size_t total = v1.size() * n2;

  SweepResult result{spec, std::vector<SweepRow>(total)};
  auto work = [&](std::size_t k) {
    const std::size_t i = k / n2;
    const std::size_t j = k % n2;
    DimerParams p = spec.base;
    double temperature = spec.temperature;
    apply_axis(spec.axes[0].kind, v1[i], p, temperature);
    if (spec.axes.size() == 2) apply_axis(spec.axes[1].kind, v2[j], p, temperature);
    SweepRow row = evaluate_point(p, temperature, spec.measures, spec.grid);
    row.axis1 = v1[i];
    if (spec.axes.size() == 2) row.axis2 = v2[j];
    result.rows[k] = std::move(row);
  };

  if (parallelism == 0) parallelism = std::max(1u, std::thread::hardware_concurrency());
  parallelism = std::min(parallelism, total);
  if (parallelism <= 1) {
    for (std::size_t k = 0; k < total; ++k) work(k);
    return result;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> workers;
    workers.reserve(parallelism);
    for (std::size_t w = 0; w < parallelism; ++w)
      workers.emplace_back([&] {
        for (std::size_t k = next++; k < total; k = next++) work(k);
      });
  }
  return result;
}

enum class MeasureKind { hs_min, f_min, negativity };

inline std::string_view to_string(MeasureKind m) {
  switch (m) {
    case MeasureKind::hs_min: return "hs_min";
    case MeasureKind::f_min: return "f_min";
    case MeasureKind::negativity: return "negativity";
  }
  return "?";
}

inline MeasureKind parse_measure_kind(std::string_view s) {
  for (MeasureKind m : {MeasureKind::hs_min, MeasureKind::f_min, MeasureKind::negativity})
    if (s == to_string(m)) return m;
  throw InvalidParameter("unknown measure '" + std::string(s) + "'");
}

/// Cutoff separating a vanishing measure from a surviving one.
inline constexpr double kThresholdCutoff = 1e-6;

/// Bisection for the point where f crosses `cutoff`. One bracket end must have
/// f > cutoff and the other f <= cutoff.
inline double bisect_crossing(const std::function<double(double)>& f, double lo, double hi, double tol,
                              double cutoff = kThresholdCutoff) {
  if (!(tol > 0.0)) throw InvalidParameter("bisection tolerance must be positive");
  bool lo_above = f(lo) > cutoff;
  const bool hi_above = f(hi) > cutoff;
  if (lo_above == hi_above)
    throw BracketInvalid("measure is on the same side of the cutoff at both bracket ends");
  while (std::abs(hi - lo) > tol) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) > cutoff) == lo_above) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

enum class MovingVariable { b, t };

struct ThresholdQuery {
  DimerParams base;
  double temperature = 1.0;  // fixed temperature when moving the field
  MovingVariable moving = MovingVariable::b;
  MeasureKind measure = MeasureKind::hs_min;
  double lo = 0.0;
  double hi = 1.0;
  double tol = 1e-6;
  GridResolution grid;
};

inline double measure_value(const DimerParams& p, double temperature, MeasureKind m, GridResolution grid = {}) {
  const ComplexMatrix rho = gibbs_state_analytic(p, temperature).rho;
  switch (m) {
    case MeasureKind::hs_min: return hs_min(rho);
    case MeasureKind::f_min: return f_min(rho, grid);
    case MeasureKind::negativity: return negativity(rho);
  }
  return 0.0;
}

inline double find_threshold(const ThresholdQuery& q) {
  q.base.validate();
  auto f = [&](double v) {
    DimerParams p = q.base;
    double temperature = q.temperature;
    if (q.moving == MovingVariable::b) p.b = v;
    else temperature = v;
    return measure_value(p, temperature, q.measure, q.grid);
  };
  return bisect_crossing(f, q.lo, q.hi, q.tol);
}

/// Overrides for the figure presets.
struct PresetOptions {
  // Temperature family for fig1, fig3 (k_B T / J) and fig5 (Kelvin).
  std::optional<std::vector<double>> temperatures;
  GridResolution grid;
};

inline constexpr std::array<std::string_view, 6> kPresetNames = {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"};

inline std::string format_label_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

/// Sweep lists behind each figure.
///
/// fig1-3 use the dimensionless convention (field mu_B B / J, temperature
/// k_B T / J, J = 1); their temperature families default to {0.1, 0.5, 1, 2}.
/// fig4-6 use the CuNi parameters in Kelvin and Tesla. fig3 ships the caption
/// reading (g1 = g2 = 2.2) alongside both orderings of |g1 - g2| = 0.2.
inline std::vector<SweepSpec> figure_preset(std::string_view name, const PresetOptions& opt = {}) {
  const std::vector<double> temps_j = opt.temperatures.value_or(std::vector<double>{0.1, 0.5, 1.0, 2.0});

  DimerParams dimless;  // J = 1, Delta = 1, g1 = g2 = 2
  auto make = [&](std::string label, DimerParams base, std::vector<Axis> axes) {
    SweepSpec s;
    s.label = std::move(label);
    s.base = base;
    s.axes = std::move(axes);
    s.grid = opt.grid;
    return s;
  };

  std::vector<SweepSpec> out;
  if (name == "fig1") {
    for (double dj : {-0.5, 1.5}) {
      DimerParams p = dimless;
      p.d = dj * p.j;
      out.push_back(make("d" + format_label_value(dj), p,
                         {Axis::linspace(AxisKind::b, 0.0, 3.0, 121), Axis::values_of(AxisKind::t, temps_j)}));
    }
  } else if (name == "fig2") {
    for (double dj : {-1.5, 0.0, 1.5}) {
      DimerParams p = dimless;
      p.d = dj * p.j;
      out.push_back(make("d" + format_label_value(dj), p,
                         {Axis::linspace(AxisKind::b, 0.0, 3.0, 41), Axis::linspace(AxisKind::t, 0.02, 2.0, 41)}));
    }
  } else if (name == "fig3") {
    struct Reading {
      const char* tag;
      double g1, g2;
    };
    for (double dj : {-0.5, 1.5})
      for (const Reading r : {Reading{"caption", 2.2, 2.2}, Reading{"g1lt", 2.0, 2.2}, Reading{"g1gt", 2.2, 2.0}}) {
        DimerParams p = dimless;
        p.d = dj * p.j;
        p.g1 = r.g1;
        p.g2 = r.g2;
        out.push_back(make(std::string(r.tag) + "_d" + format_label_value(dj), p,
                           {Axis::linspace(AxisKind::b, 0.0, 3.0, 121), Axis::values_of(AxisKind::t, temps_j)}));
      }
  } else if (name == "fig4") {
    out.push_back(make("cuni", DimerParams::cuni(),
                       {Axis::linspace(AxisKind::t, 0.1, 300.0, 300),
                        Axis::values_of(AxisKind::b, {1.0, 50.0, 100.0, 150.0})}));
  } else if (name == "fig5") {
    const std::vector<double> temps_k =
        opt.temperatures.value_or(std::vector<double>{1.0, 50.0, 100.0, 150.0, 300.0});
    out.push_back(make("cuni", DimerParams::cuni(),
                       {Axis::linspace(AxisKind::b, 0.0, 200.0, 201), Axis::values_of(AxisKind::t, temps_k)}));
  } else if (name == "fig6") {
    out.push_back(make("cuni", DimerParams::cuni(),
                       {Axis::linspace(AxisKind::b, 0.0, 200.0, 41), Axis::linspace(AxisKind::t, 1.0, 300.0, 41)}));
  } else {
    throw UnknownPreset("unknown figure preset '" + std::string(name) + "'");
  }
  return out;
}

}  // namespace spindimer
