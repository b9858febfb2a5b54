// spindimer: thermal quantum correlations of the mixed spin-(1/2, 1) dimer.
//
//   spindimer point     --t 0.3 --b 0.2 ...      MeasureReport as JSON
//   spindimer sweep     --axis1 b:0:3:121 ...    CSV (or JSON with --json)
//   spindimer figure    fig4 --out fig4.csv      figure preset CSVs
//   spindimer threshold --moving t --measure negativity --lo 1 --hi 300 ...
//   spindimer selftest                           closed-form vs numeric suites
//
// Exit codes: 0 success, 1 validation error, 2 numerical guard failure,
// 64 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "spindimer/spindimer.hpp"

namespace {

using namespace spindimer;

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitUsage = 64;

/// Options whose values feed the flag layer of the configuration.
struct FlagBindings {
  std::vector<std::pair<CLI::Option*, std::string>> options;
  std::vector<std::unique_ptr<std::string>> storage;
  std::string config_path;
  bool json = false;

  void bind(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    storage.push_back(std::make_unique<std::string>());
    options.emplace_back(app->add_option(flag, *storage.back(), help), key);
  }

  [[nodiscard]] KeyValues collect() const {
    KeyValues kv;
    for (std::size_t i = 0; i < options.size(); ++i) {
      const auto& [opt, key] = options[i];
      if (opt->count() > 0) kv[key] = {*storage[i], opt->get_name()};
    }
    return kv;
  }
};

void add_common_flags(CLI::App* app, FlagBindings& f) {
  app->add_option("--config", f.config_path, "INI config file (default: $SPINDIMER_CONFIG)");
  f.bind(app, "--units", "model.units", "dimensionless | physical");
  f.bind(app, "--j", "model.j", "exchange coupling (dimensionless mode)");
  f.bind(app, "--j-over-kb-kelvin", "model.j_over_kb_kelvin", "J/k_B in Kelvin (physical mode)");
  f.bind(app, "--delta", "model.delta", "XXZ anisotropy");
  f.bind(app, "--d-over-j", "model.d_over_j", "single-ion anisotropy D/J (dimensionless mode)");
  f.bind(app, "--d-over-kb-kelvin", "model.d_over_kb_kelvin", "D/k_B in Kelvin (physical mode)");
  f.bind(app, "--g1", "model.g1", "spin-1/2 g-factor");
  f.bind(app, "--g2", "model.g2", "spin-1 g-factor");
  f.bind(app, "--b", "model.b", "field: mu_B B in units of J, or Tesla");
  f.bind(app, "--t", "model.t", "temperature: k_B T in units of J, or Kelvin");
  f.bind(app, "--out", "run.out", "output path");
  f.bind(app, "--parallel", "run.parallel", "worker threads (0 = all cores)");
  f.bind(app, "--grid", "run.grid", "oracle grid PHIxTHETA, e.g. 360x180");
}

CliConfig load_config(const FlagBindings& f, const std::string& command) {
  KeyValues file;
  std::string path = f.config_path;
  if (path.empty())
    if (const char* env = std::getenv("SPINDIMER_CONFIG")) path = env;
  if (!path.empty()) file = read_ini_file(path);
  KeyValues flags = f.collect();
  flags["run.command"] = {command, "subcommand"};
  if (f.json) flags["run.format"] = {"json", "--json"};
  return resolve_config(std::move(file), flags);
}

double require_temperature(const CliConfig& cfg) {
  if (!cfg.temperature) throw ConfigError("a temperature is required (--t or [model] t)");
  return *cfg.temperature;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

std::string render(const SweepResult& res, const std::string& format) {
  return format == "json" ? to_json(res).dump(2) + "\n" : to_csv(res);
}

int cmd_point(const CliConfig& cfg) {
  const double t = require_temperature(cfg);
  const ThermalState ts = gibbs_state_analytic(cfg.model, t);
  const MeasureReport r = measure_state(ts.rho, {}, cfg.run.grid);
  json j = to_json(r);
  j["params"] = to_json(cfg.model);
  j["t"] = t;
  j["Z"] = number_or_null(ts.partition());
  j["log_Z"] = ts.log_partition;
  j["status"] = "ok";
  j["thermal_state"] = to_json(ts);
  write_text(cfg.run.out, j.dump(2) + "\n");
  return 0;
}

int cmd_sweep(const CliConfig& cfg) {
  if (cfg.sweep.axes.empty()) throw ConfigError("sweep requires --axis1 (KIND:MIN:MAX:POINTS)");
  SweepSpec spec;
  spec.label = "sweep";
  spec.base = cfg.model;
  spec.axes = cfg.sweep.axes;
  spec.measures = cfg.sweep.measures;
  spec.grid = cfg.run.grid;
  bool has_t_axis = false;
  for (const auto& a : spec.axes) has_t_axis |= a.kind == AxisKind::t;
  if (!has_t_axis) spec.temperature = require_temperature(cfg);
  write_text(cfg.run.out, render(run_sweep(spec, cfg.run.parallel), cfg.run.format));
  return 0;
}

int cmd_figure(const CliConfig& cfg, const std::string& name) {
  PresetOptions opt;
  opt.temperatures = cfg.sweep.temperatures;
  opt.grid = cfg.run.grid;
  const std::vector<SweepSpec> specs = figure_preset(name, opt);
  const std::string ext = cfg.run.format == "json" ? ".json" : ".csv";
  const std::filesystem::path out = cfg.run.out.empty() ? std::filesystem::path(name + ext) : std::filesystem::path(cfg.run.out);
  for (const auto& spec : specs) {
    std::filesystem::path path = out;
    if (specs.size() > 1)
      path = out.parent_path() / (out.stem().string() + "_" + spec.label + out.extension().string());
    write_text(path.string(), render(run_sweep(spec, cfg.run.parallel), cfg.run.format));
    std::cout << path.string() << '\n';
  }
  return 0;
}

int cmd_threshold(const CliConfig& cfg) {
  ThresholdQuery q;
  q.base = cfg.model;
  q.moving = cfg.run.moving;
  q.measure = cfg.run.measure;
  q.grid = cfg.run.grid;
  q.tol = cfg.run.tol;
  if (!cfg.run.lo || !cfg.run.hi) throw ConfigError("threshold requires --lo and --hi");
  q.lo = *cfg.run.lo;
  q.hi = *cfg.run.hi;
  if (q.moving == MovingVariable::b) q.temperature = require_temperature(cfg);
  std::cout << format_number(find_threshold(q)) << '\n';
  return 0;
}

int cmd_selftest(const CliConfig& cfg) {
  const SelftestReport rep = run_selftest(cfg.run.grid);
  for (const auto& s : rep.suites)
    std::cout << (s.ok() ? "PASS " : "FAIL ") << s.name << ": " << s.passed << "/" << s.total
              << " (worst " << format_number(s.worst) << ", tol " << format_number(s.tolerance) << ")\n";
  std::cout << (rep.ok() ? "selftest passed" : "selftest FAILED") << '\n';
  return rep.ok() ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal quantum correlations of the mixed spin-(1/2,1) Heisenberg dimer"};
  app.require_subcommand(1);

  FlagBindings point_f, sweep_f, figure_f, threshold_f, selftest_f;

  auto* point = app.add_subcommand("point", "evaluate all measures at one parameter point");
  add_common_flags(point, point_f);

  auto* sweep = app.add_subcommand("sweep", "evaluate measures over a 1D or 2D grid");
  add_common_flags(sweep, sweep_f);
  sweep_f.bind(sweep, "--axis1", "sweep.axis1", "KIND:MIN:MAX:POINTS or KIND:V1,V2,...");
  sweep_f.bind(sweep, "--axis2", "sweep.axis2", "second axis, same syntax");
  sweep_f.bind(sweep, "--measures", "sweep.measures", "comma list of hs_min,f_min,negativity");
  sweep->add_flag("--json", sweep_f.json, "write JSON instead of CSV");

  std::string preset;
  auto* figure = app.add_subcommand("figure", "regenerate the data behind a figure preset");
  figure->add_option("preset", preset, "fig1 .. fig6")->required();
  add_common_flags(figure, figure_f);
  figure_f.bind(figure, "--temperatures", "sweep.temperatures", "comma list overriding the preset temperatures");
  figure->add_flag("--json", figure_f.json, "write JSON instead of CSV");

  auto* threshold = app.add_subcommand("threshold", "bisect for the point where a measure vanishes");
  add_common_flags(threshold, threshold_f);
  threshold_f.bind(threshold, "--moving", "run.moving", "b | t");
  threshold_f.bind(threshold, "--measure", "run.measure", "hs_min | f_min | negativity");
  threshold_f.bind(threshold, "--lo", "run.lo", "bracket start");
  threshold_f.bind(threshold, "--hi", "run.hi", "bracket end");
  threshold_f.bind(threshold, "--tol", "run.tol", "absolute tolerance on the moving variable");

  auto* selftest = app.add_subcommand("selftest", "run the closed-form vs numerical cross-checks");
  add_common_flags(selftest, selftest_f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (point->parsed()) return cmd_point(load_config(point_f, "point"));
    if (sweep->parsed()) return cmd_sweep(load_config(sweep_f, "sweep"));
    if (figure->parsed()) return cmd_figure(load_config(figure_f, "figure"), preset);
    if (threshold->parsed()) return cmd_threshold(load_config(threshold_f, "threshold"));
    if (selftest->parsed()) return cmd_selftest(load_config(selftest_f, "selftest"));
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
