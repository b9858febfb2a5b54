#pragma once

// INI-style configuration for the command-line front end.
//
//   [model]  units, j, d_over_j | j_over_kb_kelvin, d_over_kb_kelvin, delta, g1, g2, b, t
//   [sweep]  axis1, axis2, measures, temperatures
//   [run]    command, out, parallel, grid, format, moving, measure, lo, hi, tol
//
// Values resolve as command-line flags > config file > defaults. Flags that
// select a unit system replace the file's unit keys wholesale.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "spindimer/error.hpp"
#include "spindimer/measures.hpp"
#include "spindimer/model.hpp"
#include "spindimer/sweep.hpp"

namespace spindimer {

struct ConfigEntry {
  std::string value;
  std::string origin;  // "path:line" or "--flag"
};

/// Flattened "section.key" -> entry.
using KeyValues = std::map<std::string, ConfigEntry>;

inline const std::map<std::string, std::set<std::string>>& config_schema() {
  static const std::map<std::string, std::set<std::string>> schema = {
      {"model", {"units", "j", "d_over_j", "j_over_kb_kelvin", "d_over_kb_kelvin", "delta", "g1", "g2", "b", "t"}},
      {"sweep", {"axis1", "axis2", "measures", "temperatures"}},
      {"run", {"command", "out", "parallel", "grid", "format", "moving", "measure", "lo", "hi", "tol"}},
  };
  return schema;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

inline KeyValues parse_ini(std::string_view text, std::string_view origin) {
  KeyValues kv;
  std::string section;
  std::istringstream is{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  const auto& schema = config_schema();
  while (std::getline(is, raw)) {
    ++lineno;
    const std::string where = std::string(origin) + ":" + std::to_string(lineno);
    const std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      if (!schema.contains(section)) throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    if (section.empty()) throw ConfigError(where + ": key outside of a section");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (!schema.at(section).contains(key))
      throw ConfigError(where + ": unknown key '" + key + "' in [" + section + "]");
    const std::string full = section + "." + key;
    if (kv.contains(full)) throw ConfigError(where + ": duplicate key '" + key + "'");
    kv[full] = {value, where};
  }
  return kv;
}

inline double parse_double(const ConfigEntry& e, std::string_view key) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v))
    throw ConfigError(e.origin + ": '" + std::string(key) + "' expects a number, got '" + e.value + "'");
  return v;
}

inline std::size_t parse_count(const ConfigEntry& e, std::string_view key) {
  std::size_t v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw ConfigError(e.origin + ": '" + std::string(key) + "' expects a non-negative integer, got '" + e.value + "'");
  return v;
}

inline std::vector<double> parse_double_list(const ConfigEntry& e, std::string_view key) {
  std::vector<double> out;
  for (const auto& s : detail::split(e.value, ',')) out.push_back(parse_double({s, e.origin}, key));
  return out;
}

/// "360x180" -> phi x theta.
inline GridResolution parse_grid(const ConfigEntry& e) {
  const auto parts = detail::split(e.value, 'x');
  if (parts.size() != 2) throw ConfigError(e.origin + ": grid expects PHIxTHETA, got '" + e.value + "'");
  GridResolution g{parse_count({parts[0], e.origin}, "grid"), parse_count({parts[1], e.origin}, "grid")};
  if (g.phi < 1 || g.theta < 2) throw ConfigError(e.origin + ": grid resolution too small");
  return g;
}

/// "b:0:3:121" (evenly spaced) or "t:0.1,0.5,1" (explicit values).
inline Axis parse_axis(const ConfigEntry& e) {
  const auto parts = detail::split(e.value, ':');
  try {
    const AxisKind kind = parse_axis_kind(parts[0]);
    Axis a;
    if (parts.size() == 2) {
      a = Axis::values_of(kind, parse_double_list({parts[1], e.origin}, "axis"));
    } else if (parts.size() == 4) {
      a = Axis::linspace(kind, parse_double({parts[1], e.origin}, "axis"), parse_double({parts[2], e.origin}, "axis"),
                         parse_count({parts[3], e.origin}, "axis"));
    } else {
      throw ConfigError(e.origin + ": axis expects KIND:MIN:MAX:POINTS or KIND:V1,V2,..., got '" + e.value + "'");
    }
    a.validate();
    return a;
  } catch (const InvalidParameter& ex) {
    throw ConfigError(e.origin + ": " + ex.what());
  }
}

inline MeasureSet parse_measures(const ConfigEntry& e) {
  MeasureSet m{false, false, false};
  for (const auto& s : detail::split(e.value, ',')) {
    if (s == "hs_min") m.hs_min = true;
    else if (s == "f_min") m.f_min = true;
    else if (s == "negativity") m.negativity = true;
    else throw ConfigError(e.origin + ": unknown measure '" + s + "'");
  }
  return m;
}

struct SweepOptions {
  std::vector<Axis> axes;
  MeasureSet measures;
  std::optional<std::vector<double>> temperatures;
};

struct RunOptions {
  std::string command;
  std::string out;
  std::size_t parallel = 0;  // 0: one worker per hardware thread
  GridResolution grid;
  std::string format = "csv";
  MovingVariable moving = MovingVariable::b;
  MeasureKind measure = MeasureKind::hs_min;
  std::optional<double> lo;
  std::optional<double> hi;
  double tol = 1e-6;
};

struct CliConfig {
  DimerParams model;
  std::optional<double> temperature;
  SweepOptions sweep;
  RunOptions run;
};

inline constexpr std::array<std::string_view, 2> kDimensionlessKeys = {"model.j", "model.d_over_j"};
inline constexpr std::array<std::string_view, 2> kPhysicalKeys = {"model.j_over_kb_kelvin", "model.d_over_kb_kelvin"};
inline constexpr std::array<std::string_view, 6> kCommands = {"point", "sweep", "figure", "threshold", "selftest", ""};

namespace detail {

inline bool has_any(const KeyValues& kv, std::span<const std::string_view> keys) {
  for (auto k : keys)
    if (kv.contains(std::string(k))) return true;
  return false;
}

/// Unit mode implied by one layer of settings, if any.
inline std::optional<UnitMode> layer_mode(const KeyValues& kv) {
  const bool dimless = has_any(kv, kDimensionlessKeys);
  const bool phys = has_any(kv, kPhysicalKeys);
  if (dimless && phys) {
    const auto& e = kv.count("model.j_over_kb_kelvin") ? kv.at("model.j_over_kb_kelvin") : kv.at("model.d_over_kb_kelvin");
    throw ConfigError(e.origin + ": both dimensionless and physical unit keys are set");
  }
  std::optional<UnitMode> mode;
  if (dimless) mode = UnitMode::dimensionless;
  if (phys) mode = UnitMode::physical;
  if (auto it = kv.find("model.units"); it != kv.end()) {
    UnitMode declared;
    if (it->second.value == "dimensionless") declared = UnitMode::dimensionless;
    else if (it->second.value == "physical") declared = UnitMode::physical;
    else throw ConfigError(it->second.origin + ": units must be 'dimensionless' or 'physical'");
    if (mode && *mode != declared)
      throw ConfigError(it->second.origin + ": units '" + it->second.value + "' contradicts the unit keys present");
    mode = declared;
  }
  return mode;
}

}  // namespace detail

/// Merges a file layer and a flag layer and validates the result.
inline CliConfig resolve_config(KeyValues file, const KeyValues& flags) {
  const auto file_mode = detail::layer_mode(file);
  const auto flag_mode = detail::layer_mode(flags);
  if (flag_mode && file_mode && *flag_mode != *file_mode) {
    for (auto k : kDimensionlessKeys) file.erase(std::string(k));
    for (auto k : kPhysicalKeys) file.erase(std::string(k));
    file.erase("model.units");
  }
  KeyValues kv = std::move(file);
  for (const auto& [k, v] : flags) kv[k] = v;
  const UnitMode mode = detail::layer_mode(kv).value_or(UnitMode::dimensionless);

  auto get = [&](const char* key) -> const ConfigEntry* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto num = [&](const char* key, double fallback) {
    const ConfigEntry* e = get(key);
    return e ? parse_double(*e, key) : fallback;
  };

  CliConfig cfg;
  DimerParams& p = cfg.model;
  if (mode == UnitMode::physical) {
    p.units = UnitSystem::physical();
    const ConfigEntry* j = get("model.j_over_kb_kelvin");
    if (!j) throw ConfigError("physical units require j_over_kb_kelvin");
    p.j = parse_double(*j, "j_over_kb_kelvin");
    p.d = num("model.d_over_kb_kelvin", 0.0);
  } else {
    p.units = UnitSystem::dimensionless();
    p.j = num("model.j", 1.0);
    p.d = num("model.d_over_j", 0.0) * p.j;
  }
  p.delta = num("model.delta", 1.0);
  p.g1 = num("model.g1", 2.0);
  p.g2 = num("model.g2", 2.0);
  p.b = num("model.b", 0.0);
  if (p.b < 0.0) throw ConfigError(get("model.b")->origin + ": field must be non-negative");
  try {
    p.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  if (const ConfigEntry* t = get("model.t")) {
    const double tv = parse_double(*t, "t");
    if (!(tv > 0.0)) throw ConfigError(t->origin + ": temperature must be strictly positive");
    cfg.temperature = tv;
  }

  if (const ConfigEntry* e = get("sweep.axis1")) cfg.sweep.axes.push_back(parse_axis(*e));
  if (const ConfigEntry* e = get("sweep.axis2")) {
    if (cfg.sweep.axes.empty()) throw ConfigError(e->origin + ": axis2 given without axis1");
    cfg.sweep.axes.push_back(parse_axis(*e));
  }
  if (const ConfigEntry* e = get("sweep.measures")) cfg.sweep.measures = parse_measures(*e);
  if (const ConfigEntry* e = get("sweep.temperatures")) {
    cfg.sweep.temperatures = parse_double_list(*e, "temperatures");
    for (double t : *cfg.sweep.temperatures)
      if (!(t > 0.0)) throw ConfigError(e->origin + ": temperatures must be strictly positive");
  }

  RunOptions& run = cfg.run;
  if (const ConfigEntry* e = get("run.command")) {
    run.command = e->value;
    if (std::find(kCommands.begin(), kCommands.end(), run.command) == kCommands.end())
      throw ConfigError(e->origin + ": unknown command '" + run.command + "'");
  }
  if (const ConfigEntry* e = get("run.out")) run.out = e->value;
  if (const ConfigEntry* e = get("run.parallel")) run.parallel = parse_count(*e, "parallel");
  if (const ConfigEntry* e = get("run.grid")) run.grid = parse_grid(*e);
  if (const ConfigEntry* e = get("run.format")) {
    if (e->value != "csv" && e->value != "json") throw ConfigError(e->origin + ": format must be csv or json");
    run.format = e->value;
  }
  if (const ConfigEntry* e = get("run.moving")) {
    if (e->value == "b") run.moving = MovingVariable::b;
    else if (e->value == "t") run.moving = MovingVariable::t;
    else throw ConfigError(e->origin + ": moving must be 'b' or 't'");
  }
  if (const ConfigEntry* e = get("run.measure")) {
    try {
      run.measure = parse_measure_kind(e->value);
    } catch (const InvalidParameter& ex) {
      throw ConfigError(e->origin + ": " + ex.what());
    }
  }
  if (const ConfigEntry* e = get("run.lo")) run.lo = parse_double(*e, "lo");
  if (const ConfigEntry* e = get("run.hi")) run.hi = parse_double(*e, "hi");
  run.tol = num("run.tol", run.tol);
  if (!(run.tol > 0.0)) throw ConfigError("tol must be strictly positive");
  return cfg;
}

inline KeyValues read_ini_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ini(ss.str(), path.string());
}

inline CliConfig parse_config(const std::filesystem::path& path) { return resolve_config(read_ini_file(path), {}); }

}  // namespace spindimer
