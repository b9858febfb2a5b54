#pragma once

// JSON and CSV serialization.
//
// Sweep CSV header:
//   axis1,axis2,Z,purity,x_norm,hs_min,f_min,negativity,status
// Numbers carry 12 significant digits; empty cells mark a missing axis2 or an
// unrequested measure.

#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "spindimer/error.hpp"
#include "spindimer/measures.hpp"
#include "spindimer/model.hpp"
#include "spindimer/sweep.hpp"
#include "spindimer/thermal.hpp"

namespace spindimer {

using nlohmann::json;

inline constexpr std::string_view kCsvHeader = "axis1,axis2,Z,purity,x_norm,hs_min,f_min,negativity,status";

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline json to_json(const DimerParams& p) {
  json j;
  j["units"] = std::string(to_string(p.units.mode));
  if (p.units.mode == UnitMode::physical) {
    j["j_over_kb_kelvin"] = p.j;
    j["d_over_kb_kelvin"] = p.d;
  } else {
    j["j"] = p.j;
    j["d_over_j"] = p.d / p.j;
  }
  j["delta"] = p.delta;
  j["g1"] = p.g1;
  j["g2"] = p.g2;
  j["b"] = p.b;
  return j;
}

/// Non-finite doubles (an overflowed Z) serialize as null.
inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const ThermalState& ts) {
  json j;
  j["basis"] = json::array();
  for (auto label : kBasisLabels) j["basis"].push_back(std::string(label));
  json rho = json::array();
  for (std::size_t r = 0; r < ts.rho.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < ts.rho.cols(); ++c) row.push_back({ts.rho(r, c).real(), ts.rho(r, c).imag()});
    rho.push_back(std::move(row));
  }
  j["rho"] = std::move(rho);
  j["Z"] = number_or_null(ts.partition());
  j["log_Z"] = ts.log_partition;
  j["beta"] = ts.beta;
  j["purity"] = ts.purity();
  j["params"] = to_json(ts.params);
  return j;
}

inline json to_json(const MeasureReport& r) {
  json j;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  j["hs_min"] = opt(r.hs_min);
  j["f_min"] = opt(r.f_min);
  j["negativity"] = opt(r.negativity);
  j["purity"] = r.purity;
  j["x_norm"] = r.marginal_bloch_norm;
  j["branch"] = std::string(to_string(r.branch));
  return j;
}

inline json to_json(const SweepRow& row) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j;
  j["axis1"] = row.axis1;
  j["axis2"] = opt(row.axis2);
  j["Z"] = number_or_null(row.z);
  j["purity"] = row.purity;
  j["x_norm"] = row.x_norm;
  j["hs_min"] = opt(row.hs_min);
  j["f_min"] = opt(row.f_min);
  j["negativity"] = opt(row.negativity);
  j["status"] = row.status;
  return j;
}

inline json to_json(const SweepResult& res) {
  json j;
  j["label"] = res.spec.label;
  j["axes"] = json::array();
  for (const auto& a : res.spec.axes) j["axes"].push_back(std::string(to_string(a.kind)));
  j["params"] = to_json(res.spec.base);
  j["rows"] = json::array();
  for (const auto& row : res.rows) j["rows"].push_back(to_json(row));
  return j;
}

/// Reads a sweep row, or the measure fields of a `point` report. Missing or
/// null fields stay empty; a missing Z reads as +inf.
inline SweepRow row_from_json(const json& j) {
  auto opt = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
  };
  SweepRow row;
  row.axis1 = opt("axis1").value_or(0.0);
  row.axis2 = opt("axis2");
  row.z = opt("Z").value_or(INFINITY);
  row.purity = opt("purity").value_or(0.0);
  row.x_norm = opt("x_norm").value_or(0.0);
  row.hs_min = opt("hs_min");
  row.f_min = opt("f_min");
  row.negativity = opt("negativity");
  row.status = j.value("status", std::string("ok"));
  return row;
}

inline void write_csv_header(std::ostream& os) { os << kCsvHeader << '\n'; }

inline void write_csv_row(std::ostream& os, const SweepRow& row) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  os << format_number(row.axis1) << ',' << opt(row.axis2) << ',' << format_number(row.z) << ','
     << format_number(row.purity) << ',' << format_number(row.x_norm) << ',' << opt(row.hs_min) << ','
     << opt(row.f_min) << ',' << opt(row.negativity) << ',' << row.status << '\n';
}

inline void write_csv(std::ostream& os, const SweepResult& res) {
  write_csv_header(os);
  for (const auto& row : res.rows) write_csv_row(os, row);
}

inline std::string to_csv(const SweepResult& res) {
  std::ostringstream os;
  write_csv(os, res);
  return os.str();
}

inline std::vector<SweepRow> read_sweep_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw ConfigError("sweep CSV: missing or unexpected header");
  std::vector<SweepRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 9) throw ConfigError("sweep CSV line " + std::to_string(lineno) + ": expected 9 cells");
    auto num = [&](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      } catch (const std::exception&) {
        throw ConfigError("sweep CSV line " + std::to_string(lineno) + ": bad number '" + s + "'");
      }
    };
    SweepRow row;
    row.axis1 = num(cells[0]).value_or(0.0);
    row.axis2 = num(cells[1]);
    row.z = num(cells[2]).value_or(0.0);
    row.purity = num(cells[3]).value_or(0.0);
    row.x_norm = num(cells[4]).value_or(0.0);
    row.hs_min = num(cells[5]);
    row.f_min = num(cells[6]);
    row.negativity = num(cells[7]);
    row.status = cells[8];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace spindimer
