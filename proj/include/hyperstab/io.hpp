/*
 * Copyright 2026 The Hyperstab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperstab/corpus.hpp"
#include "hyperstab/energy.hpp"
#include "hyperstab/error.hpp"
#include "hyperstab/feedback.hpp"
#include "hyperstab/harness.hpp"
#include "hyperstab/rational.hpp"
#include "hyperstab/realness.hpp"
#include "hyperstab/signal.hpp"

// JSON files list polynomial coefficients in ascending powers of s, like
// Polynomial. The "num;den" strings taken on the command line list them from
// the highest power down, so "1;1,0" is 1/s.

namespace hyperstab {

using nlohmann::json;

inline std::string format_number(double x) { return detail::fmt17(x); }

inline std::vector<double> ascending(std::vector<double> descending) {
  std::reverse(descending.begin(), descending.end());
  return descending;
}

inline std::vector<double> coefficient_array(const Polynomial& p) {
  auto c = p.coeffs();
  if (c.empty()) c.push_back(0.0);
  return c;
}

namespace detail {

inline double parse_double(const std::string& text, const std::string& what) {
  const auto first = text.find_first_not_of(" \t\r");
  const auto last = text.find_last_not_of(" \t\r");
  if (first == std::string::npos) throw Error(ErrorCode::kParseError, "empty number in " + what);
  const std::string s = text.substr(first, last - first + 1);
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw Error(ErrorCode::kParseError, "not a number in " + what + ": '" + s + "'");
  return x;
}

inline std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
  if (out.empty() || (!text.empty() && text.back() == ',')) throw Error(ErrorCode::kParseError, "empty coefficient list in " + what);
  return out;
}

}  // namespace detail

/// "num;den", each a comma-separated list, highest power first.
inline RationalFunction parse_tf(const std::string& text) {
  const auto semi = text.find(';');
  if (semi == std::string::npos || text.find(';', semi + 1) != std::string::npos) {
    throw Error(ErrorCode::kParseError, "expected \"num;den\", got '" + text + "'");
  }
  const auto num = detail::parse_list(text.substr(0, semi), "numerator");
  const auto den = detail::parse_list(text.substr(semi + 1), "denominator");
  return ratfun_new(ascending(num), ascending(den));
}

// ---------------------------------------------------------------- CSV

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // one vector per column

  bool has(const std::string& name) const { return std::find(columns.begin(), columns.end(), name) != columns.end(); }

  const std::vector<double>& column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw Error(ErrorCode::kParseError, "missing column '" + name + "'");
    return data[static_cast<std::size_t>(it - columns.begin())];
  }

  std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
};

inline CsvTable parse_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParseError, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::stringstream ss(line);
    std::string name;
    while (std::getline(ss, name, ',')) {
      name.erase(0, name.find_first_not_of(" \t"));
      name.erase(name.find_last_not_of(" \t") + 1);
      if (name.empty() || t.has(name)) throw Error(ErrorCode::kParseError, "bad or duplicate CSV header '" + name + "'");
      t.columns.push_back(name);
    }
  }
  t.data.resize(t.columns.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= t.columns.size()) throw Error(ErrorCode::kParseError, "too many cells on CSV line " + std::to_string(row));
      t.data[c++].push_back(detail::parse_double(cell, "CSV line " + std::to_string(row)));
    }
    if (c != t.columns.size()) throw Error(ErrorCode::kParseError, "too few cells on CSV line " + std::to_string(row));
  }
  return t;
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  return parse_csv(in);
}

inline void write_csv(std::ostream& out, const CsvTable& t) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << format_number(t.data[c][r]);
    out << '\n';
  }
}

/// Step from the t column; the column must be uniform and start at 0.
inline double csv_step(const CsvTable& t) {
  const auto& time = t.column("t");
  if (time.size() < 2) throw Error(ErrorCode::kParseError, "need at least two rows");
  const double dt = time[1] - time[0];
  if (time[0] != 0.0 || !(dt > 0.0)) throw Error(ErrorCode::kParseError, "t must start at 0 and increase");
  for (std::size_t k = 0; k < time.size(); ++k) {
    const double expect = dt * static_cast<double>(k);
    if (std::abs(time[k] - expect) > 1e-9 * (1.0 + std::abs(expect))) {
      throw Error(ErrorCode::kParseError, "t is not uniformly spaced at row " + std::to_string(k + 2));
    }
  }
  return dt;
}

inline Signal csv_signal(const CsvTable& t, const std::string& name) {
  const double dt = csv_step(t);
  try {
    return Signal(dt, t.column(name));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError) throw;
    throw Error(ErrorCode::kParseError, "column '" + name + "': " + e.what());
  }
}

/// Columns t,u,y,v,E then e (excitation) and yf (zero-state plant output).
inline CsvTable traces_table(const SimulationRun& run) {
  CsvTable t;
  t.columns = {"t", "u", "y", "v", "E", "e", "yf"};
  t.data = {run.E.times, run.u.values(), run.y.values(), run.v.values(), run.E.E, run.e.values(), run.y_forced.values()};
  return t;
}

// ---------------------------------------------------------------- JSON

inline json to_json(const RationalFunction& g) {
  return json{{"num", coefficient_array(g.num())}, {"den", coefficient_array(g.den())}};
}

inline json to_json(const PRClassification& c) {
  json j;
  j["grade"] = to_string(c.grade);
  j["d"] = c.d;
  j["d0"] = c.d0;
  j["d1"] = c.d1;
  j["single_pole_at_origin"] = c.single_pole_at_origin;
  j["g1_grade"] = c.g1_grade ? json(to_string(*c.g1_grade)) : json(nullptr);
  j["diagnostics"] = c.diagnostics;
  j["re_min"] = c.re_min;
  j["stability"] = to_string(c.stability);
  j["relative_degree"] = c.relative_degree;
  return j;
}

/// Classification plus the phase and quadrant checks; those two are null when
/// an imaginary-axis pole falls inside the grid.
inline json classification_report(const RationalFunction& g, const FrequencyGrid& grid = {}) {
  json j = to_json(classify_pr(g, grid));
  try {
    j["phase_deviation_deg"] = phase_deviation(g, grid);
    j["quadrant_ok"] = hodograph_quadrant_check(g, grid).confined;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kPoleOnGrid) throw;
    j["phase_deviation_deg"] = nullptr;
    j["quadrant_ok"] = nullptr;
  }
  j["tf"] = to_json(g);
  return j;
}

inline json to_json(const TaxonomyVerdict& v) {
  json j;
  json labels = json::array();
  for (auto l : v.labels) labels.push_back(to_string(l));
  j["labels"] = labels;
  j["beta"] = v.beta;
  j["beta_s"] = v.beta_s ? json(*v.beta_s) : json(nullptr);
  j["gamma0_sq"] = v.gamma0_sq;
  j["residual_max"] = v.residual_max ? json(*v.residual_max) : json(nullptr);
  return j;
}

namespace detail {

[[noreturn]] inline void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kSchemaError, "field '" + field + "': " + what);
}

inline void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) field_error(where, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
      field_error(where.empty() ? key : where + "." + key, "unknown field");
    }
  }
}

inline double number(const json& j, const std::string& where, const char* key) {
  const std::string f = where.empty() ? key : where + "." + key;
  if (!j.contains(key)) field_error(f, "missing");
  if (!j.at(key).is_number()) field_error(f, "expected a number");
  return j.at(key).get<double>();
}

inline std::vector<double> numbers(const json& j, const std::string& where, const char* key) {
  const std::string f = where.empty() ? key : where + "." + key;
  if (!j.contains(key) || !j.at(key).is_array()) field_error(f, "expected a number array");
  std::vector<double> out;
  for (const auto& x : j.at(key)) {
    if (!x.is_number()) field_error(f, "expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

inline std::optional<SlopeFunction> slope_from_json(const json& j, const std::string& where) {
  if (!j.contains("slope") || j.at("slope").is_null()) return std::nullopt;
  const auto& s = j.at("slope");
  only_keys(s, where + ".slope", {"shape", "gain"});
  SlopeFunction f;
  f.gain = number(s, where + ".slope", "gain");
  const std::string shape = s.value("shape", "constant");
  if (shape == "constant") {
    f.shape = SlopeFunction::Shape::kConstant;
  } else if (shape == "tanh") {
    f.shape = SlopeFunction::Shape::kTanh;
  } else {
    field_error(where + ".slope.shape", "expected \"constant\" or \"tanh\"");
  }
  return f;
}

inline json slope_to_json(const std::optional<SlopeFunction>& s) {
  if (!s) return nullptr;
  return json{{"shape", s->shape == SlopeFunction::Shape::kTanh ? "tanh" : "constant"}, {"gain", s->gain}};
}

}  // namespace detail

/// {"kind": "...", "params": {...}}; a missing params object means defaults
/// where the kind has them.
inline DeviceSpec device_from_json(const json& jd) {
  detail::only_keys(jd, "device", {"kind", "params"});
  if (!jd.contains("kind") || !jd.at("kind").is_string()) detail::field_error("device.kind", "expected a string");
  const std::string kind = jd.at("kind").get<std::string>();
  const json j = (jd.contains("params") && !jd.at("params").is_null()) ? jd.at("params") : json::object();
  const std::string w = "device.params";
  DeviceSpec spec;
  if (kind == "StaticSector") {
    detail::only_keys(j, w, {"k1", "k2", "slope"});
    spec = StaticSector{detail::number(j, w, "k1"), detail::number(j, w, "k2"), detail::slope_from_json(j, w)};
  } else if (kind == "CubicOddPower") {
    detail::only_keys(j, w, {"p"});
    const double p = j.contains("p") ? detail::number(j, w, "p") : 3.0;
    if (p != std::floor(p) || std::abs(p) > 1e6) detail::field_error(w + ".p", "expected an integer");
    spec = CubicOddPower{static_cast<int>(p)};
  } else if (kind == "TimeVaryingGain") {
    detail::only_keys(j, w, {"dt", "k"});
    spec = TimeVaryingGain{detail::number(j, w, "dt"), detail::numbers(j, w, "k")};
  } else if (kind == "Relay") {
    detail::only_keys(j, w, {"amplitude"});
    spec = Relay{j.contains("amplitude") ? detail::number(j, w, "amplitude") : 1.0};
  } else if (kind == "RegenerativePulse") {
    detail::only_keys(j, w, {"start", "end", "amplitude"});
    const double end = (j.contains("end") && j.at("end").is_null()) ? std::numeric_limits<double>::infinity()
                                                                     : detail::number(j, w, "end");
    spec = RegenerativePulse{detail::number(j, w, "start"), end, detail::number(j, w, "amplitude")};
  } else if (kind == "DeadzoneSector") {
    detail::only_keys(j, w, {"deadzone", "k1", "k2", "slope"});
    spec = DeadzoneSector{detail::number(j, w, "deadzone"), detail::number(j, w, "k1"), detail::number(j, w, "k2"),
                          detail::slope_from_json(j, w)};
  } else {
    detail::field_error("device.kind", "unknown device '" + kind + "'");
  }
  try {
    validate(spec);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaError, std::string("field 'device.params': ") + e.what());
  }
  return spec;
}

inline json to_json(const DeviceSpec& spec) {
  const json j = std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, StaticSector>) {
          return json{{"k1", d.k1}, {"k2", d.k2}, {"slope", detail::slope_to_json(d.slope)}};
        } else if constexpr (std::is_same_v<T, CubicOddPower>) {
          return json{{"p", d.p}};
        } else if constexpr (std::is_same_v<T, TimeVaryingGain>) {
          return json{{"dt", d.dt}, {"k", d.k}};
        } else if constexpr (std::is_same_v<T, Relay>) {
          return json{{"amplitude", d.amplitude}};
        } else if constexpr (std::is_same_v<T, RegenerativePulse>) {
          return json{{"start", d.start}, {"end", std::isfinite(d.end) ? json(d.end) : json(nullptr)}, {"amplitude", d.amplitude}};
        } else {
          return json{{"deadzone", d.deadzone}, {"k1", d.k1}, {"k2", d.k2}, {"slope", detail::slope_to_json(d.slope)}};
        }
      },
      spec);
  return json{{"kind", device_kind(spec)}, {"params", j}};
}

inline Scenario scenario_from_json(const json& j) {
  detail::only_keys(j, "", {"plant", "device", "x0", "excitation", "dt", "horizon"});
  Scenario sc;
  if (!j.contains("plant")) detail::field_error("plant", "missing");
  detail::only_keys(j.at("plant"), "plant", {"num", "den"});
  try {
    sc.plant = ratfun_new(detail::numbers(j.at("plant"), "plant", "num"), detail::numbers(j.at("plant"), "plant", "den"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchemaError) throw;
    throw Error(e.code(), std::string("field 'plant': ") + e.what());
  }
  if (!j.contains("device")) detail::field_error("device", "missing");
  sc.device = device_from_json(j.at("device"));
  sc.x0 = j.contains("x0") ? detail::numbers(j, "", "x0") : std::vector<double>(static_cast<std::size_t>(sc.plant.order()), 0.0);
  if (j.contains("excitation") && !j.at("excitation").is_null()) {
    detail::only_keys(j.at("excitation"), "excitation", {"amplitude", "duration"});
    sc.excitation = Excitation{detail::number(j.at("excitation"), "excitation", "amplitude"),
                               detail::number(j.at("excitation"), "excitation", "duration")};
  }
  if (j.contains("dt")) sc.dt = detail::number(j, "", "dt");
  if (j.contains("horizon")) sc.horizon = detail::number(j, "", "horizon");
  try {
    validate(sc);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaError, e.what());
  }
  return sc;
}

inline json to_json(const Scenario& sc) {
  json j;
  j["plant"] = to_json(sc.plant);
  j["device"] = to_json(sc.device);
  j["x0"] = sc.x0;
  j["excitation"] = sc.excitation ? json{{"amplitude", sc.excitation->amplitude}, {"duration", sc.excitation->duration}}
                                  : json(nullptr);
  j["dt"] = sc.dt;
  j["horizon"] = sc.horizon;
  return j;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kSchemaError, "cannot open scenario file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("scenario is not valid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

inline constexpr std::size_t kReportedViolations = 100;

inline json report_json(const SimulationRun& run) {
  json j;
  j["scenario"] = to_json(run.scenario);
  j["classification"] = to_json(run.classification);
  j["gamma0_sq"] = run.device_status.measured_gamma0_sq;
  j["device_popov"] = json{{"declared", to_string(run.device_status.declared)},
                           {"measured_gamma0_sq", run.device_status.measured_gamma0_sq},
                           {"injection_energy_negative", run.device_status.injection_energy_negative
                                                             ? json(*run.device_status.injection_energy_negative)
                                                             : json(nullptr)}};
  const auto& a = run.bound_audit;
  j["bound_chain"] = json{{"applicable", a.applicable}, {"grade", to_string(a.grade)}, {"gamma0_sq_path", a.gamma0_sq},
                          {"tol_bound", a.tol_bound}, {"d", a.d}, {"d_inv", a.d_inv}, {"d0", a.d0}, {"d1", a.d1},
                          {"violation_count", a.violation_count}};
  json viol = json::array();
  for (std::size_t i = 0; i < std::min(a.violations.size(), kReportedViolations); ++i) {
    const auto& v = a.violations[i];
    viol.push_back(json{{"t", v.t}, {"inequality", v.inequality}, {"lhs", v.lhs}, {"rhs", v.rhs}});
  }
  j["bound_violations"] = viol;
  j["verdict"] = to_string(run.verdict);
  j["diverged"] = run.diverged;
  j["samples"] = run.y.size();
  j["final_energy"] = run.E.final_value();
  j["sliding_steps"] = run.sliding_steps;
  j["max_loop_residual"] = run.max_loop_residual;
  j["warnings"] = run.warnings;
  return j;
}

}  // namespace hyperstab
