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
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperstab/error.hpp"
#include "hyperstab/rational.hpp"
#include "hyperstab/realness.hpp"

namespace hyperstab {

struct ExpectedMargins {
  std::optional<double> d;
  std::optional<double> d0;
  std::optional<double> d1;
};

struct CorpusEntry {
  std::string id;
  RationalFunction plant{Polynomial{1.0}, Polynomial{1.0}};
  Grade expected_grade = Grade::kNotPR;
  ExpectedMargins expected;
  std::optional<bool> single_pole_at_origin;
  std::optional<Grade> g1_grade;
  std::string notes;
};

inline constexpr double kCorpusRelTol = 1e-6;

namespace detail {

inline std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] inline void schema_error(const std::string& id, const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kSchemaError, "entry '" + id + "', field '" + field + "': " + what);
}

inline std::vector<double> coeff_array(const nlohmann::json& j, const std::string& id, const std::string& field) {
  if (!j.contains(field) || !j.at(field).is_array() || j.at(field).empty()) schema_error(id, field, "expected a non-empty number array");
  std::vector<double> out;
  for (const auto& x : j.at(field)) {
    if (!x.is_number()) schema_error(id, field, "expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

inline std::optional<double> opt_number(const nlohmann::json& j, const std::string& id, const std::string& field) {
  if (!j.contains(field) || j.at(field).is_null()) return std::nullopt;
  if (!j.at(field).is_number()) schema_error(id, field, "expected a number");
  const double x = j.at(field).get<double>();
  if (!std::isfinite(x) || x < 0.0) schema_error(id, field, "margins are finite and >= 0");
  return x;
}

inline Grade parse_grade(const nlohmann::json& j, const std::string& id, const std::string& field) {
  if (!j.is_string()) schema_error(id, field, "expected a grade string");
  const auto g = grade_from_string(j.get<std::string>());
  if (!g) schema_error(id, field, "unknown grade '" + j.get<std::string>() + "'");
  return *g;
}

}  // namespace detail

/// Coefficient arrays are in ascending powers of s.
inline CorpusEntry parse_corpus_entry(const nlohmann::json& j, std::size_t index) {
  std::string id = "#" + std::to_string(index);
  if (!j.is_object()) detail::schema_error(id, "<entry>", "expected an object");
  if (!j.contains("id") || !j.at("id").is_string() || j.at("id").get<std::string>().empty()) {
    detail::schema_error(id, "id", "expected a non-empty string");
  }
  id = j.at("id").get<std::string>();
  static const char* kKnown[] = {"id", "num", "den", "grade", "d", "d0", "d1", "single_pole_at_origin", "g1_grade", "notes"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) detail::schema_error(id, key, "unknown field");
  }
  CorpusEntry e;
  e.id = id;
  const auto num = detail::coeff_array(j, id, "num");
  const auto den = detail::coeff_array(j, id, "den");
  try {
    e.plant = ratfun_new(num, den);
  } catch (const Error& err) {
    detail::schema_error(id, "den", err.what());
  }
  if (!j.contains("grade")) detail::schema_error(id, "grade", "missing");
  e.expected_grade = detail::parse_grade(j.at("grade"), id, "grade");
  e.expected.d = detail::opt_number(j, id, "d");
  e.expected.d0 = detail::opt_number(j, id, "d0");
  e.expected.d1 = detail::opt_number(j, id, "d1");
  if (j.contains("single_pole_at_origin")) {
    if (!j.at("single_pole_at_origin").is_boolean()) detail::schema_error(id, "single_pole_at_origin", "expected a boolean");
    e.single_pole_at_origin = j.at("single_pole_at_origin").get<bool>();
  }
  if (j.contains("g1_grade")) e.g1_grade = detail::parse_grade(j.at("g1_grade"), id, "g1_grade");
  if (!j.contains("notes") || !j.at("notes").is_string() || j.at("notes").get<std::string>().empty()) {
    detail::schema_error(id, "notes", "every entry records how its expected values were derived");
  }
  e.notes = j.at("notes").get<std::string>();
  return e;
}

inline std::vector<CorpusEntry> parse_corpus(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kSchemaError, "corpus must be a JSON array");
  std::vector<CorpusEntry> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(parse_corpus_entry(j[i], i));
    for (std::size_t k = 0; k + 1 < out.size(); ++k) {
      if (out[k].id == out.back().id) detail::schema_error(out.back().id, "id", "duplicate id");
    }
  }
  return out;
}

/// An empty (or whitespace-only) file is an empty corpus.
inline std::vector<CorpusEntry> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kSchemaError, "cannot open corpus file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("corpus is not valid JSON: ") + e.what());
  }
  return parse_corpus(j);
}

struct CorpusMismatch {
  std::string id;
  std::string field;
  std::string expected;
  std::string actual;
};

struct CorpusEntryResult {
  std::string id;
  Grade expected = Grade::kNotPR;
  PRClassification actual;
  bool ok = true;
};

struct CorpusReport {
  std::vector<CorpusEntryResult> entries;
  std::vector<CorpusMismatch> mismatches;

  bool ok() const { return mismatches.empty(); }
};

inline bool margin_matches(double actual, double expected) {
  if (expected == 0.0) return std::abs(actual) <= 1e-9;
  return std::abs(actual - expected) <= kCorpusRelTol * std::abs(expected);
}

inline CorpusReport corpus_check(const std::vector<CorpusEntry>& entries, const FrequencyGrid& grid = {}) {
  CorpusReport rep;
  for (const auto& e : entries) {
    CorpusEntryResult r;
    r.id = e.id;
    r.expected = e.expected_grade;
    r.actual = classify_pr(e.plant, grid);
    const auto miss = [&](const std::string& field, const std::string& want, const std::string& got) {
      rep.mismatches.push_back({e.id, field, want, got});
      r.ok = false;
    };
    if (r.actual.grade != e.expected_grade) miss("grade", to_string(e.expected_grade), to_string(r.actual.grade));
    const auto check = [&](const char* field, const std::optional<double>& want, double got) {
      if (want && !margin_matches(got, *want)) miss(field, detail::fmt17(*want), detail::fmt17(got));
    };
    check("d", e.expected.d, r.actual.d);
    check("d0", e.expected.d0, r.actual.d0);
    check("d1", e.expected.d1, r.actual.d1);
    if (e.single_pole_at_origin && *e.single_pole_at_origin != r.actual.single_pole_at_origin) {
      miss("single_pole_at_origin", *e.single_pole_at_origin ? "true" : "false",
           r.actual.single_pole_at_origin ? "true" : "false");
    }
    if (e.g1_grade && (!r.actual.g1_grade || *r.actual.g1_grade != *e.g1_grade)) {
      miss("g1_grade", to_string(*e.g1_grade), r.actual.g1_grade ? to_string(*r.actual.g1_grade) : "none");
    }
    rep.entries.push_back(std::move(r));
  }
  return rep;
}

}  // namespace hyperstab
