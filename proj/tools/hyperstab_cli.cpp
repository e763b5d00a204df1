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


// hyperstab: command-line front end.
//
// Exit codes:
//   0  success
//   1  runtime failure not covered below
//   2  parse, schema or usage error
//   3  improper transfer function
//   4  simulation diverged (artifacts are still written)
//   5  Parseval tolerance breached
//   6  corpus mismatches

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hyperstab/hyperstab.hpp"

namespace fs = std::filesystem;
using hyperstab::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitImproper = 3;
constexpr int kExitDiverged = 4;
constexpr int kExitParseval = 5;
constexpr int kExitMismatch = 6;

constexpr double kParsevalTol = 1e-6;

int exit_code_for(hyperstab::ErrorCode c) {
  using hyperstab::ErrorCode;
  switch (c) {
    case ErrorCode::kImproperTransferFunction: return kExitImproper;
    case ErrorCode::kParseError:
    case ErrorCode::kSchemaError:
    case ErrorCode::kZeroDenominator:
    case ErrorCode::kInvalidGrid:
    case ErrorCode::kInvalidScenario:
    case ErrorCode::kInvalidParams:
    case ErrorCode::kInvalidSignal:
    case ErrorCode::kGridMismatch:
    case ErrorCode::kDimensionMismatch: return kExitUsage;
    default: return kExitFailure;
  }
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw hyperstab::Error(hyperstab::ErrorCode::kParseError, "cannot write " + path);
  out << j.dump(2) << '\n';
}

hyperstab::FrequencyGrid default_grid() {
  hyperstab::FrequencyGrid grid;
  if (const char* env = std::getenv("HYPERSTAB_GRID_POINTS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 64 || n > 10'000'000) {
      throw hyperstab::Error(hyperstab::ErrorCode::kParseError, "HYPERSTAB_GRID_POINTS must be an integer in [64, 1e7]");
    }
    grid.points = static_cast<int>(n);
  }
  return grid;
}

struct ClassifyArgs {
  std::string tf;
  std::optional<double> grid_min, grid_max;
  std::optional<int> points;
  std::string json_out;
};

int cmd_classify(const ClassifyArgs& a) {
  auto grid = default_grid();
  if (a.grid_min) grid.omega_min = *a.grid_min;
  if (a.grid_max) grid.omega_max = *a.grid_max;
  if (a.points) grid.points = *a.points;
  grid.validate();
  const auto g = hyperstab::parse_tf(a.tf);
  emit(hyperstab::classification_report(g, grid), a.json_out);
  return kExitOk;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_dir) {
  const auto sc = hyperstab::load_scenario(scenario_path);
  const auto run = hyperstab::run_closed_loop(sc, default_grid());
  fs::create_directories(out_dir);
  {
    std::ofstream csv(fs::path(out_dir) / "traces.csv");
    if (!csv) throw hyperstab::Error(hyperstab::ErrorCode::kParseError, "cannot write traces.csv in " + out_dir);
    hyperstab::write_csv(csv, hyperstab::traces_table(run));
  }
  emit(hyperstab::report_json(run), (fs::path(out_dir) / "report.json").string());
  std::cout << json{{"verdict", hyperstab::to_string(run.verdict)},
                    {"grade", hyperstab::to_string(run.classification.grade)},
                    {"bound_violations", run.bound_audit.violation_count},
                    {"out_dir", out_dir}}
                   .dump(2)
            << '\n';
  return run.verdict == hyperstab::Verdict::kDiverged ? kExitDiverged : kExitOk;
}

int cmd_audit(const std::string& path, bool with_storage) {
  const auto table = hyperstab::read_csv(path);
  const auto u = hyperstab::csv_signal(table, "u");
  const auto y = hyperstab::csv_signal(table, "y");
  std::optional<hyperstab::Signal> S, D;
  if (with_storage) {
    S = hyperstab::csv_signal(table, "S");
    D = hyperstab::csv_signal(table, "D");
  } else {
    if (table.has("S")) S = hyperstab::csv_signal(table, "S");
    if (table.has("D")) D = hyperstab::csv_signal(table, "D");
  }
  json j = hyperstab::to_json(hyperstab::classify_taxonomy(u, y, S, D));
  if (table.has("v")) {
    j["feedback_gamma0_sq"] = hyperstab::popov_audit(hyperstab::csv_signal(table, "v"), y).gamma0_sq;
  }
  emit(j, "");
  return kExitOk;
}

int cmd_parseval(const std::string& path) {
  const auto table = hyperstab::read_csv(path);
  const auto u = hyperstab::csv_signal(table, "u");
  const auto y = hyperstab::csv_signal(table, "y");
  const double te = hyperstab::energy_trace(u, y).final_value();
  const double fe = hyperstab::frequency_energy(u, y);
  const double scale = std::max(std::abs(te), std::abs(fe));
  const double rel = scale > 0.0 ? std::abs(te - fe) / scale : 0.0;
  emit(json{{"time_energy", te}, {"freq_energy", fe}, {"rel_error", rel}, {"tolerance", kParsevalTol}}, "");
  return rel <= kParsevalTol ? kExitOk : kExitParseval;
}

int cmd_corpus(const std::string& path, const std::string& json_out) {
  const auto entries = hyperstab::load_corpus(path);
  const auto rep = hyperstab::corpus_check(entries, default_grid());
  std::cout << std::left << std::setw(16) << "id" << std::setw(8) << "want" << std::setw(8) << "got" << "status\n";
  for (const auto& e : rep.entries) {
    std::cout << std::setw(16) << e.id << std::setw(8) << hyperstab::to_string(e.expected) << std::setw(8)
              << hyperstab::to_string(e.actual.grade) << (e.ok ? "ok" : "MISMATCH") << '\n';
  }
  for (const auto& m : rep.mismatches) {
    std::cout << "mismatch " << m.id << " " << m.field << ": expected " << m.expected << ", got " << m.actual << '\n';
  }
  std::cout << rep.entries.size() << " entries, " << rep.mismatches.size() << " mismatches\n";
  if (!json_out.empty()) {
    json j;
    j["entries"] = json::array();
    for (const auto& e : rep.entries) {
      j["entries"].push_back({{"id", e.id}, {"expected", hyperstab::to_string(e.expected)},
                              {"classification", hyperstab::to_json(e.actual)}, {"ok", e.ok}});
    }
    j["mismatches"] = json::array();
    for (const auto& m : rep.mismatches) {
      j["mismatches"].push_back({{"id", m.id}, {"field", m.field}, {"expected", m.expected}, {"actual", m.actual}});
    }
    emit(j, json_out);
  }
  return rep.ok() ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive-realness classification and hyperstability experiments"};
  app.require_subcommand(1, 1);

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Grade a transfer function (PR, WSPR, SSPR or NotPR)");
  classify->add_option("--tf", ca.tf, "\"num;den\", comma-separated coefficients, highest power first")->required();
  classify->add_option("--grid-min", ca.grid_min, "lowest grid frequency, rad/s");
  classify->add_option("--grid-max", ca.grid_max, "highest grid frequency, rad/s");
  classify->add_option("--points", ca.points, "number of log-spaced grid points");
  classify->add_option("--json", ca.json_out, "write the JSON here instead of stdout");

  std::string scenario, out_dir;
  auto* simulate = app.add_subcommand("simulate", "Run a closed-loop scenario");
  simulate->add_option("--scenario", scenario, "scenario JSON")->required();
  simulate->add_option("--out-dir", out_dir, "directory for traces.csv and report.json")->required();

  std::string traces;
  bool with_storage = false;
  auto* audit = app.add_subcommand("audit", "Energy taxonomy of a trace CSV");
  audit->add_option("--traces", traces, "CSV with t,u,y and optional v,S,D columns")->required();
  audit->add_flag("--with-storage", with_storage, "require S and D columns");

  std::string parseval_traces;
  auto* parseval = app.add_subcommand("parseval", "Compare time- and frequency-domain energy of a trace");
  parseval->add_option("--traces", parseval_traces, "CSV with t,u,y columns")->required();

  std::string corpus_file, corpus_json;
  auto* corpus = app.add_subcommand("corpus", "Check the classifier against a corpus file");
  corpus->add_option("--file", corpus_file, "corpus JSON")->required();
  corpus->add_option("--json", corpus_json, "also write a JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*classify) return cmd_classify(ca);
    if (*simulate) return cmd_simulate(scenario, out_dir);
    if (*audit) return cmd_audit(traces, with_storage);
    if (*parseval) return cmd_parseval(parseval_traces);
    if (*corpus) return cmd_corpus(corpus_file, corpus_json);
  } catch (const hyperstab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
