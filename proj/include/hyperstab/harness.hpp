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
#include <cstddef>
#include <exception>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperstab/energy.hpp"
#include "hyperstab/error.hpp"
#include "hyperstab/feedback.hpp"
#include "hyperstab/lti.hpp"
#include "hyperstab/rational.hpp"
#include "hyperstab/realness.hpp"
#include "hyperstab/signal.hpp"

namespace hyperstab {

inline constexpr double kOverflowGuard = 1e9;
inline constexpr double kConvTol = 1e-3;
inline constexpr double kBoundFactor = 10.0;
inline constexpr int kLoopMaxIter = 50;
inline constexpr double kLoopTol = 1e-12;
inline constexpr std::size_t kMaxRecordedViolations = 1000;

struct Excitation {
  double amplitude = 0.0;
  double duration = 0.0;
};

struct Scenario {
  RationalFunction plant{Polynomial{1.0}, Polynomial{1.0}};
  DeviceSpec device = StaticSector{1.0, 1.0, std::nullopt};
  /// Initial state in controllable canonical coordinates (see realize()).
  std::vector<double> x0;
  std::optional<Excitation> excitation;
  double dt = 1e-3;
  double horizon = 50.0;

  double excitation_at(double t) const {
    return (excitation && t < excitation->duration) ? excitation->amplitude : 0.0;
  }
};

inline void validate(const Scenario& sc) {
  if (!(sc.dt > 0.0) || !std::isfinite(sc.dt)) throw Error(ErrorCode::kInvalidScenario, "dt must be positive");
  if (!(sc.horizon >= 100.0 * sc.dt) || !std::isfinite(sc.horizon)) {
    throw Error(ErrorCode::kInvalidScenario, "horizon must cover at least 100 steps");
  }
  if (static_cast<int>(sc.x0.size()) != sc.plant.order()) {
    throw Error(ErrorCode::kInvalidScenario, "x0 has " + std::to_string(sc.x0.size()) + " entries, plant order is " +
                                                 std::to_string(sc.plant.order()));
  }
  bool nonzero_state = false;
  for (double x : sc.x0) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidScenario, "x0 must be finite");
    nonzero_state = nonzero_state || x != 0.0;
  }
  bool pulse = false;
  if (sc.excitation) {
    const auto& ex = *sc.excitation;
    if (!std::isfinite(ex.amplitude) || !(ex.duration >= 0.0) || !std::isfinite(ex.duration)) {
      throw Error(ErrorCode::kInvalidScenario, "excitation needs a finite amplitude and duration >= 0");
    }
    pulse = ex.amplitude != 0.0 && ex.duration > 0.0;
  }
  if (!nonzero_state && !pulse) {
    throw Error(ErrorCode::kInvalidScenario, "x0 = 0 with no excitation gives an identically zero run");
  }
  try {
    validate(sc.device);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidScenario, std::string("device: ") + e.what());
  }
}

enum class Verdict { kAsymptoticallyHyperstableEvidence, kHyperstableEvidence, kDiverged, kInconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kAsymptoticallyHyperstableEvidence: return "AsymptoticallyHyperstableEvidence";
    case Verdict::kHyperstableEvidence: return "HyperstableEvidence";
    case Verdict::kDiverged: return "Diverged";
    case Verdict::kInconclusive: return "Inconclusive";
  }
  return "?";
}

struct BoundViolation {
  double t = 0.0;
  std::string inequality;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct BoundChainAudit {
  bool applicable = false;
  Grade grade = Grade::kNotPR;
  /// Finite-horizon constant of the feedback path: device audit plus the
  /// energy the excitation and the plant's free response push into it.
  double gamma0_sq = 0.0;
  double gamma0_sq_device = 0.0;
  double tol_bound = 0.0;
  double d = 0.0;
  double d_inv = 0.0;
  double d0 = 0.0;
  double d1 = 0.0;
  std::vector<double> d_lower;
  std::vector<double> d_inv_lower;
  std::vector<double> d0_lower;
  std::vector<double> d1_lower;
  std::vector<BoundViolation> violations;
  std::size_t violation_count = 0;

  bool passed() const { return applicable && violation_count == 0; }
};

struct SimulationRun {
  Scenario scenario;
  Signal e{1.0, {0.0, 0.0}};
  Signal u{1.0, {0.0, 0.0}};
  Signal y{1.0, {0.0, 0.0}};
  Signal v{1.0, {0.0, 0.0}};
  /// Zero-state part of y (plant driven by u from rest) and the free part.
  Signal y_forced{1.0, {0.0, 0.0}};
  Signal y_free{1.0, {0.0, 0.0}};
  /// E(t) = ⟨u, y_forced⟩_t.
  EnergyTrace E;
  PRClassification classification;
  DevicePopovStatus device_status;
  BoundChainAudit bound_audit;
  Verdict verdict = Verdict::kInconclusive;
  bool diverged = false;
  std::size_t sliding_steps = 0;
  double max_loop_residual = 0.0;
  std::vector<std::string> warnings;
};

namespace detail {

struct LoopSolution {
  double y = 0.0;
  double v = 0.0;
  double residual = 0.0;
  bool sliding = false;
};

/// Solves y = c + deff·(e − F(y, t)).
inline LoopSolution solve_loop(double c, double deff, double e, const DeviceSpec& dev, double t, double guess,
                               std::size_t step) {
  const auto F = [&](double y) { return apply_device(dev, y, t).v; };
  const auto r = [&](double y) { return y - c - deff * (e - F(y)); };
  const auto tol = [&](double y) { return kLoopTol * (1.0 + std::abs(c) + std::abs(y)); };

  if (deff == 0.0) return LoopSolution{c, F(c), 0.0, false};

  double y = std::isfinite(guess) ? guess : c;
  double ry = r(y);
  if (std::abs(ry) <= tol(y)) return LoopSolution{y, F(y), std::abs(ry), false};

  for (int it = 0; it < kLoopMaxIter; ++it) {
    const double h = 1e-7 * (1.0 + std::abs(y));
    const double slope = (r(y + h) - r(y - h)) / (2.0 * h);
    if (!(std::abs(slope) > 0.0) || !std::isfinite(slope)) break;
    const double yn = y - ry / slope;
    const double rn = r(yn);
    if (!std::isfinite(rn) || !(std::abs(rn) < std::abs(ry))) break;
    y = yn;
    ry = rn;
    if (std::abs(ry) <= tol(y)) return LoopSolution{y, F(y), std::abs(ry), false};
  }

  // Bracket around the best point, then bisect.
  double w = 1.0 + std::abs(y);
  double lo = y - w, hi = y + w;
  double rlo = r(lo), rhi = r(hi);
  while ((rlo > 0.0) == (rhi > 0.0) && w < 1e15) {
    w *= 2.0;
    lo = y - w;
    hi = y + w;
    rlo = r(lo);
    rhi = r(hi);
  }
  if ((rlo > 0.0) == (rhi > 0.0)) {
    throw Error(ErrorCode::kAlgebraicLoopNoConvergence,
                "no bracket at step " + std::to_string(step) + ", residual " + std::to_string(std::abs(ry)));
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double rm = r(mid);
    if (std::abs(rm) <= tol(mid)) return LoopSolution{mid, F(mid), std::abs(rm), false};
    if ((rm > 0.0) == (rlo > 0.0)) {
      lo = mid;
      rlo = rm;
    } else {
      hi = mid;
      rhi = rm;
    }
  }
  const bool take_lo = std::abs(rlo) <= std::abs(rhi);
  const double yb = take_lo ? lo : hi;
  const double rb = take_lo ? rlo : rhi;
  if (is_discontinuous(dev)) return LoopSolution{yb, F(yb), std::abs(rb), true};
  throw Error(ErrorCode::kAlgebraicLoopNoConvergence,
              "step " + std::to_string(step) + ", residual " + std::to_string(std::abs(rb)));
}

inline std::vector<double> zeros_like(const Signal& s) { return std::vector<double>(s.size(), 0.0); }

}  // namespace detail

inline BoundChainAudit verify_bound_chain(const SimulationRun& run);
inline Verdict convergence_verdict(const SimulationRun& run);

inline SimulationRun run_closed_loop(const Scenario& sc, const FrequencyGrid& grid = {}) {
  validate(sc);
  const StateSpace ss = realize(sc.plant);
  const int n = ss.order();
  const double dt = sc.dt;
  const auto steps = static_cast<std::size_t>(std::floor(sc.horizon / dt + 1e-9)) + 1;

  Discretization disc;
  if (n > 0) disc = discretize(ss, dt);
  const double deff = n > 0 ? ss.C.dot(disc.G1) + ss.D : ss.D;

  SimulationRun run;
  run.scenario = sc;
  std::vector<double> e, u, y, v;
  e.reserve(steps);
  u.reserve(steps);
  y.reserve(steps);
  v.reserve(steps);

  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(sc.x0.data(), n);
  const auto push = [&](std::size_t k, double c, double deff_k, double guess) {
    const double t = dt * static_cast<double>(k);
    const double ek = sc.excitation_at(t);
    const auto sol = detail::solve_loop(c, deff_k, ek, sc.device, t, guess, k);
    e.push_back(ek);
    y.push_back(sol.y);
    v.push_back(sol.v);
    u.push_back(ek - sol.v);
    run.max_loop_residual = std::max(run.max_loop_residual, sol.residual);
    if (sol.sliding) ++run.sliding_steps;
  };

  push(0, n > 0 ? ss.C.dot(x) : 0.0, ss.D, n > 0 ? ss.C.dot(x) : 0.0);
  for (std::size_t k = 0; k + 1 < steps; ++k) {
    if (!std::isfinite(y.back()) || std::abs(y.back()) > kOverflowGuard) {
      run.diverged = true;
      break;
    }
    Eigen::VectorXd xp;
    double c = 0.0;
    if (n > 0) {
      xp = disc.Phi * x + disc.G0 * u.back();
      c = ss.C.dot(xp);
    }
    push(k + 1, c, deff, y.back());
    if (n > 0) x = xp + disc.G1 * u.back();
  }
  if (!std::isfinite(y.back()) || std::abs(y.back()) > kOverflowGuard) run.diverged = true;
  if (y.size() < 2) {
    // Guard tripped on the first sample; keep the record two samples long.
    for (auto* s : {&e, &u, &y, &v}) s->push_back(s->back());
  }

  run.e = Signal(dt, std::move(e));
  run.u = Signal(dt, std::move(u));
  run.y = Signal(dt, std::move(y));
  run.v = Signal(dt, std::move(v));
  const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(sc.x0.data(), n);
  run.y_forced = simulate_forced(ss, run.u, Eigen::VectorXd::Zero(n));
  run.y_free = simulate_forced(ss, Signal(dt, detail::zeros_like(run.u)), x0);
  run.E = energy_trace(run.u, run.y_forced);
  run.classification = classify_pr(sc.plant, grid);
  run.device_status = device_popov_audit(sc.device, run.v, run.y);
  if (run.device_status.declared == PopovDeclaration::kMayViolate) run.warnings.push_back("NonPopovDeviceWarning");
  if (run.sliding_steps > 0) {
    run.warnings.push_back("algebraic loop settled on a device discontinuity at " + std::to_string(run.sliding_steps) +
                           " steps");
  }
  if (!run.diverged && run.classification.grade != Grade::kNotPR) run.bound_audit = verify_bound_chain(run);
  run.verdict = convergence_verdict(run);
  return run;
}

namespace detail {

inline void check_lower(BoundChainAudit& a, const EnergyTrace& E, const std::vector<double>& lower,
                        const std::string& name) {
  for (std::size_t k = 0; k < lower.size(); ++k) {
    if (E.E[k] < lower[k] - a.tol_bound) {
      ++a.violation_count;
      if (a.violations.size() < kMaxRecordedViolations) a.violations.push_back({E.times[k], name, E.E[k], lower[k]});
    }
  }
}

inline std::vector<double> scaled_cumulative(const std::vector<double>& integrand, double dt, double scale) {
  auto c = cumulative_trapezoid(integrand, dt);
  for (double& x : c) x *= scale;
  return c;
}

}  // namespace detail

inline BoundChainAudit verify_bound_chain(const SimulationRun& run) {
  const auto& cls = run.classification;
  if (cls.grade == Grade::kNotPR) throw Error(ErrorCode::kGradeUnsupported, "no bound chain for a non-PR plant");
  if (run.diverged) throw Error(ErrorCode::kGradeUnsupported, "no bound chain for a diverged run");

  BoundChainAudit a;
  a.applicable = true;
  a.grade = cls.grade;
  const auto& E = run.E;
  const double dt = run.u.dt();
  a.tol_bound = 1e-6 * (1.0 + std::abs(E.final_value()));

  a.gamma0_sq_device = run.device_status.measured_gamma0_sq;
  const auto ey = energy_trace(run.e, run.y).E;
  const auto uf = energy_trace(run.u, run.y_free).E;
  double wmax = 0.0;
  for (std::size_t k = 0; k < ey.size(); ++k) wmax = std::max(wmax, ey[k] - uf[k]);
  a.gamma0_sq = a.gamma0_sq_device + wmax;

  for (std::size_t k = 0; k < E.E.size(); ++k) {
    if (E.E[k] > a.gamma0_sq + a.tol_bound) {
      ++a.violation_count;
      if (a.violations.size() < kMaxRecordedViolations) {
        a.violations.push_back({E.times[k], "gamma0^2 >= E(t)", a.gamma0_sq, E.E[k]});
      }
    }
  }

  const auto& u = run.u.values();
  if (cls.grade == Grade::kSSPR) {
    a.d = cls.d;
    std::vector<double> u2(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) u2[k] = u[k] * u[k];
    a.d_lower = detail::scaled_cumulative(u2, dt, a.d);
    detail::check_lower(a, E, a.d_lower, "E(t) >= d*int u^2");
    for (std::size_t k = 1; k < u.size(); ++k) {
      if (a.d_lower[k] > 0.0 && !(E.E[k] > 0.0)) {
        ++a.violation_count;
        if (a.violations.size() < kMaxRecordedViolations) a.violations.push_back({E.times[k], "E(t) > 0", E.E[k], 0.0});
      }
    }
    a.d_inv = real_part_margin(inverse(run.scenario.plant));
    const auto& yf = run.y_forced.values();
    std::vector<double> y2(yf.size());
    for (std::size_t k = 0; k < yf.size(); ++k) y2[k] = yf[k] * yf[k];
    a.d_inv_lower = detail::scaled_cumulative(y2, dt, a.d_inv);
    detail::check_lower(a, E, a.d_inv_lower, "E(t) >= d_inv*int y^2");
  } else if (cls.grade == Grade::kWSPR) {
    a.d0 = cls.d0;
    const auto delta = input_integral(run.u, false);
    std::vector<double> d2(delta.size());
    for (std::size_t k = 0; k < d2.size(); ++k) d2[k] = delta[k] * delta[k];
    a.d0_lower = detail::scaled_cumulative(d2, dt, a.d0);
    detail::check_lower(a, E, a.d0_lower, "E(t) >= d0*int delta^2");
  } else if (cls.single_pole_at_origin && cls.g1_grade == Grade::kSSPR) {
    a.d1 = cls.d1;
    const auto delta = input_integral(run.u, true);
    std::vector<double> w(delta.size());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = delta[k] * std::abs(u[k]);
    a.d1_lower = detail::scaled_cumulative(w, dt, a.d1);
    detail::check_lower(a, E, a.d1_lower, "E(t) >= d1*int delta_abs*|u|");
  } else {
    detail::check_lower(a, E, std::vector<double>(E.E.size(), 0.0), "E(t) >= 0");
  }
  return a;
}

struct TraceEnvelope {
  double initial_peak = 0.0;
  double tail_peak = 0.0;
  double overall_peak = 0.0;
};

inline TraceEnvelope trace_envelope(const SimulationRun& run) {
  TraceEnvelope env;
  const double horizon = run.scenario.horizon;
  double window = 0.05 * horizon;
  if (run.scenario.excitation) window += run.scenario.excitation->duration;
  const double tail_start = 0.95 * horizon;
  for (std::size_t k = 0; k < run.y.size(); ++k) {
    const double t = run.y.time(k);
    const double m = std::max(std::abs(run.u[k]), std::abs(run.y[k]));
    env.overall_peak = std::max(env.overall_peak, m);
    if (t <= window) env.initial_peak = std::max(env.initial_peak, m);
    if (t >= tail_start) env.tail_peak = std::max(env.tail_peak, m);
  }
  return env;
}

inline Verdict convergence_verdict(const SimulationRun& run) {
  if (run.diverged) return Verdict::kDiverged;
  if (run.classification.grade == Grade::kNotPR) return Verdict::kInconclusive;
  if (run.device_status.declared == PopovDeclaration::kMayViolate) return Verdict::kInconclusive;
  const auto env = trace_envelope(run);
  const bool converged = env.tail_peak <= kConvTol * env.initial_peak;
  const bool bounded = env.overall_peak <= kBoundFactor * env.initial_peak;
  if (converged && run.bound_audit.passed()) return Verdict::kAsymptoticallyHyperstableEvidence;
  if (bounded && !converged) return Verdict::kHyperstableEvidence;
  return Verdict::kInconclusive;
}

/// Exponential growth rate of |y| fitted by least squares over the second
/// half of the record (before the overflow guard, if it tripped).
inline double growth_rate(const Signal& y) {
  const std::size_t n = y.size();
  double st = 0, sl = 0, stt = 0, stl = 0;
  std::size_t m = 0;
  for (std::size_t k = n / 2; k < n; ++k) {
    const double a = std::abs(y[k]);
    if (!(a > 0.0) || !std::isfinite(a)) continue;
    const double t = y.time(k), l = std::log(a);
    st += t;
    sl += l;
    stt += t * t;
    stl += t * l;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mm = static_cast<double>(m);
  return (mm * stl - st * sl) / (mm * stt - st * st);
}

struct BatchResult {
  std::optional<SimulationRun> run;
  std::optional<Error> error;
};

/// Runs scenarios concurrently; results keep input order and equal the
/// sequential ones.
inline std::vector<BatchResult> batch_run(const std::vector<Scenario>& scenarios, const FrequencyGrid& grid = {},
                                          bool parallel = true) {
  const auto one = [&grid](const Scenario& sc) {
    BatchResult r;
    try {
      r.run = run_closed_loop(sc, grid);
    } catch (const Error& e) {
      r.error = e;
    }
    return r;
  };
  std::vector<BatchResult> out;
  out.reserve(scenarios.size());
  if (!parallel) {
    for (const auto& sc : scenarios) out.push_back(one(sc));
    return out;
  }
  std::vector<std::future<BatchResult>> futs;
  futs.reserve(scenarios.size());
  for (const auto& sc : scenarios) futs.push_back(std::async(std::launch::async, one, std::cref(sc)));
  for (auto& f : futs) out.push_back(f.get());
  return out;
}

}  // namespace hyperstab
