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
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hyperstab/error.hpp"
#include "hyperstab/rational.hpp"

namespace hyperstab {

/// Distinguishes a positive margin from zero.
inline constexpr double kMarginTol = 1e-9;
/// Grid points this close (rad/s) to an axis pole frequency are skipped.
inline constexpr double kPoleExclusion = 1e-6;

enum class Grade { kNotPR, kPR, kWSPR, kSSPR };

inline std::string to_string(Grade g) {
  switch (g) {
    case Grade::kNotPR: return "NotPR";
    case Grade::kPR: return "PR";
    case Grade::kWSPR: return "WSPR";
    case Grade::kSSPR: return "SSPR";
  }
  return "Unknown";
}

inline std::optional<Grade> grade_from_string(std::string_view s) {
  if (s == "NotPR") return Grade::kNotPR;
  if (s == "PR") return Grade::kPR;
  if (s == "WSPR") return Grade::kWSPR;
  if (s == "SSPR") return Grade::kSSPR;
  return std::nullopt;
}

/// Logarithmically spaced sweep over [omega_min, omega_max].
struct FrequencyGrid {
  double omega_min = 1e-4;
  double omega_max = 1e6;
  int points = 4096;

  void validate() const {
    if (!(omega_min > 0.0) || !(omega_min < omega_max) || !std::isfinite(omega_max)) {
      throw Error(ErrorCode::kInvalidGrid, "need 0 < omega_min < omega_max < inf");
    }
    if (points < 64) throw Error(ErrorCode::kInvalidGrid, "need at least 64 grid points");
  }

  std::vector<double> omegas() const {
    validate();
    std::vector<double> w(static_cast<std::size_t>(points));
    const double lo = std::log10(omega_min);
    const double step = (std::log10(omega_max) - lo) / (points - 1);
    for (int i = 0; i < points; ++i) w[static_cast<std::size_t>(i)] = std::pow(10.0, lo + step * i);
    w.back() = omega_max;
    return w;
  }
};

struct PRClassification {
  Grade grade = Grade::kNotPR;
  double d = 0.0;   // inf Re ĝ(jω), clamped at 0
  double d0 = 0.0;  // lim ω² Re ĝ(jω) for relative degree 1
  double d1 = 0.0;  // margin of s·ĝ(s) when ĝ has a single origin pole
  bool single_pole_at_origin = false;
  std::optional<Grade> g1_grade;
  std::vector<std::string> diagnostics;

  double re_min = 0.0;  // unclamped infimum of Re ĝ(jω)
  Stability stability = Stability::kStrictlyStable;
  int relative_degree = 0;
};

namespace detail {

inline std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

/// Non-negative frequencies of simple or repeated poles lying on the axis.
inline std::vector<double> axis_pole_frequencies(const RationalFunction& g) {
  std::vector<double> out;
  for (const auto& p : g.poles()) {
    if (std::abs(p.location.real()) <= kAxisTol) out.push_back(std::abs(p.location.imag()));
  }
  return out;
}

inline bool near_axis_pole(double omega, const std::vector<double>& pole_freqs) {
  return std::any_of(pole_freqs.begin(), pole_freqs.end(),
                     [&](double wp) { return std::abs(omega - wp) <= kPoleExclusion; });
}

inline void require_no_pole_in_range(const RationalFunction& g, const FrequencyGrid& grid) {
  for (double wp : axis_pole_frequencies(g)) {
    if (wp >= grid.omega_min - kPoleExclusion && wp <= grid.omega_max + kPoleExclusion) {
      throw Error(ErrorCode::kPoleOnGrid, "axis pole at ω = " + fmt_num(wp) + " rad/s lies inside the sweep");
    }
  }
}

struct Sweep {
  std::vector<double> omega;
  std::vector<Complex> value;
};

inline Sweep sweep(const RationalFunction& g, const FrequencyGrid& grid) {
  const auto poles = axis_pole_frequencies(g);
  Sweep s;
  for (double w : grid.omegas()) {
    if (near_axis_pole(w, poles)) continue;
    s.omega.push_back(w);
    s.value.push_back(freq_response(g, w));
  }
  return s;
}

template <typename F>
double golden_section_min(F&& f, double a, double b, double fa_hint) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < 200 && (b - a) > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return std::min({fa_hint, fc, fd});
}

struct MarginResult {
  double value = std::numeric_limits<double>::infinity();
  double at_omega = 0.0;  // +inf when attained only in the limit
};

/// inf over ω ∈ {0} ∪ grid ∪ {∞} of Re ĝ(jω), with the grid minimum refined by
/// golden-section search in log-frequency on its bracketing interval.
inline MarginResult margin_over(const RationalFunction& g, const Sweep& s, const std::vector<double>& pole_freqs) {
  MarginResult best;
  if (!near_axis_pole(0.0, pole_freqs)) {
    best.value = freq_response(g, 0.0).real();
    best.at_omega = 0.0;
  }
  if (!s.omega.empty()) {
    std::size_t imin = 0;
    for (std::size_t i = 1; i < s.omega.size(); ++i) {
      if (s.value[i].real() < s.value[imin].real()) imin = i;
    }
    double grid_min = s.value[imin].real();
    const std::size_t lo = imin > 0 ? imin - 1 : imin;
    const std::size_t hi = imin + 1 < s.omega.size() ? imin + 1 : imin;
    if (hi > lo) {
      auto re_at = [&](double logw) {
        const double w = std::exp(logw);
        return near_axis_pole(w, pole_freqs) ? std::numeric_limits<double>::infinity() : freq_response(g, w).real();
      };
      grid_min = golden_section_min(re_at, std::log(s.omega[lo]), std::log(s.omega[hi]), grid_min);
    }
    if (grid_min < best.value) {
      best.value = grid_min;
      best.at_omega = s.omega[imin];
    }
  }
  const double at_infinity = laurent_at_infinity(g, 1)[0];
  if (at_infinity <= best.value) {
    best.value = at_infinity;
    best.at_omega = std::numeric_limits<double>::infinity();
  }
  return best;
}

}  // namespace detail

/// Infimum of Re ĝ(jω) over ω >= 0; evenness of Re ĝ(jω) covers ω < 0.
inline double real_part_margin(const RationalFunction& g, const FrequencyGrid& grid = {}) {
  detail::require_no_pole_in_range(g, grid);
  return detail::margin_over(g, detail::sweep(g, grid), detail::axis_pole_frequencies(g)).value;
}

/// Frequency-sweep positive-realness test.
///
/// Decision order: stability, axis-pole residues, then the real-part margin d
/// (SSPR when d > 0 at relative degree 0), the weak-strict side condition
/// lim ω² Re ĝ(jω) = d0 > 0 (WSPR), and finally Re ĝ >= 0 (PR). Testing the
/// boundary jω-axis together with stability is equivalent to testing the
/// closed right half-plane for rational functions (maximum principle applied
/// to exp(-ĝ)).
inline PRClassification classify_pr(const RationalFunction& g, const FrequencyGrid& grid = {}) {
  grid.validate();
  PRClassification c;
  c.relative_degree = g.relative_degree();
  c.stability = stability_class(g);
  const auto pole_freqs = detail::axis_pole_frequencies(g);
  const auto s = detail::sweep(g, grid);
  const auto margin = detail::margin_over(g, s, pole_freqs);
  c.re_min = margin.value;
  c.d = std::max(0.0, margin.value);

  bool disqualified = false;
  if (c.stability == Stability::kUnstable) {
    c.diagnostics.push_back("unstable: a pole has positive real part or an axis pole is repeated");
    disqualified = true;
  } else {
    for (const auto& p : imaginary_axis_residues(g)) {
      const Complex r = *p.residue;
      if (std::abs(r.imag()) > 1e-9 * (1.0 + std::abs(r)) || r.real() < -kMarginTol) {
        std::ostringstream os;
        os << "axis pole at s = " << p.location << " has residue " << r << " (must be real and nonnegative)";
        c.diagnostics.push_back(os.str());
        disqualified = true;
      }
    }
  }
  if (c.relative_degree > 1) {
    c.diagnostics.push_back("relative degree " + std::to_string(c.relative_degree) + " exceeds 1");
    disqualified = true;
  }
  if (margin.value < -kMarginTol) {
    c.diagnostics.push_back("Re g(jw) = " + detail::fmt_num(margin.value) + " < 0 near w = " +
                            detail::fmt_num(margin.at_omega) + " rad/s");
    disqualified = true;
  }
  if (disqualified) {
    c.grade = Grade::kNotPR;
    return c;
  }

  const bool strictly_stable = c.stability == Stability::kStrictlyStable;
  if (strictly_stable && c.relative_degree == 0 && margin.value > kMarginTol) {
    c.grade = Grade::kSSPR;
    return c;
  }

  if (strictly_stable && c.relative_degree == 1) {
    const auto h = laurent_at_infinity(g, 3);
    const double limit = -h[2];
    c.d0 = std::max(0.0, limit);
    // Re ĝ decays like d0/ω², so strict positivity is tested without a floor.
    const bool re_positive = freq_response(g, 0.0).real() > kMarginTol &&
                             std::all_of(s.value.begin(), s.value.end(),
                                         [](const Complex& v) { return v.real() > 0.0; });
    bool top_decade_positive = true;
    const double top_start = grid.omega_max / 10.0;
    for (std::size_t i = 0; i < s.omega.size(); ++i) {
      if (s.omega[i] >= top_start && s.omega[i] * s.omega[i] * s.value[i].real() <= kMarginTol) {
        top_decade_positive = false;
      }
    }
    if (re_positive && limit > kMarginTol && top_decade_positive) {
      c.grade = Grade::kWSPR;
      return c;
    }
    if (re_positive && limit <= kMarginTol) {
      c.diagnostics.push_back("Re g(jw) > 0 at finite w but w^2 Re g(jw) -> " + detail::fmt_num(limit) +
                              "; weak-strict side condition fails, graded PR at best");
    }
  }

  c.grade = Grade::kPR;
  int origin_poles = 0;
  bool origin_simple = true;
  for (const auto& p : g.poles()) {
    if (std::abs(p.location) <= kAxisTol) {
      ++origin_poles;
      origin_simple = origin_simple && p.multiplicity == 1;
    }
  }
  if (origin_poles == 1 && origin_simple) {
    c.single_pole_at_origin = true;
    try {
      const auto g1 = classify_pr(times_s(g), grid);
      c.g1_grade = g1.grade;
      c.d1 = g1.d;
    } catch (const Error& e) {
      c.g1_grade = Grade::kNotPR;
      c.diagnostics.push_back(std::string("s*g(s): ") + e.what());
    }
  }
  return c;
}

/// sup over the grid of |arg ĝ(jω)| in degrees.
inline double phase_deviation(const RationalFunction& g, const FrequencyGrid& grid = {}) {
  detail::require_no_pole_in_range(g, grid);
  double worst = 0.0;
  for (double w : grid.omegas()) worst = std::max(worst, std::abs(std::arg(freq_response(g, w))));
  return worst * 180.0 / std::numbers::pi;
}

struct QuadrantReport {
  bool confined = true;                       // Re ĝ(jω) >= 0 at every grid point
  std::optional<double> first_violation_omega;
  double min_re = 0.0;                        // over the grid
  double re_at_infinity = 0.0;
  std::optional<double> first_tangency_omega;  // grid point where Re ĝ touches 0
  bool tangent_in_limit_only = false;          // touches 0 only as ω → ∞
  bool never_tangent = false;                  // Re ĝ bounded away from 0, limit included
};

/// First/third-quadrant confinement of the hodograph ĝ(jω), ω >= 0 (the
/// ω < 0 branch is the mirror image). Tangency means Re ĝ reaching 0.
inline QuadrantReport hodograph_quadrant_check(const RationalFunction& g, const FrequencyGrid& grid = {}) {
  detail::require_no_pole_in_range(g, grid);
  QuadrantReport r;
  r.min_re = std::numeric_limits<double>::infinity();
  for (double w : grid.omegas()) {
    const Complex gw = freq_response(g, w);
    const double re = gw.real();
    r.min_re = std::min(r.min_re, re);
    if (re < -kMarginTol && r.confined) {
      r.confined = false;
      r.first_violation_omega = w;
    }
    // Relative to |ĝ| so a response that is merely small (high-frequency
    // roll-off) does not count as touching the axis.
    if (std::abs(re) <= kMarginTol * std::abs(gw) && !r.first_tangency_omega) r.first_tangency_omega = w;
  }
  r.re_at_infinity = laurent_at_infinity(g, 1)[0];
  r.tangent_in_limit_only = !r.first_tangency_omega && r.confined && r.re_at_infinity <= kMarginTol;
  r.never_tangent = r.confined && std::min(r.min_re, r.re_at_infinity) > kMarginTol;
  return r;
}

struct SignViolation {
  double omega;
  std::string condition;  // "Im g(jw) <= 0" or "Im g1(jw) <= 0"
  double value;
};

struct CrossRelationReport {
  double max_residual_re_g = 0.0;   // |Re ĝ - Im ĝ₁/ω| / |ĝ|
  double max_residual_re_g1 = 0.0;  // |Re ĝ₁ + ω Im ĝ| / |ĝ₁|
  bool relations_hold = true;       // both residuals within 1e-9
  std::vector<SignViolation> sign_violations;
};

/// Real/imaginary cross relations between ĝ and ĝ₁ = s·ĝ for a positive real
/// ĝ with one simple pole at the origin, plus the sign conditions
/// Im ĝ(jω) <= 0 and Im ĝ₁(jω) <= 0 for ω >= 0. Each sign failure is listed.
inline CrossRelationReport spc_cross_relations(const RationalFunction& g, const FrequencyGrid& grid = {}) {
  const auto c = classify_pr(g, grid);
  if (c.grade == Grade::kNotPR || !c.single_pole_at_origin) {
    throw Error(ErrorCode::kPreconditionNotPR, "needs a positive real function with a single simple origin pole");
  }
  const RationalFunction g1 = times_s(g);
  const auto pole_freqs = detail::axis_pole_frequencies(g);
  CrossRelationReport rep;
  for (double w : grid.omegas()) {
    if (detail::near_axis_pole(w, pole_freqs)) continue;
    const Complex gv = freq_response(g, w);
    const Complex g1v = freq_response(g1, w);
    if (std::abs(gv) > 0.0) {
      rep.max_residual_re_g = std::max(rep.max_residual_re_g, std::abs(gv.real() - g1v.imag() / w) / std::abs(gv));
    }
    if (std::abs(g1v) > 0.0) {
      rep.max_residual_re_g1 = std::max(rep.max_residual_re_g1, std::abs(g1v.real() + w * gv.imag()) / std::abs(g1v));
    }
    if (gv.imag() > kMarginTol) rep.sign_violations.push_back({w, "Im g(jw) <= 0", gv.imag()});
    if (g1v.imag() > kMarginTol) rep.sign_violations.push_back({w, "Im g1(jw) <= 0", g1v.imag()});
  }
  rep.relations_hold = rep.max_residual_re_g <= 1e-9 && rep.max_residual_re_g1 <= 1e-9;
  return rep;
}

}  // namespace hyperstab
