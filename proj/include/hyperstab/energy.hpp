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
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "hyperstab/error.hpp"
#include "hyperstab/signal.hpp"

namespace hyperstab {

/// Zero-padding factor of the DFT behind frequency_energy (lower bound; the
/// padded length is rounded up to a power of two).
inline constexpr std::size_t kPadFactor = 4;

/// (2π)⁻¹ ∫ û_t(jω) ŷ_t(-jω) dω over the whole real line, where û_t and ŷ_t
/// are the exact Fourier transforms of the truncated signals taken as
/// piecewise-linear between samples and zero outside [0, T].
///
/// The piecewise-linear signal is Σ u_k φ_k with hat functions φ_k, so
/// û(ω) = dt·U(e^{jω dt})·sinc²(ω dt / 2). Folding the integral onto one
/// Nyquist band with Σ_m sinc⁴((θ + 2πm)/2) = (2 + cos θ)/3 leaves a DFT sum.
/// The two outer hats spill past [0, T]; their ramps carry exactly
/// dt·(u₀y₀ + u_N y_N)/3, which is removed to honour the truncation.
///
/// Agrees with the trapezoidal time-domain energy to O(dt²) when the record
/// resolves the signal and departs from it when the content is aliased.
inline double frequency_energy(const Signal& u, const Signal& y) {
  require_same_grid(u, y);
  const std::size_t n = u.size();
  std::size_t m = 1;
  while (m < kPadFactor * n) m <<= 1;
  std::vector<double> up(m, 0.0), yp(m, 0.0);
  std::copy(u.values().begin(), u.values().end(), up.begin());
  std::copy(y.values().begin(), y.values().end(), yp.begin());
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> uf, yf;
  fft.fwd(uf, up);
  fft.fwd(yf, yp);
  const double dt = u.dt();
  double acc = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    acc += (uf[k] * std::conj(yf[k])).real() * (2.0 + std::cos(theta)) / 3.0;
  }
  const double whole_line = dt * acc / static_cast<double>(m);
  return whole_line - dt * (u[0] * y[0] + u[n - 1] * y[n - 1]) / 3.0;
}

/// r(t) = u(t)y(t) - Ṡ(t) - Ḋ(t).
inline Signal power_balance_residual(const Signal& u, const Signal& y, const Signal& S, const Signal& D) {
  require_same_grid(u, y);
  require_same_grid(u, S);
  require_same_grid(u, D);
  const auto dS = detail::derivative(S);
  const auto dD = detail::derivative(D);
  std::vector<double> r(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) r[k] = u[k] * y[k] - dS[k] - dD[k];
  return Signal(u.dt(), std::move(r));
}

/// ⟨u, y⟩_t - [S(t) + D(t) - S(0) - D(0)].
inline double energy_balance_residual(const Signal& u, const Signal& y, const Signal& S, const Signal& D, double t) {
  require_same_grid(u, y);
  require_same_grid(u, S);
  require_same_grid(u, D);
  return inner_product(u, y, t) - (S.at(t) + D.at(t) - S[0] - D[0]);
}

enum class EnergyLabel {
  kRegenerative,
  kPassive,
  kStrictlyPassive,
  kWeaklyPassive,
  kWeaklyStrictlyPassive,
  kStronglyStrictlyPassive,
  kConservative,
  kPopovSatisfied,
};

inline std::string to_string(EnergyLabel l) {
  switch (l) {
    case EnergyLabel::kRegenerative: return "Regenerative";
    case EnergyLabel::kPassive: return "Passive";
    case EnergyLabel::kStrictlyPassive: return "StrictlyPassive";
    case EnergyLabel::kWeaklyPassive: return "WeaklyPassive";
    case EnergyLabel::kWeaklyStrictlyPassive: return "WeaklyStrictlyPassive";
    case EnergyLabel::kStronglyStrictlyPassive: return "StronglyStrictlyPassive";
    case EnergyLabel::kConservative: return "Conservative";
    case EnergyLabel::kPopovSatisfied: return "PopovSatisfied";
  }
  return "Unknown";
}

struct AuditTolerances {
  double energy = 1e-9;         // slack on ⟨u,y⟩_t comparisons
  double rate = 1e-9;           // slack on Ṡ, Ḋ comparisons
  double measure_steps = 10.0;  // strict inequalities may fail on this many isolated samples
};

struct TaxonomyVerdict {
  std::vector<EnergyLabel> labels;
  /// Passivity lower bound: min_t S(t) - S(0) when storage is supplied,
  /// otherwise the smallest supplied energy min_t ⟨u,y⟩_t on the record.
  double beta = 0.0;
  /// Coercivity constant of ⟨u,y⟩_t >= β_s ⟨u,u⟩_t (kept apart from beta).
  std::optional<double> beta_s;
  double gamma0_sq = 0.0;
  std::optional<double> residual_max;  // max |power balance residual| when S and D are known

  bool has(EnergyLabel l) const { return std::find(labels.begin(), labels.end(), l) != labels.end(); }
};

struct PopovAudit {
  bool satisfied = true;
  double gamma0_sq = 0.0;
  /// Always set: a finite record can estimate or refute the inequality but
  /// never prove it for all t.
  bool finite_horizon_estimate = true;
};

/// Tightest γ0² with ⟨v, y⟩_t >= -γ0² on the record.
inline PopovAudit popov_audit(const Signal& v, const Signal& y) {
  const auto tr = energy_trace(v, y);
  const double lowest = *std::min_element(tr.E.begin(), tr.E.end());
  return PopovAudit{true, std::max(0.0, -lowest), true};
}

/// Assigns every energy label whose defining inequality holds over the whole
/// record. Storage-based labels need S and/or D.
inline TaxonomyVerdict classify_taxonomy(const Signal& u, const Signal& y, const std::optional<Signal>& S = std::nullopt,
                                         const std::optional<Signal>& D = std::nullopt,
                                         const AuditTolerances& tol = {}) {
  require_same_grid(u, y);
  if (S) require_same_grid(u, *S);
  if (D) require_same_grid(u, *D);

  TaxonomyVerdict v;
  const auto E = energy_trace(u, y).E;
  const auto uu = energy_trace(u, u).E;
  const std::size_t n = u.size();

  if (D) {
    const auto dD = detail::derivative(*D);
    if (std::all_of(dD.begin(), dD.end(), [](double x) { return x < 0.0; })) v.labels.push_back(EnergyLabel::kRegenerative);
    if (std::all_of(dD.begin(), dD.end(), [&](double x) { return x >= -tol.rate; })) {
      v.labels.push_back(EnergyLabel::kPassive);
    }
    // Strict dissipation may fail on a null set; on the grid that means a
    // bounded number of isolated samples.
    std::size_t failures = 0;
    bool isolated = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (!(dD[k] > tol.rate)) {
        ++failures;
        if (k > 0 && !(dD[k - 1] > tol.rate)) isolated = false;
      }
    }
    if (isolated && static_cast<double>(failures) <= std::ceil(tol.measure_steps)) {
      v.labels.push_back(EnergyLabel::kStrictlyPassive);
    }
  }
  if (S) {
    const auto dS = detail::derivative(*S);
    if (std::all_of(dS.begin(), dS.end(), [&](double x) { return std::abs(x) <= tol.rate; })) {
      v.labels.push_back(EnergyLabel::kConservative);
    }
    v.beta = *std::min_element(S->values().begin(), S->values().end()) - (*S)[0];
  } else {
    v.beta = *std::min_element(E.begin(), E.end());
  }
  if (S && D) {
    const auto r = power_balance_residual(u, y, *S, *D);
    double worst = 0.0;
    for (double x : r.values()) worst = std::max(worst, std::abs(x));
    v.residual_max = worst;
  }

  const bool weakly_passive = std::all_of(E.begin(), E.end(), [&](double x) { return x >= -tol.energy; });
  if (weakly_passive) v.labels.push_back(EnergyLabel::kWeaklyPassive);
  const bool weakly_strict = weakly_passive && std::all_of(E.begin() + 1, E.end(), [&](double x) { return x > tol.energy; });
  if (weakly_strict) v.labels.push_back(EnergyLabel::kWeaklyStrictlyPassive);

  double ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < n; ++k) {
    if (uu[k] > tol.energy) ratio = std::min(ratio, E[k] / uu[k]);
  }
  if (std::isfinite(ratio)) v.beta_s = ratio;
  if (weakly_strict && v.beta_s && *v.beta_s > tol.energy) v.labels.push_back(EnergyLabel::kStronglyStrictlyPassive);

  v.labels.push_back(EnergyLabel::kPopovSatisfied);
  v.gamma0_sq = std::max(0.0, -*std::min_element(E.begin(), E.end()));
  return v;
}

}  // namespace hyperstab
