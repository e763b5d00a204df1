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
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "hyperstab/error.hpp"
#include "hyperstab/expm.hpp"
#include "hyperstab/rational.hpp"
#include "hyperstab/signal.hpp"

namespace hyperstab {

/// Single-input single-output realization ẋ = Ax + Bu, y = Cx + Du.
struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
  double D = 0.0;

  int order() const noexcept { return static_cast<int>(A.rows()); }
};

inline Complex freq_response(const StateSpace& ss, double omega) {
  const int n = ss.order();
  if (n == 0) return Complex{ss.D};
  const Eigen::MatrixXcd m = Complex{0.0, omega} * Eigen::MatrixXcd::Identity(n, n) - ss.A.cast<Complex>();
  const Eigen::VectorXcd x = m.partialPivLu().solve(ss.B.cast<Complex>());
  return (ss.C.cast<Complex>() * x)(0) + ss.D;
}

/// Controllable canonical form of a proper ĝ (denominator already monic).
inline StateSpace realize(const RationalFunction& g) {
  if (g.relative_degree() < 0) throw Error(ErrorCode::kImproperTransferFunction, "cannot realize an improper function");
  const int n = g.order();
  StateSpace ss;
  ss.D = g.num().coeff(n);
  ss.A = Eigen::MatrixXd::Zero(n, n);
  ss.B = Eigen::VectorXd::Zero(n);
  ss.C = Eigen::RowVectorXd::Zero(n);
  if (n == 0) return ss;
  for (int i = 0; i + 1 < n; ++i) ss.A(i, i + 1) = 1.0;
  for (int j = 0; j < n; ++j) {
    ss.A(n - 1, j) = -g.den().coeff(j);
    ss.C(j) = g.num().coeff(j) - ss.D * g.den().coeff(j);
  }
  ss.B(n - 1) = 1.0;
  return ss;
}

/// First-order-hold discretization: with u linear on each step,
/// x[k+1] = Φ x[k] + Γ0 u[k] + Γ1 u[k+1] holds exactly.
struct Discretization {
  double dt = 0.0;
  Eigen::MatrixXd Phi;
  Eigen::VectorXd G0;
  Eigen::VectorXd G1;
};

inline Discretization discretize(const StateSpace& ss, double dt) {
  const int n = ss.order();
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n + 2, n + 2);
  z.topLeftCorner(n, n) = ss.A * dt;
  z.block(0, n, n, 1) = ss.B * dt;
  z(n, n + 1) = 1.0;
  const Eigen::MatrixXd e = expm(z);
  Discretization disc;
  disc.dt = dt;
  disc.Phi = e.topLeftCorner(n, n);
  const Eigen::VectorXd m0 = e.block(0, n, n, 1);
  const Eigen::VectorXd m1 = e.block(0, n + 1, n, 1);
  disc.G0 = m0 - m1;
  disc.G1 = m1;
  return disc;
}

/// Sampled impulse response; the Dirac part of a biproper system is kept
/// symbolically as `direct_delta_weight` and never sampled.
struct ImpulseResponse {
  Signal g;
  double direct_delta_weight = 0.0;
};

inline ImpulseResponse impulse_response(const RationalFunction& tf, double horizon, double dt) {
  if (!(dt > 0.0) || !(horizon >= dt)) throw Error(ErrorCode::kInvalidParams, "need dt > 0 and horizon >= dt");
  const StateSpace ss = realize(tf);
  const auto samples = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9)) + 1;
  std::vector<double> g(samples, 0.0);
  if (ss.order() > 0) {
    const Eigen::MatrixXd phi = expm(ss.A * dt);
    Eigen::VectorXd x = ss.B;
    for (std::size_t k = 0; k < samples; ++k) {
      g[k] = ss.C.dot(x);
      x = phi * x;
    }
  }
  return ImpulseResponse{Signal(dt, std::move(g)), ss.D};
}

/// Forced response with the input interpolated linearly between samples;
/// exact for piecewise-linear (and in particular constant) inputs.
inline Signal simulate_forced(const StateSpace& ss, const Signal& u, const Eigen::VectorXd& x0) {
  const int n = ss.order();
  if (x0.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "initial state has " + std::to_string(x0.size()) + " entries, realization has " + std::to_string(n));
  }
  std::vector<double> y(u.size());
  if (n == 0) {
    for (std::size_t k = 0; k < u.size(); ++k) y[k] = ss.D * u[k];
    return Signal(u.dt(), std::move(y));
  }
  const Discretization disc = discretize(ss, u.dt());
  Eigen::VectorXd x = x0;
  y[0] = ss.C.dot(x) + ss.D * u[0];
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    x = disc.Phi * x + disc.G0 * u[k] + disc.G1 * u[k + 1];
    y[k + 1] = ss.C.dot(x) + ss.D * u[k + 1];
  }
  return Signal(u.dt(), std::move(y));
}

/// (g * u)(t) = ∫₀ᵗ g(τ) u(t-τ) dτ by the trapezoid rule, plus the
/// feedthrough term. The full sums are formed by FFT.
inline Signal convolve(const ImpulseResponse& ir, const Signal& u) {
  if (!same_step(ir.g, u) || ir.g.size() < u.size()) {
    throw Error(ErrorCode::kGridMismatch, "impulse response must share the step and cover the input record");
  }
  const std::size_t n = u.size();
  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;
  std::vector<double> gp(m, 0.0), up(m, 0.0);
  std::copy_n(ir.g.values().begin(), n, gp.begin());
  std::copy(u.values().begin(), u.values().end(), up.begin());
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> gf, uf;
  fft.fwd(gf, gp);
  fft.fwd(uf, up);
  for (std::size_t k = 0; k < m; ++k) gf[k] *= uf[k];
  std::vector<double> full;
  fft.inv(full, gf);
  const double dt = u.dt();
  std::vector<double> y(n);
  for (std::size_t k = 0; k < n; ++k) {
    y[k] = dt * (full[k] - 0.5 * (ir.g[0] * u[k] + ir.g[k] * u[0])) + ir.direct_delta_weight * u[k];
  }
  return Signal(dt, std::move(y));
}

enum class ImpulseSign { kStrictlyPositive, kNonnegative, kSignChanging };

inline std::string to_string(ImpulseSign s) {
  switch (s) {
    case ImpulseSign::kStrictlyPositive: return "StrictlyPositive";
    case ImpulseSign::kNonnegative: return "Nonnegative";
    case ImpulseSign::kSignChanging: return "SignChanging";
  }
  return "Unknown";
}

struct ImpulsePositivity {
  ImpulseSign sign = ImpulseSign::kSignChanging;
  double max_abs = 0.0;
  bool decays_to_zero = false;  // |g(T)| <= 1% of max |g|
  double direct_delta_weight = 0.0;
};

/// StrictlyPositive: g(t) > 0 for every sample t > 0 and g dies out over the
/// record. Nonnegative: g(t) >= -tol, which also covers positive responses
/// that persist (integrator-type plants). SignChanging otherwise.
inline ImpulsePositivity impulse_positivity_check(const ImpulseResponse& ir) {
  ImpulsePositivity out;
  out.direct_delta_weight = ir.direct_delta_weight;
  const auto& g = ir.g.values();
  for (double v : g) out.max_abs = std::max(out.max_abs, std::abs(v));
  out.decays_to_zero = std::abs(g.back()) <= 1e-2 * out.max_abs;
  const double tol = 1e-12 * std::max(1.0, out.max_abs);
  const bool positive = std::all_of(g.begin() + 1, g.end(), [](double v) { return v > 0.0; });
  const bool nonnegative = std::all_of(g.begin() + 1, g.end(), [&](double v) { return v >= -tol; });
  if (positive && out.decays_to_zero) {
    out.sign = ImpulseSign::kStrictlyPositive;
  } else if (nonnegative) {
    out.sign = ImpulseSign::kNonnegative;
  }
  return out;
}

}  // namespace hyperstab
