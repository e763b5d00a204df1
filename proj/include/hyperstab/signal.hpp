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
#include <string>
#include <utility>
#include <vector>

#include "hyperstab/error.hpp"

namespace hyperstab {

/// Uniformly sampled real signal on [0, (n-1)·dt]. A Signal stands for the
/// truncation u_t of a function in L2e: it is zero outside its record.
class Signal {
 public:
  Signal(double dt, std::vector<double> values) : dt_(dt), values_(std::move(values)) {
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw Error(ErrorCode::kInvalidSignal, "dt must be positive and finite");
    if (values_.size() < 2) throw Error(ErrorCode::kInvalidSignal, "a signal needs at least two samples");
    for (double v : values_) {
      if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidSignal, "non-finite sample");
    }
  }

  /// Samples f(t) at t = 0, dt, ..., up to and including `duration`.
  template <typename F>
  static Signal sample(F&& f, double dt, double duration) {
    const auto n = static_cast<std::size_t>(std::floor(duration / dt + 1e-9)) + 1;
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = f(static_cast<double>(k) * dt);
    return Signal(dt, std::move(v));
  }

  static Signal constant(double value, double dt, double duration) {
    return sample([value](double) { return value; }, dt, duration);
  }

  double dt() const noexcept { return dt_; }
  std::size_t size() const noexcept { return values_.size(); }
  double duration() const noexcept { return dt_ * static_cast<double>(values_.size() - 1); }
  double time(std::size_t k) const noexcept { return dt_ * static_cast<double>(k); }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  /// Linear interpolation inside the record.
  double at(double t) const {
    if (t < 0.0 || t > duration() * (1.0 + 1e-12)) throw Error(ErrorCode::kTimeOutOfRange, "t outside the record");
    const double pos = std::min(t / dt_, static_cast<double>(values_.size() - 1));
    const auto k = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
    const double frac = pos - static_cast<double>(k);
    return values_[k] + frac * (values_[k + 1] - values_[k]);
  }

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  double dt_;
  std::vector<double> values_;
};

inline bool same_step(const Signal& a, const Signal& b) {
  return std::abs(a.dt() - b.dt()) <= 1e-12 * std::max(a.dt(), b.dt());
}

inline void require_same_grid(const Signal& a, const Signal& b) {
  if (!same_step(a, b) || a.size() != b.size()) {
    throw Error(ErrorCode::kGridMismatch, "signals differ in step or length (" + std::to_string(a.size()) + " vs " +
                                              std::to_string(b.size()) + " samples)");
  }
}

namespace detail {

inline std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double dt) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t k = 1; k < f.size(); ++k) out[k] = out[k - 1] + 0.5 * dt * (f[k - 1] + f[k]);
  return out;
}

inline std::vector<double> pointwise_product(const Signal& a, const Signal& b) {
  std::vector<double> p(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) p[k] = a[k] * b[k];
  return p;
}

/// Central differences inside, second-order one-sided stencils at the ends.
inline std::vector<double> derivative(const Signal& s) {
  const auto& v = s.values();
  const std::size_t n = v.size();
  const double h = s.dt();
  std::vector<double> d(n);
  if (n == 2) {
    d[0] = d[1] = (v[1] - v[0]) / h;
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return d;
}

}  // namespace detail

/// ⟨u, y⟩_t = ∫₀ᵗ u(τ) y(τ) dτ by the composite trapezoid rule. A t that
/// falls between samples closes with a partial trapezoid on the
/// interpolated product.
inline double inner_product(const Signal& u, const Signal& y, double t) {
  if (!same_step(u, y)) throw Error(ErrorCode::kGridMismatch, "signals sampled with different steps");
  const std::size_t n = std::min(u.size(), y.size());
  const double dt = u.dt();
  const double span = dt * static_cast<double>(n - 1);
  if (t < 0.0 || t > span * (1.0 + 1e-12) + 1e-15) {
    throw Error(ErrorCode::kTimeOutOfRange, "t = " + std::to_string(t) + " beyond common duration");
  }
  double pos = t / dt;
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) <= 1e-9) pos = nearest;
  const auto full = std::min(static_cast<std::size_t>(pos), n - 1);
  double acc = 0.0;
  for (std::size_t k = 1; k <= full; ++k) acc += 0.5 * dt * (u[k - 1] * y[k - 1] + u[k] * y[k]);
  const double frac = pos - static_cast<double>(full);
  if (frac > 0.0 && full + 1 < n) {
    const double p0 = u[full] * y[full];
    const double p1 = u[full + 1] * y[full + 1];
    const double pt = p0 + frac * (p1 - p0);
    acc += 0.5 * frac * dt * (p0 + pt);
  }
  return acc;
}

/// Running ⟨u, y⟩_t at every sample time.
struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> E;

  double final_value() const { return E.back(); }
};

inline EnergyTrace energy_trace(const Signal& u, const Signal& y) {
  require_same_grid(u, y);
  EnergyTrace tr;
  tr.times.resize(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) tr.times[k] = u.time(k);
  tr.E = detail::cumulative_trapezoid(detail::pointwise_product(u, y), u.dt());
  return tr;
}

/// δ(t) = ∫₀ᵗ u, or ∫₀ᵗ |u| when `absolute` is set.
inline Signal input_integral(const Signal& u, bool absolute) {
  std::vector<double> f = u.values();
  if (absolute) {
    for (double& x : f) x = std::abs(x);
  }
  return Signal(u.dt(), detail::cumulative_trapezoid(f, u.dt()));
}

}  // namespace hyperstab
