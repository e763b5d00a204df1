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
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "hyperstab/energy.hpp"
#include "hyperstab/error.hpp"
#include "hyperstab/signal.hpp"

namespace hyperstab {

/// Slope k(y) of a sector device, v = k(y)·y before clamping to [k1, k2].
struct SlopeFunction {
  enum class Shape { kConstant, kTanh };
  Shape shape = Shape::kConstant;
  double gain = 1.0;

  double operator()(double y) const {
    if (shape == Shape::kConstant || y == 0.0) return gain;
    return gain * std::tanh(y) / y;
  }
};

struct StaticSector {
  double k1 = 0.0;
  double k2 = 1.0;
  std::optional<SlopeFunction> slope;  // defaults to the constant (k1 + k2) / 2
};

struct CubicOddPower {
  int p = 3;
};

/// k(t) sampled every `dt` seconds, linear in between, held after the last sample.
struct TimeVaryingGain {
  double dt = 1.0;
  std::vector<double> k;
};

struct Relay {
  double amplitude = 1.0;
};

/// v = -amplitude on [start, end) regardless of y; end = +inf never stops.
struct RegenerativePulse {
  double start = 0.0;
  double end = 1.0;
  double amplitude = 1.0;
};

/// Zero inside |y| <= deadzone, sector response k(y)·(y ∓ deadzone) outside.
struct DeadzoneSector {
  double deadzone = 0.1;
  double k1 = 0.0;
  double k2 = 1.0;
  std::optional<SlopeFunction> slope;
};

using DeviceSpec = std::variant<StaticSector, CubicOddPower, TimeVaryingGain, Relay, RegenerativePulse, DeadzoneSector>;

inline std::string device_kind(const DeviceSpec& spec) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, StaticSector>) return "StaticSector";
        if constexpr (std::is_same_v<T, CubicOddPower>) return "CubicOddPower";
        if constexpr (std::is_same_v<T, TimeVaryingGain>) return "TimeVaryingGain";
        if constexpr (std::is_same_v<T, Relay>) return "Relay";
        if constexpr (std::is_same_v<T, RegenerativePulse>) return "RegenerativePulse";
        if constexpr (std::is_same_v<T, DeadzoneSector>) return "DeadzoneSector";
      },
      spec);
}

enum class PopovDeclaration { kAlwaysPopovWithZeroGamma, kPopovWithFiniteGamma, kMayViolate };

inline std::string to_string(PopovDeclaration d) {
  switch (d) {
    case PopovDeclaration::kAlwaysPopovWithZeroGamma: return "AlwaysPopovWithZeroGamma";
    case PopovDeclaration::kPopovWithFiniteGamma: return "PopovWithFiniteGamma";
    case PopovDeclaration::kMayViolate: return "MayViolate";
  }
  return "Unknown";
}

/// Devices are memoryless for now; the state slot is threaded through so
/// stateful devices can be added without changing call sites.
struct DeviceState {};

struct DeviceOutput {
  double v = 0.0;
  DeviceState state;
};

namespace detail {

inline void check_sector(double k1, double k2) {
  if (!(k1 >= 0.0) || !(k1 <= k2) || !std::isfinite(k2)) {
    throw Error(ErrorCode::kInvalidParams, "sector slopes need 0 <= k1 <= k2 < inf");
  }
}

inline double clamped_slope(const std::optional<SlopeFunction>& slope, double k1, double k2, double y) {
  const double k = slope ? (*slope)(y) : 0.5 * (k1 + k2);
  return std::clamp(k, k1, k2);
}

inline double sign(double y) { return (y > 0.0) - (y < 0.0); }

}  // namespace detail

inline void validate(const DeviceSpec& spec) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, StaticSector>) {
          detail::check_sector(d.k1, d.k2);
        } else if constexpr (std::is_same_v<T, CubicOddPower>) {
          if (d.p < 1 || d.p % 2 == 0) throw Error(ErrorCode::kInvalidParams, "exponent must be odd and >= 1");
        } else if constexpr (std::is_same_v<T, TimeVaryingGain>) {
          if (!(d.dt > 0.0) || d.k.empty()) throw Error(ErrorCode::kInvalidParams, "gain schedule needs dt > 0 and samples");
          for (double k : d.k) {
            if (!(k >= 0.0) || !std::isfinite(k)) throw Error(ErrorCode::kInvalidParams, "gain samples must be finite and >= 0");
          }
        } else if constexpr (std::is_same_v<T, Relay>) {
          if (!(d.amplitude >= 0.0) || !std::isfinite(d.amplitude)) {
            throw Error(ErrorCode::kInvalidParams, "relay amplitude must be finite and >= 0");
          }
        } else if constexpr (std::is_same_v<T, RegenerativePulse>) {
          if (!(d.end > d.start) || !std::isfinite(d.amplitude) || !std::isfinite(d.start)) {
            throw Error(ErrorCode::kInvalidParams, "pulse needs start < end and a finite amplitude");
          }
        } else if constexpr (std::is_same_v<T, DeadzoneSector>) {
          detail::check_sector(d.k1, d.k2);
          if (!(d.deadzone >= 0.0) || !std::isfinite(d.deadzone)) {
            throw Error(ErrorCode::kInvalidParams, "deadzone must be finite and >= 0");
          }
        }
      },
      spec);
}

inline double gain_at(const TimeVaryingGain& g, double t) {
  const double pos = std::max(t, 0.0) / g.dt;
  const auto last = g.k.size() - 1;
  if (pos >= static_cast<double>(last)) return g.k.back();
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  return g.k[i] + frac * (g.k[i + 1] - g.k[i]);
}

/// v = F(y, t). Parameters are assumed valid (see validate()).
inline DeviceOutput apply_device(const DeviceSpec& spec, double y, double t, DeviceState state = {}) {
  const double v = std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, StaticSector>) {
          return detail::clamped_slope(d.slope, d.k1, d.k2, y) * y;
        } else if constexpr (std::is_same_v<T, CubicOddPower>) {
          double r = y;
          for (int i = 1; i < d.p; ++i) r *= y;
          return r;
        } else if constexpr (std::is_same_v<T, TimeVaryingGain>) {
          return gain_at(d, t) * y;
        } else if constexpr (std::is_same_v<T, Relay>) {
          return d.amplitude * detail::sign(y);
        } else if constexpr (std::is_same_v<T, RegenerativePulse>) {
          return (t >= d.start && t < d.end) ? -d.amplitude : 0.0;
        } else if constexpr (std::is_same_v<T, DeadzoneSector>) {
          if (std::abs(y) <= d.deadzone) return 0.0;
          const double excess = y - d.deadzone * detail::sign(y);
          return detail::clamped_slope(d.slope, d.k1, d.k2, excess) * excess;
        }
      },
      spec);
  return DeviceOutput{v, state};
}

/// Devices with a jump in y (the algebraic-loop solver may have to settle
/// on the jump point instead of a root).
inline bool is_discontinuous(const DeviceSpec& spec) { return std::holds_alternative<Relay>(spec); }

inline PopovDeclaration declared_status(const DeviceSpec& spec) {
  if (const auto* p = std::get_if<RegenerativePulse>(&spec)) {
    return std::isfinite(p->end) ? PopovDeclaration::kPopovWithFiniteGamma : PopovDeclaration::kMayViolate;
  }
  return PopovDeclaration::kAlwaysPopovWithZeroGamma;
}

struct DevicePopovStatus {
  PopovDeclaration declared = PopovDeclaration::kAlwaysPopovWithZeroGamma;
  double measured_gamma0_sq = 0.0;
  /// RegenerativePulse only: energy ⟨v,y⟩ accumulated since the pulse began
  /// stays negative through the injection interval. Unset when the pulse
  /// does not oppose y over the whole interval.
  std::optional<bool> injection_energy_negative;
};

inline constexpr double kZeroGammaTol = 1e-12;

/// Measures γ0² on a run and checks it against the device's declaration.
inline DevicePopovStatus device_popov_audit(const DeviceSpec& spec, const Signal& v, const Signal& y) {
  DevicePopovStatus st;
  st.declared = declared_status(spec);
  st.measured_gamma0_sq = popov_audit(v, y).gamma0_sq;
  if (st.declared == PopovDeclaration::kAlwaysPopovWithZeroGamma && st.measured_gamma0_sq > kZeroGammaTol) {
    throw Error(ErrorCode::kDeclarationViolated,
                device_kind(spec) + " measured gamma0^2 = " + std::to_string(st.measured_gamma0_sq));
  }
  if (const auto* p = std::get_if<RegenerativePulse>(&spec)) {
    const auto E = energy_trace(v, y).E;
    std::optional<std::size_t> first;
    bool opposes = true;
    bool negative = true;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double t = v.time(k);
      if (t < p->start || t >= p->end) continue;
      if (!first) {
        first = k;
        continue;
      }
      if (v[k] * y[k] > 0.0 || y[k] == 0.0) opposes = false;
      if (!(E[k] - E[*first] < 0.0)) negative = false;
    }
    if (first && opposes) st.injection_energy_negative = negative;
  }
  return st;
}

}  // namespace hyperstab
