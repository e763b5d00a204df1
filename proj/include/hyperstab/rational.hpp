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

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "hyperstab/error.hpp"
#include "hyperstab/polynomial.hpp"

namespace hyperstab {

/// Relative tolerance for deciding that a root of one polynomial is also a
/// root of the other during cancellation.
inline constexpr double kRootMatchTol = 1e-8;
/// |Re p| at or below this places a pole on the imaginary axis.
inline constexpr double kAxisTol = 1e-9;
/// Computed roots closer than this (relative) are merged into one pole of
/// higher multiplicity. A triple root scatters by roughly eps^(1/3).
inline constexpr double kClusterTol = 1e-5;

struct PoleInfo {
  Complex location;
  int multiplicity = 1;
  std::optional<Complex> residue;  // populated iff multiplicity == 1
};

enum class Stability { kStrictlyStable, kCriticallyStable, kUnstable };

inline std::string to_string(Stability s) {
  switch (s) {
    case Stability::kStrictlyStable: return "StrictlyStable";
    case Stability::kCriticallyStable: return "CriticallyStable";
    case Stability::kUnstable: return "Unstable";
  }
  return "Unknown";
}

namespace detail {

inline Polynomial root_factor(const Complex& r) {
  if (std::abs(r.imag()) <= kRootMatchTol * (1.0 + std::abs(r))) return Polynomial{-r.real(), 1.0};
  return Polynomial{std::norm(r), -2.0 * r.real(), 1.0};
}

inline std::vector<PoleInfo> cluster_roots(const std::vector<Complex>& rs) {
  std::vector<PoleInfo> out;
  std::vector<bool> used(rs.size(), false);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (used[i]) continue;
    Complex sum = rs[i];
    int count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      if (!used[j] && std::abs(rs[j] - rs[i]) <= kClusterTol * (1.0 + std::abs(rs[i]))) {
        used[j] = true;
        sum += rs[j];
        ++count;
      }
    }
    Complex mean = sum / static_cast<double>(count);
    if (std::abs(mean.imag()) <= 1e-14 * (1.0 + std::abs(mean))) mean = Complex{mean.real(), 0.0};
    out.push_back(PoleInfo{mean, count, std::nullopt});
  }
  return out;
}

}  // namespace detail

/// Proper real rational function num(s)/den(s) in canonical form: common
/// roots cancelled, denominator monic, deg num <= deg den.
class RationalFunction {
 public:
  RationalFunction(Polynomial num, Polynomial den) {
    if (den.is_zero()) throw Error(ErrorCode::kZeroDenominator, "denominator is the zero polynomial");
    if (num.is_zero()) {
      num_ = Polynomial{};
      den_ = Polynomial{1.0};
      return;
    }
    cancel_common_roots(num, den);
    if (num.degree() > den.degree()) {
      throw Error(ErrorCode::kImproperTransferFunction,
                  "numerator degree " + std::to_string(num.degree()) + " exceeds denominator degree " +
                      std::to_string(den.degree()));
    }
    const double lead = den.leading();
    num_ = num.scaled(1.0 / lead);
    den_ = den.scaled(1.0 / lead);
  }

  const Polynomial& num() const noexcept { return num_; }
  const Polynomial& den() const noexcept { return den_; }
  int order() const noexcept { return den_.degree(); }

  /// deg(den) - deg(num); the zero function counts as relative degree 0.
  int relative_degree() const noexcept { return num_.is_zero() ? 0 : den_.degree() - num_.degree(); }

  Complex operator()(Complex s) const { return num_(s) / den_(s); }

  RationalFunction scaled(double alpha) const { return RationalFunction(num_.scaled(alpha), den_); }

  /// Poles with multiplicity; simple poles carry their residue num(p)/den'(p).
  std::vector<PoleInfo> poles() const {
    if (den_.degree() < 1) return {};
    auto info = detail::cluster_roots(roots(den_));
    const Polynomial dden = den_.derivative();
    for (auto& p : info) {
      if (p.multiplicity == 1) p.residue = num_(p.location) / dden(p.location);
    }
    return info;
  }

  std::vector<Complex> zeros() const {
    if (num_.degree() < 1) return {};
    return roots(num_);
  }

  friend bool operator==(const RationalFunction&, const RationalFunction&) = default;

 private:
  static void cancel_common_roots(Polynomial& num, Polynomial& den) {
    bool cancelled = true;
    while (cancelled && num.degree() >= 1 && den.degree() >= 1) {
      cancelled = false;
      for (const Complex& r : roots(num)) {
        if (std::abs(den(r)) <= kRootMatchTol * den.scale_at(std::abs(r))) {
          const Polynomial factor = detail::root_factor(r);
          num = divide(num, factor).quotient;
          den = divide(den, factor).quotient;
          cancelled = true;
          break;
        }
      }
    }
  }

  Polynomial num_;
  Polynomial den_;
};

/// Builds ĝ = num/den from ascending-power coefficient lists.
inline RationalFunction ratfun_new(std::vector<double> num, std::vector<double> den) {
  return RationalFunction(Polynomial(std::move(num)), Polynomial(std::move(den)));
}

/// ĝ(jω). Throws EvaluationAtPole when jω is (numerically) a pole.
inline Complex freq_response(const RationalFunction& g, double omega) {
  const Complex s{0.0, omega};
  const Complex d = g.den()(s);
  if (std::abs(d) <= 1e-12 * g.den().scale_at(std::abs(omega))) {
    throw Error(ErrorCode::kEvaluationAtPole, "frequency " + std::to_string(omega) + " rad/s is a pole");
  }
  return g.num()(s) / d;
}

inline Stability stability_class(const RationalFunction& g) {
  bool on_axis = false;
  for (const auto& p : g.poles()) {
    if (p.location.real() > kAxisTol) return Stability::kUnstable;
    if (p.location.real() >= -kAxisTol) {
      if (p.multiplicity > 1) return Stability::kUnstable;
      on_axis = true;
    }
  }
  return on_axis ? Stability::kCriticallyStable : Stability::kStrictlyStable;
}

/// Simple poles on the imaginary axis with their residues. A repeated axis
/// pole rules out positive realness outright and is reported as an error.
inline std::vector<PoleInfo> imaginary_axis_residues(const RationalFunction& g) {
  std::vector<PoleInfo> out;
  for (const auto& p : g.poles()) {
    if (std::abs(p.location.real()) > kAxisTol) continue;
    if (p.multiplicity > 1) {
      throw Error(ErrorCode::kRepeatedAxisPole, "pole at jω = j" + std::to_string(p.location.imag()) +
                                                    " has multiplicity " + std::to_string(p.multiplicity));
    }
    out.push_back(p);
  }
  return out;
}

/// s·ĝ(s), cancelled.
inline RationalFunction times_s(const RationalFunction& g) {
  return RationalFunction(g.num() * Polynomial{0.0, 1.0}, g.den());
}

/// 1/ĝ(s).
inline RationalFunction inverse(const RationalFunction& g) {
  if (g.num().is_zero()) throw Error(ErrorCode::kZeroNumerator, "cannot invert the zero function");
  return RationalFunction(g.den(), g.num());
}

/// Coefficients h_0, h_1, ... of the expansion ĝ(s) = Σ h_k s^{-k} about
/// s = ∞ (h_0 is the feedthrough, h_k for k >= 1 are the Markov parameters).
inline std::vector<double> laurent_at_infinity(const RationalFunction& g, int count) {
  const int n = g.den().degree();
  std::vector<double> h(static_cast<std::size_t>(count), 0.0);
  for (int k = 0; k < count; ++k) {
    double acc = g.num().coeff(n - k);
    for (int i = 1; i <= k; ++i) acc -= g.den().coeff(n - i) * h[static_cast<std::size_t>(k - i)];
    h[static_cast<std::size_t>(k)] = acc;
  }
  return h;
}

}  // namespace hyperstab
