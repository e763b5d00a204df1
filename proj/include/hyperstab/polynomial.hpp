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
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "hyperstab/error.hpp"

namespace hyperstab {

using Complex = std::complex<double>;

/// Real polynomial with coefficients stored in ascending powers of s.
/// Trailing (highest-power) zeros are trimmed, so the zero polynomial has an
/// empty coefficient list and degree -1.
class Polynomial {
 public:
  Polynomial() = default;

  explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    for (double c : coeffs_) {
      if (!std::isfinite(c)) throw Error(ErrorCode::kInvalidParams, "non-finite polynomial coefficient");
    }
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
  }

  Polynomial(std::initializer_list<double> coeffs) : Polynomial(std::vector<double>(coeffs)) {}

  static Polynomial monomial(int power, double coeff = 1.0) {
    std::vector<double> c(static_cast<std::size_t>(power) + 1, 0.0);
    c.back() = coeff;
    return Polynomial(std::move(c));
  }

  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  double leading() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_.back(); }
  double coeff(int power) const noexcept {
    return power >= 0 && power <= degree() ? coeffs_[static_cast<std::size_t>(power)] : 0.0;
  }

  template <typename T>
  T operator()(T s) const {
    T acc{0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + T{*it};
    return acc;
  }

  /// Sum of |c_i| r^i: the natural magnitude against which a residual of
  /// p evaluated at |s| = r is judged.
  double scale_at(double r) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  Polynomial derivative() const {
    if (degree() < 1) return {};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
    return Polynomial(std::move(d));
  }

  Polynomial scaled(double alpha) const {
    std::vector<double> c = coeffs_;
    for (double& x : c) x *= alpha;
    return Polynomial(std::move(c));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(c));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
    return Polynomial(std::move(c));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b.scaled(-1.0); }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

struct DivisionResult {
  Polynomial quotient;
  Polynomial remainder;
};

/// Long division num = quotient * den + remainder with deg(remainder) < deg(den).
inline DivisionResult divide(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw Error(ErrorCode::kZeroDenominator, "polynomial division by zero");
  if (num.degree() < den.degree()) return {Polynomial{}, num};
  std::vector<double> rem = num.coeffs();
  const int nd = den.degree();
  std::vector<double> q(static_cast<std::size_t>(num.degree() - nd) + 1, 0.0);
  for (int k = num.degree() - nd; k >= 0; --k) {
    const double factor = rem[static_cast<std::size_t>(k + nd)] / den.leading();
    q[static_cast<std::size_t>(k)] = factor;
    for (int j = 0; j <= nd; ++j) rem[static_cast<std::size_t>(k + j)] -= factor * den.coeff(j);
    rem[static_cast<std::size_t>(k + nd)] = 0.0;
  }
  rem.resize(static_cast<std::size_t>(std::max(nd, 0)));
  return {Polynomial(std::move(q)), Polynomial(std::move(rem))};
}

/// Monic real polynomial with the given roots, scaled by `leading`. Complex
/// roots are expected in conjugate pairs; imaginary round-off is dropped.
inline Polynomial from_roots(std::span<const Complex> roots, double leading = 1.0) {
  std::vector<Complex> c{Complex{1.0}};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, Complex{0.0});
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  std::vector<double> real(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) real[i] = leading * c[i].real();
  return Polynomial(std::move(real));
}

/// All roots of p with multiplicity. Exact zero roots (vanishing low-order
/// coefficients) are peeled off first; the rest come from the eigenvalues of
/// the companion matrix, followed by a Newton polish that is kept only when
/// it lowers the residual.
inline std::vector<Complex> roots(const Polynomial& p) {
  if (p.degree() < 1) throw Error(ErrorCode::kDegenerateInput, "roots() needs a polynomial of degree >= 1");
  std::vector<Complex> out;
  std::size_t first = 0;
  const auto& c = p.coeffs();
  while (c[first] == 0.0) {
    out.emplace_back(0.0, 0.0);
    ++first;
  }
  const int n = p.degree() - static_cast<int>(first);
  if (n == 0) return out;
  if (n == 1) {
    out.emplace_back(-c[first] / c[first + 1], 0.0);
    return out;
  }

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  const double lead = c[first + static_cast<std::size_t>(n)];
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[first + static_cast<std::size_t>(i)] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::kDegenerateInput, "companion eigen-decomposition failed");

  const Polynomial dp = p.derivative();
  for (int i = 0; i < n; ++i) {
    Complex r = solver.eigenvalues()[i];
    for (int iter = 0; iter < 3; ++iter) {
      const Complex f = p(r);
      const Complex df = dp(r);
      if (std::abs(df) == 0.0) break;
      const Complex candidate = r - f / df;
      if (std::abs(p(candidate)) < std::abs(f)) {
        r = candidate;
      } else {
        break;
      }
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace hyperstab
