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


#include <gtest/gtest.h>

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

#include "hyperstab/polynomial.hpp"

namespace hyperstab {
namespace {

bool contains_root(const std::vector<Complex>& rs, Complex want, double tol = 1e-10) {
  return std::any_of(rs.begin(), rs.end(), [&](Complex r) { return std::abs(r - want) <= tol; });
}

TEST(Polynomial, TrimsTrailingZeros) {
  const Polynomial p{1.0, 2.0, 0.0, 0.0};
  EXPECT_EQ(p.degree(), 1);
  EXPECT_EQ(p.coeffs(), (std::vector<double>{1.0, 2.0}));
}

TEST(Polynomial, ZeroPolynomialHasDegreeMinusOne) {
  const Polynomial p{0.0, 0.0};
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(p.degree(), -1);
}

TEST(Polynomial, RejectsNonFinite) {
  EXPECT_THROW(Polynomial({1.0, std::numeric_limits<double>::quiet_NaN()}), Error);
}

TEST(Polynomial, HornerEvaluation) {
  const Polynomial p{2.0, 3.0, 1.0};  // s^2 + 3s + 2
  EXPECT_DOUBLE_EQ(p(1.0), 6.0);
  const Complex v = p(Complex{0.0, 1.0});
  EXPECT_NEAR(v.real(), 1.0, 1e-15);
  EXPECT_NEAR(v.imag(), 3.0, 1e-15);
}

TEST(Polynomial, Arithmetic) {
  const Polynomial a{1.0, 1.0};
  const Polynomial b{2.0, 1.0};
  EXPECT_EQ(a * b, (Polynomial{2.0, 3.0, 1.0}));
  EXPECT_EQ(a + b, (Polynomial{3.0, 2.0}));
  EXPECT_EQ(b - a, (Polynomial{1.0}));
  EXPECT_EQ((Polynomial{2.0, 3.0, 1.0}).derivative(), (Polynomial{3.0, 2.0}));
}

TEST(Polynomial, DivisionWithRemainder) {
  const auto r = divide(Polynomial{2.0, 1.0}, Polynomial{1.0, 1.0});
  EXPECT_EQ(r.quotient, (Polynomial{1.0}));
  EXPECT_EQ(r.remainder, (Polynomial{1.0}));
}

TEST(Roots, Linear) {
  const auto rs = roots(Polynomial{1.0, 1.0});
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_TRUE(contains_root(rs, {-1.0, 0.0}));
}

TEST(Roots, ImaginaryPair) {
  const auto rs = roots(Polynomial{1.0, 0.0, 1.0});
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_TRUE(contains_root(rs, {0.0, 1.0}));
  EXPECT_TRUE(contains_root(rs, {0.0, -1.0}));
}

TEST(Roots, ComplexPairFromQuadraticFormula) {
  const auto rs = roots(Polynomial{2.0, 2.0, 1.0});
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_TRUE(contains_root(rs, {-1.0, 1.0}));
  EXPECT_TRUE(contains_root(rs, {-1.0, -1.0}));
}

TEST(Roots, ExactZeroRootsArePeeled) {
  const auto rs = roots(Polynomial{0.0, 0.0, 2.0, 1.0});
  ASSERT_EQ(rs.size(), 3u);
  EXPECT_EQ(std::count(rs.begin(), rs.end(), Complex{0.0, 0.0}), 2);
  EXPECT_TRUE(contains_root(rs, {-2.0, 0.0}));
}

TEST(Roots, ResidualIsSmall) {
  const Polynomial p{-6.0, 11.0, -6.0, 1.0};
  for (const auto& r : roots(p)) EXPECT_LE(std::abs(p(r)), 1e-12 * p.scale_at(std::abs(r)));
}

TEST(Roots, ZeroPolynomialIsDegenerate) {
  try {
    roots(Polynomial{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateInput);
  }
}

TEST(Roots, ConstantIsDegenerate) { EXPECT_THROW(roots(Polynomial{3.0}), Error); }

TEST(FromRoots, BuildsMonicProduct) {
  const std::vector<Complex> rs{{-1.0, 0.0}, {-2.0, 0.0}};
  EXPECT_EQ(from_roots(rs), (Polynomial{2.0, 3.0, 1.0}));
}

}  // namespace
}  // namespace hyperstab
