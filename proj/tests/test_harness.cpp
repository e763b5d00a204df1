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

#include <cmath>

#include "hyperstab/harness.hpp"

namespace hyperstab {
namespace {

Scenario make(std::vector<double> num, std::vector<double> den, DeviceSpec dev, std::vector<double> x0,
              double horizon = 50.0) {
  Scenario sc;
  sc.plant = ratfun_new(std::move(num), std::move(den));
  sc.device = std::move(dev);
  sc.x0 = std::move(x0);
  sc.horizon = horizon;
  return sc;
}

bool nondecreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] < v[k - 1]) return false;
  }
  return true;
}

TEST(Scenario, Validation) {
  auto sc = make({1}, {1, 1}, StaticSector{1, 1, std::nullopt}, {0.0});
  EXPECT_THROW(validate(sc), Error);  // identically zero run
  sc.x0 = {1.0};
  EXPECT_NO_THROW(validate(sc));
  sc.horizon = 50 * sc.dt;
  EXPECT_THROW(validate(sc), Error);
  sc.horizon = 1.0;
  sc.x0 = {1.0, 2.0};
  EXPECT_THROW(validate(sc), Error);
  sc.x0 = {0.0};
  sc.excitation = Excitation{1.0, 0.5};
  EXPECT_NO_THROW(validate(sc));
  try {
    sc.device = CubicOddPower{2};
    validate(sc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidScenario);
  }
}

TEST(ClosedLoop, SsprSectorDecays) {
  // (s+2)/(s+1) with u = -y: y = (s+2)/(2s+3) times the state, closed-loop pole -1.5.
  const auto run = run_closed_loop(make({2, 1}, {1, 1}, StaticSector{1, 1, std::nullopt}, {2.0}));
  EXPECT_NEAR(run.y[0], 1.0, 1e-12);
  for (std::size_t k = 1; k < run.y.size(); ++k) EXPECT_LE(std::abs(run.y[k]), std::abs(run.y[k - 1]) + 1e-15);
  for (std::size_t k = 0; k < run.y.size(); k += 997) EXPECT_NEAR(run.y[k], std::exp(-1.5 * run.y.time(k)), 1e-6);
  EXPECT_EQ(run.verdict, Verdict::kAsymptoticallyHyperstableEvidence);
  EXPECT_EQ(run.classification.grade, Grade::kSSPR);
  EXPECT_TRUE(run.bound_audit.passed());
}

TEST(ClosedLoop, LoopAlgebraExact) {
  const auto run = run_closed_loop(make({2, 1}, {1, 1}, StaticSector{1, 1, std::nullopt}, {2.0}, 5.0));
  for (std::size_t k = 0; k < run.u.size(); ++k) EXPECT_EQ(run.u[k] + run.v[k], run.e[k]);
}

TEST(ClosedLoop, ZeroStatePlusFreeResponseIsOutput) {
  auto sc = make({2, 3, 1}, {2, 2, 1}, CubicOddPower{3}, {0.5, -0.2}, 10.0);
  sc.excitation = Excitation{0.7, 1.0};
  const auto run = run_closed_loop(sc);
  for (std::size_t k = 0; k < run.y.size(); ++k) {
    EXPECT_NEAR(run.y[k], run.y_forced[k] + run.y_free[k], 1e-9 * (1 + std::abs(run.y[k])));
  }
}

TEST(ClosedLoop, CubicOnLagMatchesOde) {
  const auto run = run_closed_loop(make({1}, {1, 1}, CubicOddPower{3}, {1.0}));
  // x' = -x - x^3 has the closed form x^2 = 1 / (2 e^{2t} - 1) for x(0) = 1.
  for (std::size_t k = 0; k < run.y.size(); k += 499) {
    const double t = run.y.time(k);
    EXPECT_NEAR(run.y[k], 1.0 / std::sqrt(2.0 * std::exp(2.0 * t) - 1.0), 1e-6);
  }
  EXPECT_EQ(run.classification.grade, Grade::kWSPR);
}

TEST(ClosedLoop, UnstablePlantDiverges) {
  const auto run = run_closed_loop(make({1}, {-1, 1}, StaticSector{0.5, 0.5, std::nullopt}, {1.0}));
  EXPECT_TRUE(run.diverged);
  EXPECT_EQ(run.verdict, Verdict::kDiverged);
  EXPECT_NEAR(growth_rate(run.y), 0.5, 1e-3);
  EXPECT_FALSE(run.bound_audit.applicable);
}

TEST(ClosedLoop, IntegratorWithRelayStaysBounded) {
  const auto run = run_closed_loop(make({1}, {0, 1}, Relay{1.0}, {1.0}, 5.0));
  for (std::size_t k = 0; k < run.y.size(); ++k) {
    const double t = run.y.time(k);
    if (t <= 0.999) { EXPECT_NEAR(run.y[k], 1.0 - t, 1e-9); }
    EXPECT_LE(std::abs(run.y[k]), 1.0 + 1e-12);
  }
  EXPECT_TRUE(run.verdict == Verdict::kHyperstableEvidence ||
              run.verdict == Verdict::kAsymptoticallyHyperstableEvidence);
}

TEST(ClosedLoop, NonPopovDeviceCapsVerdict) {
  const auto run = run_closed_loop(
      make({2, 1}, {1, 1}, RegenerativePulse{1.0, std::numeric_limits<double>::infinity(), 0.1}, {2.0}, 10.0));
  EXPECT_EQ(run.verdict, Verdict::kInconclusive);
  ASSERT_FALSE(run.warnings.empty());
  EXPECT_EQ(run.warnings.front(), "NonPopovDeviceWarning");
}

TEST(BoundChain, SsprRunHasNoViolations) {
  const auto run = run_closed_loop(make({2, 1}, {1, 1}, StaticSector{1, 1, std::nullopt}, {2.0}));
  const auto a = verify_bound_chain(run);
  EXPECT_EQ(a.violation_count, 0u);
  EXPECT_NEAR(a.d, 1.0, 1e-9);
  EXPECT_NEAR(a.d_inv, 0.5, 1e-9);
  for (std::size_t k = 1; k < run.E.E.size(); ++k) {
    EXPECT_GT(run.E.E[k], 0.0);
    EXPECT_GT(a.d_lower[k], 0.0);
    EXPECT_LE(run.E.E[k], a.gamma0_sq + a.tol_bound);
  }
  EXPECT_TRUE(nondecreasing(a.d_lower));
  EXPECT_TRUE(nondecreasing(a.d_inv_lower));
}

TEST(BoundChain, IntegratorOriginPoleChain) {
  const auto run = run_closed_loop(make({1}, {0, 1}, StaticSector{1, 1, std::nullopt}, {1.0}));
  for (std::size_t k = 0; k < run.y.size(); k += 997) EXPECT_NEAR(run.y[k], std::exp(-run.y.time(k)), 1e-6);
  const auto a = verify_bound_chain(run);
  EXPECT_EQ(a.violation_count, 0u);
  EXPECT_TRUE(nondecreasing(a.d1_lower));
  for (std::size_t k = 1; k < run.E.E.size(); ++k) EXPECT_GT(run.E.E[k], 0.0);
  EXPECT_LE(run.E.final_value(), a.gamma0_sq + a.tol_bound);
}

TEST(BoundChain, WsprTracesAreMonotone) {
  const auto run = run_closed_loop(make({1}, {1, 1}, CubicOddPower{3}, {1.0}, 10.0));
  const auto a = verify_bound_chain(run);
  EXPECT_TRUE(nondecreasing(a.d0_lower));
  EXPECT_NEAR(a.d0, 1.0, 1e-9);
  for (const auto& v : a.violations) EXPECT_FALSE(v.inequality.empty());
}

TEST(BoundChain, NotPrHasNoChain) {
  const auto run = run_closed_loop(make({1}, {2, 3, 1}, StaticSector{1, 1, std::nullopt}, {1.0, 0.0}, 10.0));
  EXPECT_FALSE(run.bound_audit.applicable);
  try {
    verify_bound_chain(run);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGradeUnsupported);
  }
  EXPECT_EQ(run.verdict, Verdict::kInconclusive);
}

TEST(Batch, EmptyAndOrdered) {
  EXPECT_TRUE(batch_run({}).empty());
  std::vector<Scenario> scs{make({2, 1}, {1, 1}, StaticSector{1, 1, std::nullopt}, {2.0}, 5.0),
                            make({1}, {1, 1}, CubicOddPower{3}, {1.0}, 5.0),
                            make({1}, {0, 1}, StaticSector{1, 1, std::nullopt}, {1.0}, 5.0)};
  Scenario broken = scs[0];
  broken.x0 = {0.0};
  scs.insert(scs.begin() + 1, broken);
  const auto par = batch_run(scs);
  const auto seq = batch_run(scs, FrequencyGrid{}, false);
  ASSERT_EQ(par.size(), scs.size());
  EXPECT_TRUE(par[1].error);
  EXPECT_EQ(par[1].error->code(), ErrorCode::kInvalidScenario);
  for (std::size_t i = 0; i < scs.size(); ++i) {
    ASSERT_EQ(par[i].run.has_value(), seq[i].run.has_value());
    if (!par[i].run) continue;
    EXPECT_EQ(par[i].run->y, seq[i].run->y);
    EXPECT_EQ(par[i].run->u, seq[i].run->u);
    EXPECT_EQ(par[i].run->E.E, seq[i].run->E.E);
    EXPECT_EQ(par[i].run->scenario.plant, scs[i].plant);
  }
}

TEST(GrowthRate, PureExponential) {
  const auto y = Signal::sample([](double t) { return 3.0 * std::exp(0.7 * t); }, 1e-2, 10.0);
  EXPECT_NEAR(growth_rate(y), 0.7, 1e-9);
}

}  // namespace
}  // namespace hyperstab
