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
#include <numbers>

#include "hyperstab/energy.hpp"
#include "hyperstab/signal.hpp"

namespace hyperstab {
namespace {

Signal expo(double duration, double dt = 1e-3) {
  return Signal::sample([](double t) { return std::exp(-t); }, dt, duration);
}

TEST(Signal, Invariants) {
  EXPECT_THROW(Signal(0.0, {1.0, 2.0}), Error);
  EXPECT_THROW(Signal(0.1, {1.0}), Error);
  EXPECT_THROW(Signal(0.1, {1.0, std::nan("")}), Error);
  const Signal s(0.5, {0.0, 1.0, 4.0});
  EXPECT_DOUBLE_EQ(s.duration(), 1.0);
  EXPECT_DOUBLE_EQ(s.at(0.75), 2.5);
  EXPECT_THROW(s.at(1.5), Error);
}

TEST(InnerProduct, Examples) {
  const auto one = Signal::constant(1.0, 1e-3, 1.0);
  const auto minus = Signal::constant(-1.0, 1e-3, 1.0);
  EXPECT_NEAR(inner_product(one, one, 1.0), 1.0, 1e-12);
  EXPECT_NEAR(inner_product(one, minus, 1.0), -1.0, 1e-12);
  const auto e = expo(10.0);
  EXPECT_NEAR(inner_product(e, e, 10.0), (1.0 - std::exp(-20.0)) / 2.0, 1e-6);
}

TEST(InnerProduct, Errors) {
  const auto a = Signal::constant(1.0, 1e-3, 1.0);
  const auto b = Signal::constant(1.0, 2e-3, 1.0);
  try {
    inner_product(a, b, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGridMismatch);
  }
  try {
    inner_product(a, a, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTimeOutOfRange);
  }
}

TEST(InnerProduct, PartialLastStep) {
  const auto one = Signal::constant(1.0, 0.1, 1.0);
  EXPECT_NEAR(inner_product(one, one, 0.55), 0.55, 1e-14);
}

TEST(EnergyTrace, Examples) {
  const auto one = Signal::constant(1.0, 1e-3, 2.0);
  const auto tr = energy_trace(one, one);
  EXPECT_DOUBLE_EQ(tr.E[0], 0.0);
  for (std::size_t k = 0; k < tr.E.size(); k += 97) EXPECT_NEAR(tr.E[k], tr.times[k], 1e-12);
  const double T = 2.0 * std::numbers::pi;
  const auto s = Signal::sample([](double t) { return std::sin(t); }, T / 10000, T);
  const auto c = Signal::sample([](double t) { return std::cos(t); }, T / 10000, T);
  EXPECT_NEAR(energy_trace(s, c).final_value(), 0.0, 1e-9);
  const auto z = Signal::constant(0.0, 1e-3, 1.0);
  for (double x : energy_trace(z, z).E) EXPECT_EQ(x, 0.0);
}

TEST(EnergyTrace, FinalEqualsInnerProduct) {
  const auto e = expo(3.0);
  const auto u = Signal::sample([](double t) { return std::sin(3 * t); }, 1e-3, 3.0);
  EXPECT_NEAR(energy_trace(u, e).final_value(), inner_product(u, e, 3.0), 1e-14);
}

TEST(FrequencyEnergy, Examples) {
  const auto rect = Signal::constant(1.0, 1e-3, 1.0);
  EXPECT_NEAR(frequency_energy(rect, rect), 1.0, 1e-6);
  const auto e = expo(10.0);
  EXPECT_NEAR(frequency_energy(e, e), 0.5, 1e-6);
  const double T = 2.0 * std::numbers::pi;
  const auto s = Signal::sample([](double t) { return std::sin(t); }, T / 6000, T);
  EXPECT_NEAR(frequency_energy(s, s), std::numbers::pi, 1e-4);
}

TEST(FrequencyEnergy, AgreesWithTimeDomainForResolvedSignals) {
  const auto u = Signal::sample([](double t) { return std::sin(t) * std::pow(std::sin(std::numbers::pi * t / 10), 2); },
                                1e-3, 10.0);
  const auto y = Signal::sample([](double t) { return std::exp(-0.3 * t) * std::cos(2 * t); }, 1e-3, 10.0);
  const double te = energy_trace(u, y).final_value();
  const double fe = frequency_energy(u, y);
  EXPECT_LE(std::abs(te - fe), 1e-6 * (1.0 + std::abs(te)));
}

TEST(FrequencyEnergy, AliasedContentBreaksAgreement) {
  const double dt = 0.1;
  const double w = 0.95 * std::numbers::pi / dt;
  const auto u = Signal::sample([w](double t) { return std::sin(w * t); }, dt, 10.0);
  const double te = energy_trace(u, u).final_value();
  const double fe = frequency_energy(u, u);
  EXPECT_GT(std::abs(te - fe) / std::max(std::abs(te), std::abs(fe)), 1e-6);
}

TEST(PowerBalance, Examples) {
  const double dt = 1e-3;
  const auto one = Signal::constant(1.0, dt, 1.0);
  const auto half_t = Signal::sample([](double t) { return t / 2; }, dt, 1.0);
  const auto zero = Signal::constant(0.0, dt, 1.0);
  const auto r1 = power_balance_residual(one, one, half_t, half_t);
  for (double r : r1.values()) EXPECT_NEAR(r, 0.0, 1e-9);
  const auto r2 = power_balance_residual(one, one, zero, zero);
  for (double r : r2.values()) EXPECT_NEAR(r, 1.0, 1e-12);
  const auto e = expo(1.0);
  const auto D = Signal::sample([](double t) { return (1 - std::exp(-2 * t)) / 2; }, dt, 1.0);
  const auto r3 = power_balance_residual(e, e, zero, D);
  for (double r : r3.values()) EXPECT_NEAR(r, 0.0, 1e-5);
}

TEST(EnergyBalance, Examples) {
  const double dt = 1e-3;
  const auto one = Signal::constant(1.0, dt, 1.0);
  const auto half_t = Signal::sample([](double t) { return t / 2; }, dt, 1.0);
  const auto zero = Signal::constant(0.0, dt, 1.0);
  EXPECT_NEAR(energy_balance_residual(one, one, half_t, half_t, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(energy_balance_residual(one, one, zero, zero, 0.7), 0.7, 1e-12);
  const auto e = expo(1.0);
  const auto D = Signal::sample([](double t) { return (1 - std::exp(-2 * t)) / 2; }, dt, 1.0);
  EXPECT_NEAR(energy_balance_residual(e, e, zero, D, 1.0), 0.0, 1e-6);
}

TEST(Taxonomy, UnitProduct) {
  const auto one = Signal::constant(1.0, 1e-3, 1.0);
  const auto v = classify_taxonomy(one, one);
  EXPECT_TRUE(v.has(EnergyLabel::kWeaklyStrictlyPassive));
  EXPECT_TRUE(v.has(EnergyLabel::kStronglyStrictlyPassive));
  EXPECT_TRUE(v.has(EnergyLabel::kPopovSatisfied));
  ASSERT_TRUE(v.beta_s);
  EXPECT_NEAR(*v.beta_s, 1.0, 1e-12);
  EXPECT_EQ(v.gamma0_sq, 0.0);
}

TEST(Taxonomy, NegativeProduct) {
  const auto one = Signal::constant(1.0, 1e-3, 1.0);
  const auto minus = Signal::constant(-1.0, 1e-3, 1.0);
  const auto v = classify_taxonomy(one, minus);
  EXPECT_FALSE(v.has(EnergyLabel::kWeaklyPassive));
  EXPECT_TRUE(v.has(EnergyLabel::kPopovSatisfied));
  EXPECT_NEAR(v.gamma0_sq, 1.0, 1e-12);
}

TEST(Taxonomy, ConservativeAndPassive) {
  const double dt = 1e-3;
  const auto u = Signal::sample([](double t) { return std::exp(-t); }, dt, 2.0);
  const auto S = Signal::constant(3.0, dt, 2.0);
  const auto D = Signal::sample([](double t) { return (1 - std::exp(-2 * t)) / 2; }, dt, 2.0);
  const auto v = classify_taxonomy(u, u, S, D);
  EXPECT_TRUE(v.has(EnergyLabel::kConservative));
  EXPECT_TRUE(v.has(EnergyLabel::kPassive));
  EXPECT_TRUE(v.has(EnergyLabel::kPopovSatisfied));
  EXPECT_EQ(v.beta, 0.0);
  ASSERT_TRUE(v.residual_max);
  EXPECT_LT(*v.residual_max, 1e-5);
}

TEST(Taxonomy, Regenerative) {
  const double dt = 1e-3;
  const auto z = Signal::constant(0.0, dt, 2.0);
  const auto D = Signal::sample([](double t) { return 2.0 * std::exp(-t); }, dt, 2.0);
  const auto v = classify_taxonomy(z, z, z, D);
  EXPECT_TRUE(v.has(EnergyLabel::kRegenerative));
  EXPECT_FALSE(v.has(EnergyLabel::kPassive));
}

TEST(Taxonomy, StrictPassivityToleratesIsolatedZeros) {
  const double dt = 1e-2;
  // D' = (t-1)^2 vanishes only at t = 1.
  const auto D = Signal::sample([](double t) { return std::pow(t - 1, 3) / 3; }, dt, 2.0);
  const auto z = Signal::constant(0.0, dt, 2.0);
  EXPECT_TRUE(classify_taxonomy(z, z, std::nullopt, D).has(EnergyLabel::kStrictlyPassive));
  const auto flat = Signal::constant(1.0, dt, 2.0);
  EXPECT_FALSE(classify_taxonomy(z, z, std::nullopt, flat).has(EnergyLabel::kStrictlyPassive));
}

TEST(Taxonomy, Inclusions) {
  const double dt = 1e-3;
  const auto u = Signal::sample([](double t) { return std::sin(5 * t); }, dt, 3.0);
  for (double a : {-1.0, 0.0, 0.5, 2.0}) {
    const auto y = Signal::sample([a](double t) { return a * std::sin(5 * t) + 0.3 * std::cos(5 * t); }, dt, 3.0);
    const auto v = classify_taxonomy(u, y);
    if (v.has(EnergyLabel::kStronglyStrictlyPassive)) { EXPECT_TRUE(v.has(EnergyLabel::kWeaklyStrictlyPassive)); }
    if (v.has(EnergyLabel::kWeaklyStrictlyPassive)) { EXPECT_TRUE(v.has(EnergyLabel::kWeaklyPassive)); }
    if (v.has(EnergyLabel::kWeaklyPassive)) { EXPECT_TRUE(v.has(EnergyLabel::kPopovSatisfied)); }
  }
}

TEST(Popov, Examples) {
  const double dt = 1e-3;
  const auto y = Signal::sample([](double t) { return std::sin(3 * t) - 0.2; }, dt, 5.0);
  std::vector<double> cube(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) cube[k] = std::pow(y[k], 3);
  EXPECT_EQ(popov_audit(Signal(dt, cube), y).gamma0_sq, 0.0);
  const auto e = expo(30.0);
  std::vector<double> neg(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) neg[k] = -e[k];
  const auto a = popov_audit(Signal(dt, neg), e);
  EXPECT_NEAR(a.gamma0_sq, 0.5, 1e-6);
  EXPECT_TRUE(a.finite_horizon_estimate);
  EXPECT_EQ(popov_audit(Signal::constant(0.0, dt, 5.0), y).gamma0_sq, 0.0);
}

TEST(InputIntegral, Examples) {
  const double dt = 1e-3;
  const auto one = Signal::constant(1.0, dt, 1.0);
  const auto minus = Signal::constant(-1.0, dt, 1.0);
  EXPECT_NEAR(input_integral(one, false).values().back(), 1.0, 1e-12);
  EXPECT_NEAR(input_integral(one, true).values().back(), 1.0, 1e-12);
  EXPECT_NEAR(input_integral(minus, false).values().back(), -1.0, 1e-12);
  EXPECT_NEAR(input_integral(minus, true).values().back(), 1.0, 1e-12);
  const auto d = input_integral(expo(2.0), false);
  for (std::size_t k = 0; k < d.size(); k += 101) EXPECT_NEAR(d[k], 1 - std::exp(-d.time(k)), 1e-7);
}

}  // namespace
}  // namespace hyperstab
