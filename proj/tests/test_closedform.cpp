#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "quasimode/closedform.hpp"

using namespace quasimode;
using namespace std::complex_literals;

namespace {

SystemParams pumped(double alpha_sq, double beta_sq) {
  auto p = reference_params();
  p.alpha = std::sqrt(alpha_sq);
  p.beta = std::sqrt(beta_sq);
  return p;
}

} // namespace

// Reference-set numbers worked by hand:
//   gamma = 1e-3, 4 V0^2 / Gamma = 0.032, 4 lambda^2 / kappa = 4e-5 per alpha^2,
//   C = 0.02 per alpha^2.
TEST(ClosedForm, ResonantLinewidthsAtReferenceParameters) {
  const double nu0 = 1.0;
  const auto unpumped = pumped(0.0, 0.0);
  EXPECT_NEAR(linewidth(unpumped, Direction::Plus, nu0), 0.033, 1e-15);
  EXPECT_NEAR(linewidth(unpumped, Direction::Minus, nu0), 0.033, 1e-15);

  const auto p = pumped(50.0, 0.0);
  // a+: 0.001 + 0.002 + 0.032; a-: 0.001 + 0.032 / (1 + 1).
  EXPECT_NEAR(linewidth(p, Direction::Plus, nu0), 0.035, 1e-15);
  EXPECT_NEAR(linewidth(p, Direction::Minus, nu0), 0.017, 1e-15);
  EXPECT_NEAR(linewidth_at_resonance(p, Direction::Plus), 0.035, 1e-15);
  EXPECT_NEAR(linewidth_at_resonance(p, Direction::Minus), 0.017, 1e-15);
}

TEST(ClosedForm, LinewidthIsTwiceRealPart) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 50; ++k) {
    const auto p = random_params(rng);
    for (double off : {-0.2, -0.01, 0.0, 0.013, 0.3}) {
      const double nu = -p.delta + off;
      for (auto d : {Direction::Plus, Direction::Minus}) {
        const double twice_re = 2.0 * chi_inv(p, d, nu).real();
        EXPECT_NEAR(linewidth(p, d, nu), twice_re, 1e-12 * std::abs(twice_re));
      }
    }
  }
}

TEST(ClosedForm, ShiftIsImaginaryPartPlusDetuning) {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 50; ++k) {
    const auto p = random_params(rng);
    const double nu = p.omega_m + 0.017;
    for (auto d : {Direction::Plus, Direction::Minus}) {
      const double expected = chi_inv(p, d, nu).imag() + (nu - p.omega_m);
      EXPECT_NEAR(frequency_shift(p, d, nu), expected, 1e-15);
    }
  }
}

TEST(ClosedForm, StrongCounterPumpRemovesScatteringLoss) {
  // C_alpha -> inf leaves only gamma for a- on resonance; at C = 1e7 the
  // remainder is 0.032 / (1 + 1e7).
  const auto p = pumped(5e8, 0.0);
  EXPECT_NEAR(linewidth_at_resonance(p, Direction::Minus), 0.001, 4e-9);
}

TEST(ClosedForm, ShiftVanishesOnResonance) {
  const auto p = pumped(50.0, 12.0);
  EXPECT_EQ(frequency_shift(p, Direction::Plus, 1.0), 0.0);
  EXPECT_EQ(frequency_shift(p, Direction::Minus, 1.0), 0.0);
}

TEST(ClosedForm, OpticalShiftPeak) {
  const auto p = pumped(50.0, 0.0);
  // alpha^2 lambda^2 / kappa = 50e-6 / 0.1
  EXPECT_NEAR(optical_shift_term(p, Direction::Plus, 1.0 + 0.05), 5e-4, 1e-18);
  EXPECT_LT(optical_shift_term(p, Direction::Plus, 1.0 + 0.049), 5e-4);
  EXPECT_LT(optical_shift_term(p, Direction::Plus, 1.0 + 0.051), 5e-4);
  EXPECT_EQ(optical_shift_term(p, Direction::Minus, 1.05), 0.0);
}

TEST(ClosedForm, ScatteringShiftPullsAgainstOpticalShift) {
  // For a- with C_alpha = C and beta = 0, only the scattering term is left:
  //   -(2 V0^2 / Gamma) * C / (1 + (1 + C)^2) at nu + delta = kappa/2.
  for (double c : {0.5, 1.0, 3.0}) {
    const auto p = pumped(50.0 * c, 0.0);
    const double expected = -(2.0 * 0.02 * 0.02 / 0.05) * c / (1.0 + (1.0 + c) * (1.0 + c));
    EXPECT_NEAR(frequency_shift(p, Direction::Minus, 1.05), expected, 1e-15);
  }
}

TEST(ClosedForm, EffectiveTemperatures) {
  const auto p = pumped(50.0, 0.0);
  // a-: (gamma + 0.032 / 4) / 0.017 = 0.009 / 0.017
  EXPECT_NEAR(effective_temperature_closed(p, Direction::Minus, 1.0), 9.0 / 17.0, 1e-14);
  // a+: optical damping is cold, the scattering path is unfiltered.
  EXPECT_NEAR(effective_temperature_closed(p, Direction::Plus, 1.0), 0.033 / 0.035, 1e-14);
  // Unpumped and equal baths: the mode sits at the bath temperature.
  auto q = pumped(0.0, 0.0);
  q.T_a_plus = q.T_a_minus = q.T_b_plus = q.T_b_minus = 2.5;
  EXPECT_NEAR(effective_temperature_closed(q, Direction::Minus, 1.02), 2.5, 1e-14);
  // Only the intrinsic bath hot: T = gamma T_a / gamma_eff.
  auto r = pumped(0.0, 0.0);
  r.T_b_plus = r.T_b_minus = 0.0;
  EXPECT_NEAR(effective_temperature_closed(r, Direction::Plus, 1.0), 0.001 / 0.033, 1e-15);
}

TEST(ClosedForm, ChiralityUnderPumpSwap) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 20; ++k) {
    auto p = random_params(rng);
    auto s = p;
    std::swap(s.alpha, s.beta);
    std::swap(s.T_a_plus, s.T_a_minus);
    std::swap(s.T_b_plus, s.T_b_minus);
    const double nu = -p.delta + 0.004;
    EXPECT_EQ(chi_inv(p, Direction::Plus, nu), chi_inv(s, Direction::Minus, nu));
    EXPECT_EQ(effective_temperature_closed(p, Direction::Minus, nu),
              effective_temperature_closed(s, Direction::Plus, nu));
  }
}

TEST(ClosedForm, LinewidthsMonotoneInCooperativity) {
  double prev_plus = 0.0, prev_minus = 1.0;
  for (int i = 0; i <= 50; ++i) {
    const auto p = pumped(50.0 * 0.1 * i, 0.0);
    const double gp = linewidth_at_resonance(p, Direction::Plus);
    const double gm = linewidth_at_resonance(p, Direction::Minus);
    EXPECT_GT(gp, prev_plus);
    EXPECT_LT(gm, prev_minus);
    EXPECT_GT(gm, p.gamma);
    prev_plus = gp;
    prev_minus = gm;
  }
}

TEST(ClosedForm, V1PolesSplitRegime) {
  auto p = pumped(0.0, 0.0);
  p.V1 = 0.02;
  // No pumps: dgamma = 0, real splitting of exactly +-V1, width gamma.
  EXPECT_EQ(v1_damping_difference(p), 0.0);
  const auto poles = v1_poles(p);
  EXPECT_EQ(poles.plus, 1.02 - 0.0005i);
  EXPECT_EQ(poles.minus, 0.98 - 0.0005i);
}

TEST(ClosedForm, V1PolesRegimes) {
  // dgamma = 2 * 50 * 1e-6 / 0.1 = 1e-3, gamma_sum = 0.001 + 1e-3.
  auto p = pumped(50.0, 0.0);
  EXPECT_NEAR(v1_damping_difference(p), 1e-3, 1e-18);

  p.V1 = 1e-3; // 2 V1 > dgamma: split real parts
  auto split = v1_poles(p);
  const double re = std::sqrt(1e-6 - 0.25e-6);
  EXPECT_NEAR(split.plus.real() - 1.0, re, 1e-15);
  EXPECT_NEAR(split.minus.real() - 1.0, -re, 1e-15);
  EXPECT_NEAR(split.plus.imag(), -1e-3, 1e-16);

  p.V1 = 5e-4; // coalescence
  auto ep = v1_poles(p);
  EXPECT_NEAR(std::abs(ep.plus - ep.minus), 0.0, 1e-11);

  p.V1 = 1e-4; // over-damped: split imaginary parts, common real part
  auto od = v1_poles(p);
  EXPECT_EQ(od.plus.real(), 1.0);
  EXPECT_EQ(od.minus.real(), 1.0);
  const double im = std::sqrt(0.25e-6 - 1e-8);
  EXPECT_NEAR(od.plus.imag(), -1e-3 + im, 1e-15);
  EXPECT_NEAR(od.minus.imag(), -1e-3 - im, 1e-15);
}
