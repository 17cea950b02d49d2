#include "quasimode/closedform.hpp"

#include <cmath>

namespace quasimode {

namespace {

using namespace std::complex_literals;

// Same-direction and opposite-direction pump amplitudes.
struct Pumps {
  double same;
  double other;
};

Pumps pumps(const SystemParams& p, Direction d) {
  return d == Direction::Plus ? Pumps{p.alpha, p.beta} : Pumps{p.beta, p.alpha};
}

double sq(double x) { return x * x; }

// Cooperativity of the opposite pump, which dresses the quasi-mode.
double other_cooperativity(const SystemParams& p, double other) {
  return 4.0 * sq(other) * sq(p.g_c) / (p.Gamma * p.kappa);
}

} // namespace

char to_char(Direction d) { return d == Direction::Plus ? '+' : '-'; }

std::complex<double> chi_inv(const SystemParams& p, Direction d, double nu) {
  const auto [same, other] = pumps(p, d);
  const double x = nu + p.delta;
  const std::complex<double> cavity = -1i * x + p.kappa / 2.0;
  const std::complex<double> kappa_dressed = cavity + 2.0 * sq(other) * sq(p.g_c) / p.Gamma;
  return -1i * (nu - p.omega_m) + p.gamma / 2.0 + sq(same) * sq(p.lambda_c) / cavity +
         (2.0 * sq(p.V0) / p.Gamma) * (1.0 - 2.0 * sq(other) * sq(p.g_c) / (p.Gamma * kappa_dressed));
}

double linewidth(const SystemParams& p, Direction d, double nu) {
  const auto [same, other] = pumps(p, d);
  const double x = nu + p.delta;
  const double c = other_cooperativity(p, other);
  const double optical = sq(same) * sq(p.lambda_c) * p.kappa / (sq(x) + sq(p.kappa) / 4.0);
  const double dressed = (1.0 + c) * p.kappa / 2.0;
  const double scatter =
      (4.0 * sq(p.V0) / p.Gamma) * (1.0 - (2.0 * sq(other) * sq(p.g_c) / p.Gamma) * dressed / (sq(x) + sq(dressed)));
  return p.gamma + optical + scatter;
}

double linewidth_at_resonance(const SystemParams& p, Direction d) {
  const auto [same, other] = pumps(p, d);
  return p.gamma + 4.0 * sq(same) * sq(p.lambda_c) / p.kappa +
         (4.0 * sq(p.V0) / p.Gamma) / (1.0 + other_cooperativity(p, other));
}

double optical_shift_term(const SystemParams& p, Direction d, double nu) {
  const double same = pumps(p, d).same;
  const double x = nu + p.delta;
  return sq(same) * sq(p.lambda_c) * x / (sq(x) + sq(p.kappa) / 4.0);
}

double frequency_shift(const SystemParams& p, Direction d, double nu) {
  const double other = pumps(p, d).other;
  const double x = nu + p.delta;
  const double c = other_cooperativity(p, other);
  const double scatter = (2.0 * sq(p.V0) / p.Gamma) * (2.0 * sq(other) * sq(p.g_c) / p.Gamma) * x /
                         (sq(x) + sq(1.0 + c) * sq(p.kappa) / 4.0);
  return optical_shift_term(p, d, nu) - scatter;
}

double effective_temperature_closed(const SystemParams& p, Direction d, double nu) {
  const double other = pumps(p, d).other;
  const double t_a = d == Direction::Plus ? p.T_a_plus : p.T_a_minus;
  const double t_b = d == Direction::Plus ? p.T_b_minus : p.T_b_plus;
  const double x = nu + p.delta;
  const double filter =
      (sq(x) + sq(p.kappa) / 4.0) / (sq(x) + sq(p.kappa / 2.0 + 2.0 * sq(other) * sq(p.g_c) / p.Gamma));
  return (p.gamma * t_a + (4.0 * sq(p.V0) / p.Gamma) * filter * t_b) / linewidth(p, d, nu);
}

double v1_damping_difference(const SystemParams& p) {
  return 2.0 * std::abs(sq(p.alpha) - sq(p.beta)) * sq(p.lambda_c) / p.kappa;
}

PolePair v1_poles(const SystemParams& p) {
  const double gamma_sum = p.gamma + 2.0 * (sq(p.alpha) + sq(p.beta)) * sq(p.lambda_c) / p.kappa;
  const double dgamma = v1_damping_difference(p);
  const std::complex<double> root = std::sqrt(std::complex<double>(sq(p.V1) - sq(dgamma) / 4.0, 0.0));
  const std::complex<double> centre = p.omega_m - 1i * gamma_sum / 2.0;
  return {centre + root, centre - root};
}

} // namespace quasimode
