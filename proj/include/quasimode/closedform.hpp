#ifndef QUASIMODE_CLOSEDFORM_HPP
#define QUASIMODE_CLOSEDFORM_HPP

#include <complex>

#include "quasimode/params.hpp"

// Analytic single-mode results for the loop-cut systems. Direction::Minus
// describes a- (counter-propagating phonon, suppressed through b+ by the
// alpha pump); Direction::Plus is the mirror image with alpha <-> beta.

namespace quasimode {

enum class Direction { Plus, Minus };

char to_char(Direction d);

/// Inverse susceptibility of a+/a-:
///   -i(nu - w_m) + gamma/2 + p^2 lambda^2 / (-i(nu + delta) + kappa/2)
///     + (2 V0^2 / Gamma) (1 - 2 q^2 g^2 / (Gamma kappa~)),
/// kappa~ = -i(nu + delta) + kappa/2 + 2 q^2 g^2 / Gamma,
/// where p is the pump in the same direction and q the opposite one.
std::complex<double> chi_inv(const SystemParams& p, Direction d, double nu);

/// Linewidth 2 Re(chi_inv) written out as a sum of Lorentzians.
double linewidth(const SystemParams& p, Direction d, double nu);

/// Linewidth at nu = -delta: gamma + 4 p^2 lambda^2 / kappa + (4 V0^2/Gamma) / (1 + C_q).
double linewidth_at_resonance(const SystemParams& p, Direction d);

/// Optically induced resonance displacement Im(chi_inv) + (nu - w_m).
/// The V0 term enters with a negative sign, as required by chi_inv.
double frequency_shift(const SystemParams& p, Direction d, double nu);

/// Direct optomechanical part of the shift, p^2 lambda^2 x / (x^2 + kappa^2/4)
/// with x = nu + delta; its maximum p^2 lambda^2 / kappa sits at x = kappa/2.
double optical_shift_term(const SystemParams& p, Direction d, double nu);

/// Effective temperature with cold optical inputs:
///   [gamma T_a + (4 V0^2/Gamma) |1 - 2 q^2 g^2/(Gamma kappa~)|^2 T_b] / linewidth(nu).
/// Uses (T_a-, T_b+) for Minus and (T_a+, T_b-) for Plus.
double effective_temperature_closed(const SystemParams& p, Direction d, double nu);

struct PolePair {
  std::complex<double> plus;
  std::complex<double> minus;
};

/// Normal-mode poles of the a+/a- pair coupled by V1 once both optical
/// modes are eliminated (V0 ignored):
///   w_pm = w_m - i gamma_sum/2 +- sqrt(V1^2 - dgamma^2/4)
/// with gamma_sum = gamma + 2 (alpha^2 + beta^2) lambda^2 / kappa and
/// dgamma = 2 |alpha^2 - beta^2| lambda^2 / kappa, half the linewidth
/// difference of a+ and a-. Principal square root.
PolePair v1_poles(const SystemParams& p);

/// Linewidth difference parameter dgamma used by v1_poles.
double v1_damping_difference(const SystemParams& p);

} // namespace quasimode

#endif
