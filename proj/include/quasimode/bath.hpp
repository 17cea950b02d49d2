#ifndef QUASIMODE_BATH_HPP
#define QUASIMODE_BATH_HPP

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace quasimode {

/// Flat band of bulk mechanical modes b_k coupled to the optical beat note
/// (lambda_k) and to a- (mu_k). Density of states and couplings are constant
/// over [band_center - band_halfwidth, band_center + band_halfwidth].
struct BathSpec {
  double rho = 0.0;            ///< modes per unit angular frequency
  double lambda_k = 0.0;
  double mu_k = 0.0;
  double eta_th = 0.0;         ///< thermalisation rate of each b_k
  double band_center = 0.0;
  double band_halfwidth = 0.0;
  std::size_t n_modes = 0;     ///< discretisation count
  double alpha = 0.0;          ///< pump amplitude
};

/// Throws std::invalid_argument unless rho, eta, W > 0, N >= 2 and the
/// couplings and pump are non-negative.
void validate(const BathSpec& spec);

/// Midpoint-rule spacing 2W/N. The discrete sum tracks the continuum only
/// when this is much smaller than eta_th.
double mode_spacing(const BathSpec& spec);

enum class CouplingProduct { LambdaSquared, MuSquared, LambdaMu };

struct BathSum {
  std::complex<double> value;
  bool outside_band = false; ///< nu outside the band; the real part is suppressed
  bool undersampled = false; ///< spacing >= eta_th
};

/// sum_k rho*dw * c_k^2 / (i (w_k - nu) + eta/2) over N midpoint nodes.
/// The real part tends to pi rho c^2 as N -> inf and W/eta -> inf.
BathSum discrete_bath_sum(const BathSpec& spec, double nu, CouplingProduct product);

/// Exact N -> inf limit of discrete_bath_sum for the finite band:
///   Re = rho c^2 [atan(2(b - nu)/eta) - atan(2(a - nu)/eta)]
///   Im = (rho c^2 / 2) ln(((nu - a)^2 + eta^2/4) / ((b - nu)^2 + eta^2/4))
std::complex<double> band_integral(const BathSpec& spec, double nu, CouplingProduct product);

/// Continuum-limit rates after eliminating the band.
struct QuasimodeRates {
  double Lambda;        ///< 2 pi alpha^2 rho lambda^2, extra damping of c
  double gamma_a_minus; ///< 2 pi rho mu^2, back-scatter damping of a-
  double chi_cross;     ///< 2 pi lambda mu rho; the c/a- cross damping is alpha * chi_cross
  double pv_shift;      ///< alpha^2 rho lambda^2 ln|(W + d)/(W - d)|, d = nu - center
};

QuasimodeRates quasimode_reduction(const BathSpec& spec, double nu);

/// Rank-1 damping form on (c, a-):
///   [[Lambda, alpha chi], [alpha chi, gamma_a-]] with (alpha chi)^2 = Lambda gamma_a-.
Eigen::Matrix2d induced_damping_matrix(const BathSpec& spec, double nu);

/// Bath thermalisation rate pi / rho that maps the band onto one quasi-mode.
double eta_correspondence(double rho);

/// Quasi-mode coupling g for which the quasi-mode model reproduces the
/// band-induced optical damping: 4 alpha^2 g^2 / Gamma = Lambda.
double matched_quasimode_coupling(const BathSpec& spec, double Gamma);

} // namespace quasimode

#endif
