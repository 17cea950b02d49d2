#ifndef QUASIMODE_RESPONSE_HPP
#define QUASIMODE_RESPONSE_HPP

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quasimode/model.hpp"

// Generic linear-response oracle. Nothing in here knows about the analytic
// expressions in closedform.hpp; everything is obtained from LU solves of
// the coefficient matrix A(nu).

namespace quasimode {

/// Raised when A(nu), or an elimination block of it, is numerically
/// singular. The message names the block and its reciprocal condition
/// estimate.
class SingularSystemError : public std::runtime_error {
public:
  SingularSystemError(const std::string& what, double rcond)
      : std::runtime_error(what), rcond_(rcond) {}
  double rcond() const { return rcond_; }

private:
  double rcond_;
};

/// chi(nu) = A(nu)^-1, so that x = chi(nu) * diag(sqrt(rates)) * x_in.
Eigen::MatrixXcd susceptibility_matrix(const DynamicalMatrix& m, double nu);

struct InputCoefficient {
  ModeIndex input;
  std::complex<double> coeff;
};

struct EffectiveResponse {
  double nu = 0.0;
  std::complex<double> chi_inv_eff;
  double linewidth = 0.0; ///< 2 Re(chi_inv_eff)
  double shift = 0.0;     ///< Im(chi_inv_eff) + (nu - w_mode)
  std::vector<InputCoefficient> input_coeffs;

  std::complex<double> coeff(ModeIndex input) const;
};

/// Schur-complement reduction of A(nu) onto one mode. The eliminated
/// scalar equation is chi_inv_eff * x_mode = sum_j c_j * x_in_j.
EffectiveResponse effective_inverse_susceptibility(const DynamicalMatrix& m, ModeIndex mode, double nu);

/// Same reduction on an explicit coefficient matrix; `target` indexes the
/// kept row. Used directly by the fault-injection path of the validator.
struct Elimination {
  std::complex<double> schur;
  Eigen::VectorXcd coeffs; ///< per input, already scaled by sqrt(rate)
};
Elimination eliminate(const Eigen::MatrixXcd& a, const Eigen::VectorXd& input_rates, Eigen::Index target);

/// Complex resonance frequencies: the nu at which A(nu) is singular, i.e.
/// the eigenvalues of W + V - i K/2. Only defined for systems without
/// quasi-modes (their rows carry no frequency); throws std::invalid_argument
/// otherwise. Sorted by descending real part, then descending imaginary part.
///
/// Near an exceptional point the eigenvalues of a double-precision matrix
/// are only accurate to ~sqrt(eps); Extended runs the eigensolver in 50
/// significant digits on the same (double) matrix entries.
enum class PolePrecision { Double, Extended };
std::vector<std::complex<double>> resonance_poles(const DynamicalMatrix& m,
                                                  PolePrecision precision = PolePrecision::Double);

using TemperatureMap = std::map<ModeIndex, double>;

/// Bath temperatures of the four mechanical inputs; optical inputs are cold.
TemperatureMap mechanical_temperatures(const SystemParams& p);

/// T_eff = (1 / linewidth) * sum_j |c_j|^2 T_j with optical inputs at zero
/// temperature. Throws std::invalid_argument if a temperature is negative
/// or a mechanical input of `m` has no temperature.
double effective_temperature(const DynamicalMatrix& m, ModeIndex mode, double nu, const TemperatureMap& temps);

/// n evenly spaced points over [lo, hi], endpoints included.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

/// 2001 points over [omega_m - 5 kappa, omega_m + 5 kappa].
std::vector<double> default_grid(const SystemParams& p, std::size_t n = 2001);

} // namespace quasimode

#endif
