#ifndef QUASIMODE_PARAMS_HPP
#define QUASIMODE_PARAMS_HPP

#include <random>
#include <string>
#include <vector>

#include <json.hpp>

namespace quasimode {

/// Effective-model parameters in rescaled angular units.
///
/// All rates and frequencies share one (arbitrary) unit; pump amplitudes are
/// dimensionless photon-number amplitudes and temperatures share their own
/// unit. Couplings are real and non-negative.
struct SystemParams {
  double delta = 0.0;    ///< optical detuning (negative for red-detuned pumping)
  double omega_m = 0.0;  ///< mechanical frequency of the high-Q pair a+/a-
  double kappa = 0.0;    ///< optical linewidth
  double gamma = 0.0;    ///< intrinsic linewidth of a+/a-
  double Gamma = 0.0;    ///< quasi-mode linewidth of b+/b-
  double lambda_c = 0.0; ///< single-photon coupling to a+/a-
  double g_c = 0.0;      ///< single-photon coupling to b+/b-
  double V0 = 0.0;       ///< cross-type back-scattering a+ <-> b-, a- <-> b+
  double V1 = 0.0;       ///< same-type back-scattering a+ <-> a-, b+ <-> b-
  double alpha = 0.0;    ///< co-propagating pump amplitude
  double beta = 0.0;     ///< counter-propagating pump amplitude
  double T_a_plus = 0.0;
  double T_a_minus = 0.0;
  double T_b_plus = 0.0;
  double T_b_minus = 0.0;

  bool operator==(const SystemParams&) const = default;
};

/// Throws std::invalid_argument when a hard invariant is violated
/// (non-positive kappa/gamma/Gamma, negative couplings, pumps or
/// temperatures, non-finite values).
void validate(const SystemParams& p);

/// Soft regime checks: quasi-mode validity (Gamma >= 10 gamma) and the
/// rotating-wave regime (delta < 0, |delta| >= 5 kappa). Empty when both hold.
std::vector<std::string> regime_warnings(const SystemParams& p);

/// Rescaled parameter set used for the cooperativity sweeps:
/// omega_m = 1, gamma = 1e-3, kappa = 0.1, lambda = 1e-3, g = 5e-3,
/// Gamma = 0.05, V0 = 0.02, delta = -omega_m, no pumps, unit temperatures.
SystemParams reference_params();

/// Draws a random parameter set inside the passive, resolved-sideband
/// regime. Used by property checks; V1 is always zero.
SystemParams random_params(std::mt19937_64& rng);

void to_json(nlohmann::json& j, const SystemParams& p);
/// Requires every field and rejects unknown keys.
void from_json(const nlohmann::json& j, SystemParams& p);

SystemParams load_params(const std::string& path);

} // namespace quasimode

#endif
