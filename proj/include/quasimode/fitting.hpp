#ifndef QUASIMODE_FITTING_HPP
#define QUASIMODE_FITTING_HPP

#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "quasimode/closedform.hpp"
#include "quasimode/params.hpp"

// Power-vs-linewidth fitting in laboratory units: pump powers are
// detuning-corrected powers in uW, linewidths are in kHz.

namespace quasimode {

enum class FitModel {
  CoLinear,           ///< y = p0 + p1 x, co-propagating phonon
  CounterLowLinear,   ///< y = q0 + q1 x, counter-propagating phonon below P0
  CounterHighInverse, ///< y = q2 + q3 / x with q2 fixed, counter-propagating above P0
  CounterHighGeneral, ///< y = q2 + q3 / (q4 + x), all free
};

std::string_view model_id(FitModel m);

struct FitRow {
  Direction direction;
  double power;     ///< uW
  double linewidth; ///< kHz
  std::optional<double> weight; ///< inverse variance; 1 when absent
};

struct FitDataset {
  std::vector<FitRow> rows;

  /// Rows of one direction with power in [min_power, max_power).
  FitDataset select(Direction d, double min_power = -std::numeric_limits<double>::infinity(),
                    double max_power = std::numeric_limits<double>::infinity()) const;
};

/// Malformed CSV or a dataset that violates the row invariants.
class FitInputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Normal equations without a unique solution (e.g. all powers equal).
class SingularFitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Reads `direction,power_uW,linewidth_kHz[,weight]` (header required,
/// direction is `+` or `-`).
FitDataset read_fit_csv(std::istream& in);
FitDataset read_fit_csv_file(const std::string& path);
void write_fit_csv(std::ostream& out, const FitDataset& data);

struct NamedValue {
  std::string name;
  double value;
};

struct FitResult {
  std::string model_id;
  std::vector<NamedValue> params;
  std::vector<NamedValue> two_sigma;
  std::vector<NamedValue> fixed; ///< held constants such as q2, q4
  double residual_norm = 0.0;    ///< sqrt(sum w r^2)
  std::size_t n_points = 0;
  std::size_t dof = 0;           ///< n_points - free parameters; two_sigma is 0 when dof == 0
  std::vector<std::string> warnings;

  double param(std::string_view name) const;
  double error(std::string_view name) const;
  /// Model prediction at power x.
  double predict(double x) const;
};

void to_json(nlohmann::json& j, const FitResult& r);
void from_json(const nlohmann::json& j, FitResult& r);

/// Weighted least squares for y = c0 + c1 x. `model` must be CoLinear or
/// CounterLowLinear and only selects the parameter names. Uncertainties are
/// 2 sqrt(diag(s^2 (X^T W X)^-1)) with s^2 = sum w r^2 / (n - 2).
FitResult fit_linear(const FitDataset& data, FitModel model = FitModel::CoLinear);

/// One-parameter fit of y = q2 + q3 / x with q2 held fixed:
///   q3 = sum w (y - q2)/x / sum w/x^2.
/// Throws FitInputError for any x <= 0.
FitResult fit_high_power_counter(const FitDataset& data, double q2_fixed);

/// Three-parameter fit of y = q2 + q3 / (q4 + x), q4 >= 0, by variable
/// projection over q4. The parameters are strongly correlated on realistic
/// data; a warning is attached when any |correlation| exceeds 0.9.
FitResult fit_high_power_counter_general(const FitDataset& data);

/// q2 = q0 + P0 q1 from a counter_low_linear fit and the breakpoint power.
double q2_from_low_fit(const FitResult& low, double breakpoint_power);

/// beta^2 = alpha^2 / r for alpha^2 <= alpha0^2, otherwise s alpha0^2.
double piecewise_beta_squared(double alpha_sq, double alpha0_sq, double r, double s);

/// Conversion from detuning-corrected pump power to amplitudes and the
/// counter-pump schedule. alpha0_sq = eta_conv * P0.
struct PumpSchedule {
  double eta_conv = 1.0; ///< amplitude^2 per uW
  double alpha0_sq = std::numeric_limits<double>::infinity();
  double r = 1.0;
  double s = 0.0;
};

struct LinewidthPrediction {
  double power;
  double gamma_plus;
  double gamma_minus;
};

/// Resonant linewidths at each co-propagating power, with rates in `phys`
/// expressed in kHz.
std::vector<LinewidthPrediction> predict_linewidths(const SystemParams& phys, const PumpSchedule& schedule,
                                                    std::span<const double> powers);

/// Slope of the co-propagating linewidth, 4 eta lambda^2 / kappa.
double p1_from_physical(const SystemParams& phys, double eta_conv);
/// Zero-pump linewidth gamma + 4 V0^2 / Gamma.
double gamma_eff(const SystemParams& phys);
/// High-power counter coefficient kappa V0^2 / (eta g^2).
double q3_from_physical(const SystemParams& phys, double eta_conv);
/// Offset of the general high-power model, kappa Gamma / (4 eta g^2).
double q4_from_physical(const SystemParams& phys, double eta_conv);

} // namespace quasimode

#endif
