#ifndef QUASIMODE_CLI_COMMANDS_HPP
#define QUASIMODE_CLI_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "quasimode/bath.hpp"

// Subcommand implementations behind the `quasimode` executable. Each
// returns the process exit code and writes only to the streams it is given.

namespace quasimode::cli {

enum ExitCode : int {
  kOk = 0,
  kPropertyFailure = 1,
  kInputError = 2,
  kNumericalFailure = 3,
};

struct SweepConfig {
  std::string params_path;
  std::string variable = "cooperativity_alpha"; ///< cooperativity_alpha | nu | power
  double start = 0.0;
  double stop = 5.0;
  std::size_t n_points = 101;
  std::vector<std::string> outputs; ///< empty selects every column
  double eta_conv = 1.0;            ///< amplitude^2 per unit power for the power sweep
};

/// Columns available to the sweep, in output order.
const std::vector<std::string>& sweep_columns();

int cmd_sweep(const SweepConfig& config, std::ostream& out, std::ostream& err);

struct ValidateOptions {
  std::uint64_t seed = 1;
  std::size_t n_trials = 100;
  std::size_t n_frequencies = 1000;
  bool inject_fault = false; ///< breaks the Hermiticity of one oracle coupling
};

struct ValidationCheck {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  nlohmann::json failing_case; ///< params (+ nu) of the worst case when failed
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool passed() const;
};

ValidationReport run_validation(const ValidateOptions& options);
void write_report(std::ostream& out, const ValidateOptions& options, const ValidationReport& report);

int cmd_validate(const ValidateOptions& options, std::ostream& out, std::ostream& err);

struct FitOptions {
  std::string data_path;
  std::string regime = "low"; ///< low | high
  std::optional<double> q2;
  std::optional<std::string> low_fit_path;
  std::optional<double> breakpoint_power; ///< P0
  bool general = false;                   ///< three-parameter high-power counter model
  bool curve = false;
};

/// JSON report goes to `out`; with `curve` set, the model-prediction CSV
/// goes to `curve_out`.
int cmd_fit(const FitOptions& options, std::ostream& out, std::ostream& curve_out, std::ostream& err);

struct BathOptions {
  BathSpec spec;                    ///< n_modes is taken from `n_modes`
  std::vector<std::size_t> n_modes{1000, 10000, 100000};
  double nu = 0.0;
};

int cmd_bath(const BathOptions& options, std::ostream& out, std::ostream& err);

} // namespace quasimode::cli

#endif
