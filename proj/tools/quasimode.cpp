// quasimode: sweeps, oracle validation, bath convergence and linewidth fits
// for the chiral-phonon coupled-mode model.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "quasimode/cli/commands.hpp"

namespace {

// Opens --out when given, otherwise writes to stdout.
class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty()) file_.open(path);
  }
  bool ok() const { return !file_.is_open() || file_.good(); }
  bool requested_but_failed(const std::string& path) const { return !path.empty() && !file_.is_open(); }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
  std::ofstream file_;
};

} // namespace

int main(int argc, char** argv) {
  using namespace quasimode::cli;

  CLI::App app{"Coupled-mode linear response and fitting for chiral phonon damping"};
  app.require_subcommand(1);
  std::string out_path;

  auto* sweep = app.add_subcommand("sweep", "emit linewidth/temperature/shift curves as CSV");
  SweepConfig sweep_cfg;
  std::string outputs;
  sweep->add_option("--config", sweep_cfg.params_path, "SystemParams JSON file")->required();
  sweep->add_option("--var", sweep_cfg.variable, "cooperativity_alpha | nu | power")->capture_default_str();
  sweep->add_option("--start", sweep_cfg.start)->capture_default_str();
  sweep->add_option("--stop", sweep_cfg.stop)->capture_default_str();
  sweep->add_option("--points", sweep_cfg.n_points)->capture_default_str();
  sweep->add_option("--outputs", outputs, "comma-separated subset of the output columns");
  sweep->add_option("--eta", sweep_cfg.eta_conv, "amplitude^2 per unit power (power sweep)")->capture_default_str();
  sweep->add_option("--out", out_path, "output file (default stdout)");

  auto* validate = app.add_subcommand("validate", "check closed forms against the matrix oracle");
  ValidateOptions val_opts;
  validate->add_option("--seed", val_opts.seed)->capture_default_str();
  validate->add_option("--trials", val_opts.n_trials)->capture_default_str();
  validate->add_option("--frequencies", val_opts.n_frequencies)->capture_default_str();
  validate->add_flag("--inject-fault", val_opts.inject_fault, "mutation canary: corrupt one oracle coupling");
  validate->add_option("--out", out_path, "output file (default stdout)");

  auto* fit = app.add_subcommand("fit", "fit power/linewidth data");
  FitOptions fit_opts;
  double q2 = 0.0, p0 = 0.0;
  std::string low_fit;
  fit->add_option("data", fit_opts.data_path, "CSV: direction,power_uW,linewidth_kHz[,weight]")->required();
  fit->add_option("--regime", fit_opts.regime, "low | high")->capture_default_str();
  auto* q2_opt = fit->add_option("--q2", q2, "fixed offset of the high-power counter model (kHz)");
  auto* p0_opt = fit->add_option("--p0", p0, "breakpoint power P0 (uW)");
  auto* low_opt = fit->add_option("--low-fit", low_fit, "low-regime JSON report used to derive q2 = q0 + P0 q1");
  fit->add_flag("--general", fit_opts.general, "free q2, q3, q4 in the high-power counter model");
  fit->add_flag("--curve", fit_opts.curve, "also emit model curves as CSV");
  fit->add_option("--out", out_path, "JSON report file (default stdout); curves go to <out>.curve.csv");

  auto* bath = app.add_subcommand("bath", "discrete bath sum convergence table");
  BathOptions bath_opts;
  bath_opts.spec = {100.0, 0.01, 0.01, 0.05, 1.0, 2.5, 0, 1.0};
  bath->add_option("--n-modes", bath_opts.n_modes, "discretisation counts")->capture_default_str()->delimiter(',');
  bath->add_option("--center", bath_opts.spec.band_center)->capture_default_str();
  bath->add_option("--halfwidth", bath_opts.spec.band_halfwidth)->capture_default_str();
  bath->add_option("--eta", bath_opts.spec.eta_th, "thermalisation rate of each bath mode")->capture_default_str();
  bath->add_option("--rho", bath_opts.spec.rho)->capture_default_str();
  bath->add_option("--lambda", bath_opts.spec.lambda_k)->capture_default_str();
  bath->add_option("--mu", bath_opts.spec.mu_k)->capture_default_str();
  bath->add_option("--alpha", bath_opts.spec.alpha)->capture_default_str();
  auto* nu_opt = bath->add_option("--nu", bath_opts.nu, "evaluation frequency (default: band centre)");
  bath->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  Output out(out_path);
  if (out.requested_but_failed(out_path)) {
    std::cerr << "error: cannot open " << out_path << " for writing\n";
    return kInputError;
  }

  if (*sweep) {
    std::string item;
    for (std::size_t start = 0; start <= outputs.size() && !outputs.empty();) {
      const auto comma = outputs.find(',', start);
      item = outputs.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!item.empty()) sweep_cfg.outputs.push_back(item);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return cmd_sweep(sweep_cfg, out.stream(), std::cerr);
  }
  if (*validate) return cmd_validate(val_opts, out.stream(), std::cerr);
  if (*fit) {
    if (*q2_opt) fit_opts.q2 = q2;
    if (*p0_opt) fit_opts.breakpoint_power = p0;
    if (*low_opt) fit_opts.low_fit_path = low_fit;
    if (out_path.empty() || !fit_opts.curve) return cmd_fit(fit_opts, out.stream(), std::cout, std::cerr);
    std::ofstream curve(out_path + ".curve.csv");
    return cmd_fit(fit_opts, out.stream(), curve, std::cerr);
  }
  if (*bath) {
    if (!*nu_opt) bath_opts.nu = bath_opts.spec.band_center;
    return cmd_bath(bath_opts, out.stream(), std::cerr);
  }
  return kInputError;
}
