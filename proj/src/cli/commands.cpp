#include "quasimode/cli/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "quasimode/closedform.hpp"
#include "quasimode/fitting.hpp"
#include "quasimode/model.hpp"
#include "quasimode/parallel.hpp"
#include "quasimode/params.hpp"
#include "quasimode/response.hpp"

namespace quasimode::cli {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double relative(std::complex<double> a, std::complex<double> b) {
  const double scale = std::abs(b);
  return scale > 0.0 ? std::abs(a - b) / scale : std::abs(a - b);
}

double relative(double a, double b) {
  const double scale = std::abs(b);
  return scale > 0.0 ? std::abs(a - b) / scale : std::abs(a - b);
}

// A parameter set with V1 exactly at the coalescence point: every rate is a
// short binary fraction so no rounding happens on either side.
SystemParams dyadic_exceptional_point(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  SystemParams q = reference_params();
  q.omega_m = std::ldexp(pick(1, 64), -pick(4, 6));
  q.kappa = std::ldexp(1.0, -pick(1, 4));
  q.lambda_c = std::ldexp(1.0, -pick(4, 8));
  q.gamma = std::ldexp(pick(1, 16), -pick(10, 14));
  q.alpha = pick(0, 8);
  q.beta = pick(0, 8);
  if (q.alpha == q.beta) q.alpha += 1.0;
  q.V1 = 0.5 * v1_damping_difference(q);
  return q;
}

} // namespace

// ---------------------------------------------------------------- sweep

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> columns{"gamma_a_plus_over_gamma", "gamma_a_minus_over_gamma",
                                                "T_plus_over_T",           "T_minus_over_T",
                                                "shift_plus",              "shift_minus"};
  return columns;
}

int cmd_sweep(const SweepConfig& config, std::ostream& out, std::ostream& err) {
  SystemParams base;
  try {
    base = load_params(config.params_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  if (config.n_points < 2 || !std::isfinite(config.start) || !std::isfinite(config.stop)) {
    err << "error: sweep needs n_points >= 2 and a finite range\n";
    return kInputError;
  }
  if (config.variable != "cooperativity_alpha" && config.variable != "nu" && config.variable != "power") {
    err << "error: unknown sweep variable '" << config.variable << "' (cooperativity_alpha | nu | power)\n";
    return kInputError;
  }
  std::vector<std::string> selected = config.outputs.empty() ? sweep_columns() : config.outputs;
  for (const auto& name : selected) {
    if (std::find(sweep_columns().begin(), sweep_columns().end(), name) == sweep_columns().end()) {
      err << "error: unknown output column '" << name << "'\n";
      return kInputError;
    }
  }
  const bool wants_temperature = std::any_of(selected.begin(), selected.end(),
                                             [](const auto& c) { return c.starts_with("T_"); });
  if (wants_temperature && (base.T_a_plus <= 0.0 || base.T_a_minus <= 0.0)) {
    err << "error: temperature ratios need T_a_plus > 0 and T_a_minus > 0\n";
    return kInputError;
  }
  if ((config.variable == "cooperativity_alpha" || config.variable == "power") && config.start < 0.0) {
    err << "error: " << config.variable << " sweep must start at >= 0\n";
    return kInputError;
  }
  if (config.variable == "cooperativity_alpha" && base.g_c <= 0.0) {
    err << "error: cooperativity sweep needs g_c > 0\n";
    return kInputError;
  }
  for (const auto& w : regime_warnings(base)) err << "warning: " << w << '\n';

  const auto xs = linear_grid(config.start, config.stop, config.n_points);
  std::vector<std::vector<double>> rows(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    SystemParams p = base;
    double nu = -p.delta;
    if (config.variable == "cooperativity_alpha") p.alpha = std::sqrt(alpha_squared_for_cooperativity(p, xs[i]));
    else if (config.variable == "power") p.alpha = std::sqrt(config.eta_conv * xs[i]);
    else nu = xs[i];

    std::vector<double> row{xs[i]};
    for (const auto& c : selected) {
      if (c == "gamma_a_plus_over_gamma") row.push_back(linewidth(p, Direction::Plus, nu) / p.gamma);
      else if (c == "gamma_a_minus_over_gamma") row.push_back(linewidth(p, Direction::Minus, nu) / p.gamma);
      else if (c == "T_plus_over_T") row.push_back(effective_temperature_closed(p, Direction::Plus, nu) / p.T_a_plus);
      else if (c == "T_minus_over_T") row.push_back(effective_temperature_closed(p, Direction::Minus, nu) / p.T_a_minus);
      else if (c == "shift_plus") row.push_back(frequency_shift(p, Direction::Plus, nu));
      else if (c == "shift_minus") row.push_back(frequency_shift(p, Direction::Minus, nu));
    }
    for (double v : row) {
      if (!std::isfinite(v)) {
        err << "error: non-finite value at x = " << fmt(xs[i]) << '\n';
        return kNumericalFailure;
      }
    }
    rows[i] = std::move(row);
  }

  out << "x";
  for (const auto& c : selected) out << ',' << c;
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << fmt(row[k]);
    out << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- validate

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

namespace {

// Running worst case of one property over all trials.
struct Tracker {
  double worst = 0.0;
  nlohmann::json where;

  void update(double deviation, const SystemParams& p, std::optional<double> nu = std::nullopt) {
    if (std::isnan(deviation)) deviation = std::numeric_limits<double>::infinity();
    if (deviation <= worst) return;
    worst = deviation;
    where = nlohmann::json{{"params", p}};
    if (nu) where["nu"] = *nu;
  }
  void merge(const Tracker& other) {
    if (other.worst > worst) *this = other;
  }
};

enum Check {
  kOracleChiInv,
  kLinewidthIdentity,
  kShiftOracle,
  kTemperatureOracle,
  kNoiseSumRule,
  kPassivity,
  kCutSwap,
  kV1Poles,
  kZeroPumpTemperature,
  kCheckCount
};

struct CheckInfo {
  const char* name;
  double tolerance;
};

constexpr CheckInfo kChecks[kCheckCount] = {
    {"oracle_chi_inv", 1e-10},       {"linewidth_2re_identity", 1e-12}, {"shift_oracle", 1e-10},
    {"temperature_oracle", 1e-10},   {"noise_sum_rule", 1e-10},         {"passivity", 0.0},
    {"cut_swap_reciprocity", 0.0},   {"v1_poles_eigenvalues", 1e-12},   {"zero_pump_temperature", 1e-12},
};

SystemParams swapped(const SystemParams& p) {
  SystemParams s = p;
  std::swap(s.alpha, s.beta);
  std::swap(s.T_a_plus, s.T_a_minus);
  std::swap(s.T_b_plus, s.T_b_minus);
  return s;
}

std::array<Tracker, kCheckCount> run_trial(const ValidateOptions& options, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  const SystemParams p = random_params(rng);
  std::array<Tracker, kCheckCount> t;

  const auto temps = mechanical_temperatures(p);
  const double t_max = std::max({p.T_a_plus, p.T_a_minus, p.T_b_plus, p.T_b_minus});
  const auto grid = linear_grid(p.omega_m - 5.0 * p.kappa, p.omega_m + 5.0 * p.kappa, options.n_frequencies);

  struct Case {
    CutTopology topology;
    ModeIndex mode;
    Direction direction;
  };
  const Case cases[] = {{CutTopology::CutB, ModeIndex::AMinus, Direction::Minus},
                        {CutTopology::CutC, ModeIndex::APlus, Direction::Plus}};

  for (const auto& c : cases) {
    const auto system = build_cut_system(p, c.topology);
    const auto mirror = build_cut_system(swapped(p), c.topology == CutTopology::CutB ? CutTopology::CutC
                                                                                       : CutTopology::CutB);
    const auto target = *system.index_of(c.mode);
    const auto b_index = *system.index_of(c.mode == ModeIndex::AMinus ? ModeIndex::BPlus : ModeIndex::BMinus);
    for (double nu : grid) {
      EffectiveResponse r = effective_inverse_susceptibility(system, c.mode, nu);
      if (options.inject_fault) {
        Eigen::MatrixXcd a = system.coefficient_matrix(nu);
        a(static_cast<Eigen::Index>(b_index), static_cast<Eigen::Index>(target)) *= -1.0;
        r.chi_inv_eff = eliminate(a, system.input_rates(), static_cast<Eigen::Index>(target)).schur;
      }
      const auto closed = chi_inv(p, c.direction, nu);
      t[kOracleChiInv].update(relative(r.chi_inv_eff, closed), p, nu);
      t[kLinewidthIdentity].update(relative(linewidth(p, c.direction, nu), 2.0 * closed.real()), p, nu);
      t[kShiftOracle].update(std::abs(frequency_shift(p, c.direction, nu) - r.shift) / std::abs(closed), p, nu);

      const double t_oracle = effective_temperature(system, c.mode, nu, temps);
      t[kTemperatureOracle].update(relative(effective_temperature_closed(p, c.direction, nu), t_oracle), p, nu);

      double noise = 0.0;
      for (const auto& in : r.input_coeffs) noise += std::norm(in.coeff);
      t[kNoiseSumRule].update(relative(noise, r.linewidth), p, nu);

      double violation = std::max(0.0, -r.linewidth);
      violation = std::max(violation, t_oracle - t_max * (1.0 + 1e-12));
      violation = std::max(violation, -t_oracle);
      t[kPassivity].update(violation, p, nu);

      const auto mirrored = effective_inverse_susceptibility(
          mirror, c.mode == ModeIndex::AMinus ? ModeIndex::APlus : ModeIndex::AMinus, nu);
      t[kCutSwap].update(std::abs(mirrored.chi_inv_eff - r.chi_inv_eff), p, nu);
    }
  }

  // V1 poles on a perturbed copy: random back-scattering strength across
  // the split, degenerate and over-damped regimes. The degenerate case is
  // an exceptional point, so it is only meaningful when the parameters sit
  // on it exactly: those draws use binary fractions.
  SystemParams q = p;
  const double regime = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
  if (regime >= 1.0 && regime < 2.0) {
    q = dyadic_exceptional_point(rng);
  } else {
    q.V1 = 0.5 * v1_damping_difference(q) * regime;
  }
  const auto closed = v1_poles(q);
  const auto eig = resonance_poles(build_v1_pair(q), PolePrecision::Extended);
  std::array<std::complex<double>, 2> expected{closed.plus, closed.minus};
  std::sort(expected.begin(), expected.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  double pole_dev = 0.0;
  for (int i = 0; i < 2; ++i) pole_dev = std::max(pole_dev, std::abs(expected[i] - eig[i]) / std::abs(eig[i]));
  t[kV1Poles].update(pole_dev, q);

  SystemParams z = p;
  z.alpha = z.beta = 0.0;
  z.T_a_plus = z.T_a_minus = z.T_b_plus = z.T_b_minus = p.T_a_plus;
  const double t_zero =
      effective_temperature(build_cut_system(z, CutTopology::CutB), ModeIndex::AMinus, -z.delta, mechanical_temperatures(z));
  t[kZeroPumpTemperature].update(relative(t_zero, z.T_a_minus), z, -z.delta);
  return t;
}

} // namespace

ValidationReport run_validation(const ValidateOptions& options) {
  std::vector<std::array<Tracker, kCheckCount>> per_trial(options.n_trials);
  parallel_for(options.n_trials, [&](std::size_t i) { per_trial[i] = run_trial(options, i); });

  std::array<Tracker, kCheckCount> total;
  for (const auto& trial : per_trial)
    for (int k = 0; k < kCheckCount; ++k) total[k].merge(trial[k]);

  ValidationReport report;
  for (int k = 0; k < kCheckCount; ++k) {
    ValidationCheck c;
    c.name = kChecks[k].name;
    c.tolerance = kChecks[k].tolerance;
    c.max_deviation = total[k].worst;
    c.passed = total[k].worst <= kChecks[k].tolerance;
    if (!c.passed) c.failing_case = total[k].where;
    report.checks.push_back(std::move(c));
  }
  return report;
}

void write_report(std::ostream& out, const ValidateOptions& options, const ValidationReport& report) {
  char line[128];
  std::snprintf(line, sizeof line, "%-26s %-14s %-10s %s\n", "check", "max_deviation", "tolerance", "status");
  out << line;
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof line, "%-26s %-14s %-10s %s\n", c.name.c_str(), sci(c.max_deviation).c_str(),
                  sci(c.tolerance).c_str(), c.passed ? "PASS" : "FAIL");
    out << line;
  }
  for (const auto& c : report.checks)
    if (!c.passed) out << "failing case [" << c.name << "]: " << c.failing_case.dump() << '\n';
  out << "result: " << (report.passed() ? "PASS" : "FAIL") << " (seed " << options.seed << ", " << options.n_trials
      << " trials x " << options.n_frequencies << " frequencies" << (options.inject_fault ? ", fault injected" : "")
      << ")\n";
}

int cmd_validate(const ValidateOptions& options, std::ostream& out, std::ostream& err) {
  if (options.n_trials < 1 || options.n_frequencies < 2) {
    err << "error: validate needs --trials >= 1\n";
    return kInputError;
  }
  try {
    const auto report = run_validation(options);
    write_report(out, options, report);
    return report.passed() ? kOk : kPropertyFailure;
  } catch (const SingularSystemError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

// ---------------------------------------------------------------- fit

namespace {

void write_curve(std::ostream& out, const std::vector<std::pair<FitResult, FitDataset>>& fits) {
  out << "model_id,power_uW,linewidth_kHz\n";
  for (const auto& [fit, data] : fits) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& row : data.rows) {
      lo = std::min(lo, row.power);
      hi = std::max(hi, row.power);
    }
    if (hi <= lo) continue;
    for (double x : linear_grid(lo, hi, 101)) out << fit.model_id << ',' << fmt(x) << ',' << fmt(fit.predict(x)) << '\n';
  }
}

} // namespace

int cmd_fit(const FitOptions& options, std::ostream& out, std::ostream& curve_out, std::ostream& err) {
  if (options.regime != "low" && options.regime != "high") {
    err << "error: --regime must be low or high\n";
    return kInputError;
  }
  try {
    const auto data = read_fit_csv_file(options.data_path);
    const double p0 = options.breakpoint_power.value_or(0.0);
    const bool has_breakpoint = options.breakpoint_power.has_value();
    std::vector<std::pair<FitResult, FitDataset>> fits;

    if (options.regime == "low") {
      const double upper = has_breakpoint ? p0 : std::numeric_limits<double>::infinity();
      const auto co = data.select(Direction::Plus, 0.0, upper);
      const auto counter = data.select(Direction::Minus, 0.0, upper);
      if (!co.rows.empty()) fits.emplace_back(fit_linear(co, FitModel::CoLinear), co);
      if (!counter.rows.empty()) fits.emplace_back(fit_linear(counter, FitModel::CounterLowLinear), counter);
    } else {
      const double lower = has_breakpoint ? p0 : 0.0;
      std::optional<double> q2 = options.q2;
      if (!q2 && !options.general) {
        if (!options.low_fit_path || !has_breakpoint) {
          err << "error: high regime needs --q2, or --low-fit together with --p0\n";
          return kInputError;
        }
        std::ifstream in(*options.low_fit_path);
        if (!in) throw FitInputError("cannot open low-power fit report: " + *options.low_fit_path);
        nlohmann::json report;
        try {
          report = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw FitInputError(std::string("low-power fit report: ") + e.what());
        }
        const auto& entries = report.contains("fits") ? report.at("fits") : nlohmann::json::array({report});
        for (const auto& entry : entries) {
          if (entry.value("model_id", "") == model_id(FitModel::CounterLowLinear))
            q2 = q2_from_low_fit(entry.get<FitResult>(), p0);
        }
        if (!q2) throw FitInputError("low-power fit report has no counter_low_linear entry");
      }
      const auto co = data.select(Direction::Plus, lower);
      const auto counter = data.select(Direction::Minus, lower);
      if (!co.rows.empty()) fits.emplace_back(fit_linear(co, FitModel::CoLinear), co);
      if (!counter.rows.empty())
        fits.emplace_back(options.general ? fit_high_power_counter_general(counter) : fit_high_power_counter(counter, *q2),
                          counter);
    }
    if (fits.empty()) {
      err << "error: no rows in the selected power range\n";
      return kInputError;
    }

    nlohmann::json report{{"regime", options.regime}, {"fits", nlohmann::json::array()}};
    if (has_breakpoint) report["p0"] = p0;
    for (const auto& [fit, rows] : fits) {
      report["fits"].push_back(fit);
      for (const auto& w : fit.warnings) err << "warning: " << fit.model_id << ": " << w << '\n';
    }
    out << report.dump(2) << '\n';
    if (options.curve) write_curve(curve_out, fits);
    return kOk;
  } catch (const FitInputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const SingularFitError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

// ---------------------------------------------------------------- bath

int cmd_bath(const BathOptions& options, std::ostream& out, std::ostream& err) {
  if (options.n_modes.empty()) {
    err << "error: need at least one --n-modes value\n";
    return kInputError;
  }
  std::vector<std::string> lines;
  for (std::size_t n : options.n_modes) {
    BathSpec spec = options.spec;
    spec.n_modes = n;
    try {
      validate(spec);
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << '\n';
      return kInputError;
    }
    const auto lambda_sum = discrete_bath_sum(spec, options.nu, CouplingProduct::LambdaSquared);
    const auto mu_sum = discrete_bath_sum(spec, options.nu, CouplingProduct::MuSquared);
    const auto cross_sum = discrete_bath_sum(spec, options.nu, CouplingProduct::LambdaMu);
    const auto exact = band_integral(spec, options.nu, CouplingProduct::LambdaSquared);
    const double continuum = std::numbers::pi * spec.rho * spec.lambda_k * spec.lambda_k;
    const double rel = relative(lambda_sum.value.real(), exact.real());
    const double rel_continuum = relative(lambda_sum.value.real(), continuum);
    if (lambda_sum.undersampled)
      err << "warning: N = " << n << ": mode spacing " << fmt(mode_spacing(spec)) << " >= eta " << fmt(spec.eta_th)
          << '\n';
    if (lambda_sum.outside_band) err << "warning: nu lies outside the band\n";

    std::ostringstream row;
    row << n << ',' << fmt(mode_spacing(spec)) << ',' << fmt(lambda_sum.value.real()) << ','
        << fmt(lambda_sum.value.imag()) << ',' << fmt(exact.real()) << ',' << fmt(exact.imag()) << ',' << fmt(rel)
        << ',' << fmt(continuum) << ',' << fmt(rel_continuum) << ','
        << fmt(2.0 * spec.alpha * spec.alpha * lambda_sum.value.real()) << ',' << fmt(2.0 * mu_sum.value.real())
        << ',' << fmt(2.0 * cross_sum.value.real()) << ',' << (lambda_sum.undersampled ? 1 : 0) << ','
        << (lambda_sum.outside_band ? 1 : 0);
    lines.push_back(row.str());
  }
  out << "N,spacing,Re_sum,Im_sum,analytic_Re,analytic_Im,rel_error,continuum_Re,continuum_rel_error,"
         "Lambda,gamma_a_minus,chi_cross,undersampled,outside_band\n";
  for (const auto& l : lines) out << l << '\n';
  return kOk;
}

} // namespace quasimode::cli
