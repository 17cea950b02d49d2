// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "quasimode/bath.hpp"
#include "quasimode/closedform.hpp"
#include "quasimode/fitting.hpp"
#include "quasimode/model.hpp"
#include "quasimode/parallel.hpp"
#include "quasimode/response.hpp"

using namespace quasimode;
using namespace std::complex_literals;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string fixed(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double rel(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) / std::abs(b); }

SystemParams pumped(double alpha_sq, double beta_sq) {
  auto p = reference_params();
  p.alpha = std::sqrt(alpha_sq);
  p.beta = std::sqrt(beta_sq);
  return p;
}

// 1 ------------------------------------------------------------------------
Outcome oracle_equivalence() {
  constexpr std::size_t kSets = 100, kFreqs = 1000;
  std::vector<double> dev_chi(kSets), dev_lw(kSets);
  parallel_for(kSets, [&](std::size_t trial) {
    std::seed_seq seq{2024u, static_cast<unsigned>(trial)};
    std::mt19937_64 rng(seq);
    const auto p = random_params(rng);
    const auto cut_b = build_cut_system(p, CutTopology::CutB);
    const auto cut_c = build_cut_system(p, CutTopology::CutC);
    double worst_chi = 0.0, worst_lw = 0.0;
    for (double nu : linear_grid(p.omega_m - 5.0 * p.kappa, p.omega_m + 5.0 * p.kappa, kFreqs)) {
      const auto closed_minus = chi_inv(p, Direction::Minus, nu);
      const auto closed_plus = chi_inv(p, Direction::Plus, nu);
      worst_chi = std::max({worst_chi,
                            rel(effective_inverse_susceptibility(cut_b, ModeIndex::AMinus, nu).chi_inv_eff, closed_minus),
                            rel(effective_inverse_susceptibility(cut_c, ModeIndex::APlus, nu).chi_inv_eff, closed_plus)});
      for (auto [d, c] : {std::pair{Direction::Minus, closed_minus}, std::pair{Direction::Plus, closed_plus}}) {
        const double twice_re = 2.0 * c.real();
        worst_lw = std::max(worst_lw, std::abs(linewidth(p, d, nu) - twice_re) / std::abs(twice_re));
      }
    }
    dev_chi[trial] = worst_chi;
    dev_lw[trial] = worst_lw;
  });
  const double chi = *std::max_element(dev_chi.begin(), dev_chi.end());
  const double lw = *std::max_element(dev_lw.begin(), dev_lw.end());
  Outcome o;
  o.require(chi <= 1e-10, "chi_inv closed form vs elimination");
  o.require(lw <= 1e-12, "linewidth = 2 Re(chi_inv)");
  o.note("100 sets x 1000 nu; max rel chi_inv dev " + sci(chi) + " (tol 1e-10), linewidth identity " + sci(lw) +
         " (tol 1e-12)");
  return o;
}

// 2 ------------------------------------------------------------------------
Outcome resonance_formulas() {
  Outcome o;
  const auto p = pumped(50.0, 0.0);
  const auto z = pumped(0.0, 0.0);
  struct Case {
    const char* name;
    SystemParams params;
    Direction dir;
    CutTopology cut;
    ModeIndex mode;
    double expected;
  };
  const Case cases[] = {
      {"gamma_a+", p, Direction::Plus, CutTopology::CutC, ModeIndex::APlus, 0.035},
      {"gamma_a-", p, Direction::Minus, CutTopology::CutB, ModeIndex::AMinus, 0.017},
      {"gamma_a+(0)", z, Direction::Plus, CutTopology::CutC, ModeIndex::APlus, 0.033},
      {"gamma_a-(0)", z, Direction::Minus, CutTopology::CutB, ModeIndex::AMinus, 0.033},
  };
  double worst = 0.0;
  for (const auto& c : cases) {
    const double nu = -c.params.delta;
    const double closed = linewidth_at_resonance(c.params, c.dir);
    const double full = linewidth(c.params, c.dir, nu);
    const double oracle = effective_inverse_susceptibility(build_cut_system(c.params, c.cut), c.mode, nu).linewidth;
    const double dev = std::max({std::abs(closed - c.expected), std::abs(full - c.expected),
                                 std::abs(oracle - c.expected)});
    worst = std::max(worst, dev);
    o.require(dev <= 1e-12, c.name);
  }
  o.note("0.035 / 0.017 / 0.033 reproduced by closed forms and oracle, max abs dev " + sci(worst) + " (tol 1e-12)");
  return o;
}

// 3 ------------------------------------------------------------------------
Outcome figure_sweep() {
  Outcome o;
  const auto base = pumped(0.0, 0.0);
  const auto cs = linear_grid(0.0, 5.0, 501);
  std::vector<double> gp, gm, tp, tm;
  double oracle_dev = 0.0, tplus_dev = 0.0;
  const double nu = -base.delta;
  const double scatter = 4.0 * base.V0 * base.V0 / base.Gamma;
  for (double c : cs) {
    auto p = base;
    p.alpha = std::sqrt(alpha_squared_for_cooperativity(p, c));
    gp.push_back(linewidth(p, Direction::Plus, nu) / p.gamma);
    gm.push_back(linewidth(p, Direction::Minus, nu) / p.gamma);
    tp.push_back(effective_temperature_closed(p, Direction::Plus, nu) / p.T_a_plus);
    tm.push_back(effective_temperature_closed(p, Direction::Minus, nu) / p.T_a_minus);
    // Oracle temperatures on both cuts.
    const auto temps = mechanical_temperatures(p);
    const double t_minus = effective_temperature(build_cut_system(p, CutTopology::CutB), ModeIndex::AMinus, nu, temps);
    const double t_plus = effective_temperature(build_cut_system(p, CutTopology::CutC), ModeIndex::APlus, nu, temps);
    oracle_dev = std::max({oracle_dev, std::abs(t_minus / p.T_a_minus - tm.back()) / tm.back(),
                           std::abs(t_plus / p.T_a_plus - tp.back()) / tp.back()});
    // Co-propagating mode: both of its baths are unfiltered, only the
    // optical damping is added (cold).
    const double opt = 4.0 * p.alpha * p.alpha * p.lambda_c * p.lambda_c / p.kappa;
    const double tplus_formula = (p.gamma + scatter) / (p.gamma + opt + scatter);
    tplus_dev = std::max(tplus_dev, std::abs(tp.back() - tplus_formula));
  }
  auto strictly = [](const std::vector<double>& v, bool increasing) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (increasing ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) return false;
    return true;
  };
  o.require(strictly(gp, true), "gamma_a+/gamma strictly increasing");
  o.require(strictly(gm, false), "gamma_a-/gamma strictly decreasing");
  // The floor is gamma itself: (gamma_a- - gamma)(1 + C) stays at 4 V0^2/Gamma.
  double floor_dev = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    o.require(gm[i] > 1.0, "gamma_a- above the intrinsic floor");
    floor_dev = std::max(floor_dev, std::abs((gm[i] - 1.0) * base.gamma * (1.0 + cs[i]) - scatter));
  }
  o.require(floor_dev <= 1e-15, "gamma_a- approaches gamma as 1/(1+C)");
  o.require(strictly(tm, false), "T_a-/T strictly decreasing");
  const double t_at_1 = tm[100]; // C = 1
  o.require(std::abs(cs[100] - 1.0) < 1e-15, "grid hits C = 1");
  o.require(std::abs(t_at_1 - 9.0 / 17.0) <= 1e-6, "T_a-/T at C = 1");
  o.require(tplus_dev <= 1e-12, "T_a+/T follows the co-propagating formula");
  o.require(oracle_dev <= 1e-10, "temperatures confirmed by oracle");
  o.note("501 points over C in [0,5]; T_a-/T(C=1) = " + fixed(t_at_1, 7) + " (9/17, tol 1e-6); gamma_a+/gamma " +
         fixed(gp.front(), 3) + " -> " + fixed(gp.back(), 3) + ", gamma_a-/gamma " + fixed(gm.front(), 3) + " -> " +
         fixed(gm.back(), 3) + "; T_a+ formula dev " + sci(tplus_dev) + ", oracle dev " + sci(oracle_dev));
  return o;
}

// 4 ------------------------------------------------------------------------
Outcome frequency_shift_check() {
  Outcome o;
  const auto p = pumped(50.0, 50.0 / 9.15);
  const double nu0 = -p.delta;
  for (auto d : {Direction::Plus, Direction::Minus}) o.require(frequency_shift(p, d, nu0) == 0.0, "shift(-delta) == 0");
  const double oracle0 = effective_inverse_susceptibility(build_cut_system(p, CutTopology::CutB), ModeIndex::AMinus, nu0).shift;
  o.require(std::abs(oracle0) <= 1e-15, "oracle shift at -delta");

  const auto grid = linear_grid(nu0 - 5.0 * p.kappa, nu0 + 5.0 * p.kappa, 20001);
  const double step = grid[1] - grid[0];
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (optical_shift_term(p, Direction::Plus, grid[i]) > optical_shift_term(p, Direction::Plus, grid[best])) best = i;
  const double peak_at = nu0 + p.kappa / 2.0;
  const double peak = p.alpha * p.alpha * p.lambda_c * p.lambda_c / p.kappa;
  const double loc_err = std::abs(grid[best] - peak_at);
  const double val_err = std::abs(optical_shift_term(p, Direction::Plus, grid[best]) - peak);
  o.require(loc_err <= step, "argmax within one grid step");
  o.require(val_err <= 1e-10, "peak value");
  o.note("shift(-delta) = 0 exactly; optical term peak at " + fixed(grid[best], 5) + " (analytic " +
         fixed(peak_at, 5) + ", step " + sci(step) + "), value dev " + sci(val_err) + " (tol 1e-10)");
  return o;
}

// 5 ------------------------------------------------------------------------
Outcome v1_pole_check() {
  Outcome o;
  auto pole_dev = [](const SystemParams& q) {
    const auto closed = v1_poles(q);
    std::vector<std::complex<double>> expected{closed.plus, closed.minus};
    std::sort(expected.begin(), expected.end(), [](auto a, auto b) {
      return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
    });
    const auto eig = resonance_poles(build_v1_pair(q), PolePrecision::Extended);
    return std::max(rel(eig[0], expected[0]), rel(eig[1], expected[1]));
  };

  // Reference set with alpha^2 = 50: dgamma = 1e-3.
  auto split = pumped(50.0, 0.0);
  split.V1 = 1e-3;
  auto over = split;
  over.V1 = 2e-4;
  // Coalescence needs 2 V1 == dgamma exactly, so use binary fractions.
  auto ep = reference_params();
  ep.gamma = 1.0 / 1024;
  ep.lambda_c = 1.0 / 16;
  ep.kappa = 1.0 / 4;
  ep.alpha = 1.0;
  ep.beta = 0.0;
  ep.V1 = 1.0 / 64;
  const bool exact_ep = 2.0 * ep.V1 == v1_damping_difference(ep);

  const double d_split = pole_dev(split), d_ep = pole_dev(ep), d_over = pole_dev(over);
  o.require(2.0 * split.V1 > v1_damping_difference(split) && d_split <= 1e-12, "split regime");
  o.require(exact_ep && d_ep <= 1e-12, "coalescence");
  o.require(2.0 * over.V1 < v1_damping_difference(over) && d_over <= 1e-12, "over-damped regime");

  // Random draws in the two generic regimes.
  std::mt19937_64 rng(5);
  double d_random = 0.0;
  for (int k = 0; k < 200; ++k) {
    auto q = random_params(rng);
    const double factor = k % 2 ? std::uniform_real_distribution<double>(1.2, 4.0)(rng)
                                : std::uniform_real_distribution<double>(0.0, 0.8)(rng);
    q.V1 = 0.5 * v1_damping_difference(q) * factor;
    d_random = std::max(d_random, pole_dev(q));
  }
  o.require(d_random <= 1e-12, "random split / over-damped draws");

  auto zero = pumped(0.0, 0.0);
  zero.V1 = 0.02;
  const auto zp = v1_poles(zero);
  // Bit-exact against omega_m +- V1 (subtracting omega_m back would round).
  const bool exact = zp.plus.real() == zero.omega_m + zero.V1 && zp.minus.real() == zero.omega_m - zero.V1 &&
                     zp.plus.imag() == zp.minus.imag();
  const auto ze = resonance_poles(build_v1_pair(zero));
  o.require(exact, "zero-pump splitting exactly +-V1");
  o.require(std::abs(ze[0].real() - 1.02) <= 1e-12 && std::abs(ze[1].real() - 0.98) <= 1e-12,
            "zero-pump eigenvalues at +-V1");

  // For the record: the double-precision eigensolver at the coalescence.
  double d_ep_double = 0.0;
  for (const auto& z : resonance_poles(build_v1_pair(ep))) d_ep_double = std::max(d_ep_double, rel(z, v1_poles(ep).plus));
  o.note("max rel dev split " + sci(d_split) + ", coalescence " + sci(d_ep) + ", over-damped " + sci(d_over) +
         ", 200 random " + sci(d_random) + " (tol 1e-12, 50-digit eigensolver); double-precision eigensolver at "
         "coalescence " + sci(d_ep_double) + "; zero-pump split exactly +-V1");
  return o;
}

// 6 ------------------------------------------------------------------------
Outcome bath_limit() {
  Outcome o;
  BathSpec s;
  s.rho = 100.0;
  s.lambda_k = 0.01;
  s.mu_k = 0.02;
  s.eta_th = 0.05;
  s.band_center = 1.0;
  s.band_halfwidth = 2.5; // W / eta = 50
  s.n_modes = 10000;
  s.alpha = 1.0;
  const double continuum = std::numbers::pi * s.rho * s.lambda_k * s.lambda_k;
  const double re = discrete_bath_sum(s, s.band_center, CouplingProduct::LambdaSquared).value.real();
  const double re_err = std::abs(re - continuum) / continuum;
  o.require(re_err < 0.01, "Re within 1% of pi rho lambda^2");

  double anti = 0.0;
  for (double d : {0.01, 0.1, 0.5, 1.5}) {
    const double up = discrete_bath_sum(s, s.band_center + d, CouplingProduct::LambdaSquared).value.imag();
    const double down = discrete_bath_sum(s, s.band_center - d, CouplingProduct::LambdaSquared).value.imag();
    anti = std::max(anti, std::abs(up + down));
  }
  o.require(anti <= 1e-12, "Im antisymmetry");

  double det_ratio = 0.0;
  std::mt19937_64 rng(6);
  for (int k = 0; k < 1000; ++k) {
    auto t = s;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    t.rho = 1.0 + 500.0 * u(rng);
    t.lambda_k = 0.1 * u(rng);
    t.mu_k = 0.1 * u(rng);
    t.alpha = 20.0 * u(rng);
    const Eigen::Matrix2d m = induced_damping_matrix(t, t.band_center);
    const double norm2 = m.squaredNorm();
    if (norm2 > 0.0) det_ratio = std::max(det_ratio, std::abs(m.determinant()) / norm2);
  }
  o.require(det_ratio < 1e-14, "damping matrix rank 1");

  const double lambda = quasimode_reduction(s, s.band_center).Lambda;
  const double lambda_err = std::abs(2.0 * s.alpha * s.alpha * re - lambda) / lambda;
  o.require(lambda_err < 0.01, "Lambda = 2 x discrete Re");
  o.note("N = 1e4, W/eta = 50: Re dev " + fixed(100.0 * re_err, 3) + "% of pi rho lambda^2; Im antisymmetry " +
         sci(anti) + "; max |det|/||M||^2 " + sci(det_ratio) + "; Lambda = " + fixed(lambda, 7) + " vs 2 Re " +
         fixed(100.0 * lambda_err, 3) + "%");
  return o;
}

// 7 ------------------------------------------------------------------------

std::vector<double> powers(double lo, double hi, std::size_t n) { return linear_grid(lo, hi, n); }

struct LinearCase {
  const char* name;
  FitModel model;
  double c0, c1;       // truth
  double c0_2s, c1_2s; // reported 2-sigma
};

Outcome fit_pipeline() {
  Outcome o;
  const LinearCase cases[] = {
      {"co low (p0, p1)", FitModel::CoLinear, 11.25, 0.36, 9.83, 0.13},
      {"co high (p0, p1)", FitModel::CoLinear, 17.31, 0.24, 7.98, 0.05},
      {"counter low (q0, q1)", FitModel::CounterLowLinear, 12.80, 0.029, 3.02, 0.041},
  };
  constexpr double kQ2 = 15.7, kQ3 = 2324.0, kQ3_2s = 194.0;
  constexpr std::size_t kTrials = 500, kPoints = 10;

  double noiseless = 0.0;
  for (const auto& c : cases) {
    FitDataset data;
    for (double x : powers(10.0, 100.0, 10)) data.rows.push_back({Direction::Plus, x, c.c0 + c.c1 * x, {}});
    const auto r = fit_linear(data, c.model);
    noiseless = std::max({noiseless, std::abs(r.params[0].value - c.c0) / c.c0, std::abs(r.params[1].value - c.c1) / c.c1});
  }
  {
    FitDataset data;
    for (double x : powers(100.0, 1000.0, 10)) data.rows.push_back({Direction::Minus, x, kQ2 + kQ3 / x, {}});
    noiseless = std::max(noiseless, std::abs(fit_high_power_counter(data, kQ2).param("q3") - kQ3) / kQ3);
  }
  o.require(noiseless <= 1e-9, "noiseless recovery");

  // Noise scale: sd(c0)/sd(c1) = rms(x) for an unweighted line fit, so the
  // power grid is built with exactly the reported ratio as its rms (mean
  // 0.94 rms, spread rms/3, which keeps every linewidth well above zero)
  // and sigma = sd(c1) sqrt(Sxx).
  std::string coverage;
  std::size_t redraws = 0;
  for (const auto& c : cases) {
    const double rms = c.c0_2s / c.c1_2s;
    const double var = rms * rms / 9.0;
    const double mid = std::sqrt(rms * rms - var);
    const double half = std::sqrt(var * 3.0 * (kPoints - 1.0) / (kPoints + 1.0));
    const auto xs = powers(mid - half, mid + half, kPoints);
    double sxx = 0.0;
    for (double x : xs) sxx += (x - mid) * (x - mid);
    const double sigma = 0.5 * c.c1_2s * std::sqrt(sxx);
    std::vector<int> hit0(kTrials), hit1(kTrials), redrawn(kTrials);
    parallel_for(kTrials, [&](std::size_t t) {
      std::seed_seq seq{7u, static_cast<unsigned>(c.model), static_cast<unsigned>(c.c0 * 100), static_cast<unsigned>(t)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> noise(0.0, sigma);
      FitDataset data;
      for (double x : xs) {
        double y = c.c0 + c.c1 * x + noise(rng);
        while (y <= 0.0) {
          ++redrawn[t];
          y = c.c0 + c.c1 * x + noise(rng);
        }
        data.rows.push_back({Direction::Plus, x, y, {}});
      }
      const auto r = fit_linear(data, c.model);
      hit0[t] = std::abs(r.params[0].value - c.c0) <= c.c0_2s;
      hit1[t] = std::abs(r.params[1].value - c.c1) <= c.c1_2s;
    });
    for (int n : redrawn) redraws += n;
    const double f0 = std::count(hit0.begin(), hit0.end(), 1) / double(kTrials);
    const double f1 = std::count(hit1.begin(), hit1.end(), 1) / double(kTrials);
    o.require(f0 >= 0.9 && f1 >= 0.9, std::string(c.name) + " coverage");
    coverage += std::string(coverage.empty() ? "" : ", ") + c.name + " " + fixed(100 * f0, 1) + "/" +
                fixed(100 * f1, 1) + "%";
  }
  {
    const auto xs = powers(100.0, 1000.0, kPoints);
    double s = 0.0;
    for (double x : xs) s += 1.0 / (x * x);
    const double sigma = 0.5 * kQ3_2s * std::sqrt(s);
    std::vector<int> hit(kTrials);
    parallel_for(kTrials, [&](std::size_t t) {
      std::seed_seq seq{8u, static_cast<unsigned>(t)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> noise(0.0, sigma);
      FitDataset data;
      for (double x : xs) data.rows.push_back({Direction::Minus, x, kQ2 + kQ3 / x + noise(rng), {}});
      hit[t] = std::abs(fit_high_power_counter(data, kQ2).param("q3") - kQ3) <= kQ3_2s;
    });
    const double f = std::count(hit.begin(), hit.end(), 1) / double(kTrials);
    o.require(f >= 0.9, "q3 coverage");
    coverage += ", q3 " + fixed(100 * f, 1) + "%";
  }
  o.note("noiseless max rel dev " + sci(noiseless) + " (tol 1e-9); 500-trial coverage within reported 2-sigma: " +
         coverage + " (need >= 90%); non-positive draws redrawn: " + std::to_string(redraws));
  return o;
}

// 8 ------------------------------------------------------------------------
Outcome cut_validity() {
  Outcome o;
  std::vector<double> gaps;
  for (double ratio : {0.2, 0.1, 0.05, 0.02}) {
    auto p = pumped(50.0, 50.0 / 9.15);
    p.lambda_c = ratio * p.g_c;
    const double nu = -p.delta;
    const double full = effective_inverse_susceptibility(build_full_system(p), ModeIndex::AMinus, nu).linewidth;
    gaps.push_back(std::abs(full - linewidth_at_resonance(p, Direction::Minus)));
  }
  for (std::size_t i = 1; i < gaps.size(); ++i) o.require(gaps[i] < gaps[i - 1], "discrepancy strictly decreasing");
  o.note("|gamma_a-(full) - gamma_a-(cut)| at lambda/g = 0.2, 0.1, 0.05, 0.02: " + sci(gaps[0]) + ", " +
         sci(gaps[1]) + ", " + sci(gaps[2]) + ", " + sci(gaps[3]));
  return o;
}

} // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 oracle equivalence", oracle_equivalence},
      {"2 resonance linewidths", resonance_formulas},
      {"3 cooperativity sweep", figure_sweep},
      {"4 frequency shift", frequency_shift_check},
      {"5 back-scattering poles", v1_pole_check},
      {"6 bath continuum limit", bath_limit},
      {"7 fit pipeline", fit_pipeline},
      {"8 loop-cut validity", cut_validity},
  };
  bool all = true;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    std::printf("%s [%s] %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s: %s in %.1f s\n", all ? "ALL PASS" : "SOME FAILED", "8 criteria", secs);
  return all ? 0 : 1;
}
