#include "quasimode/response.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace quasimode {

namespace {

// Threshold below which an LU factorisation is reported as singular.
constexpr double kMinRcond = 1e-14;

std::string format_rcond(double rcond) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << rcond;
  return os.str();
}

} // namespace

Eigen::MatrixXcd susceptibility_matrix(const DynamicalMatrix& m, double nu) {
  const Eigen::MatrixXcd a = m.coefficient_matrix(nu);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > kMinRcond))
    throw SingularSystemError("susceptibility_matrix: A(nu) is singular at nu = " + std::to_string(nu) +
                                  " (rcond " + format_rcond(rcond) + ")",
                              rcond);
  return lu.inverse();
}

std::complex<double> EffectiveResponse::coeff(ModeIndex input) const {
  for (const auto& c : input_coeffs)
    if (c.input == input) return c.coeff;
  throw std::out_of_range("no input field " + std::string(to_string(input)));
}

Elimination eliminate(const Eigen::MatrixXcd& a, const Eigen::VectorXd& input_rates, Eigen::Index target) {
  const Eigen::Index n = a.rows();
  Elimination out;
  out.coeffs = Eigen::VectorXcd::Zero(n);
  if (n == 1) {
    out.schur = a(0, 0);
    out.coeffs(0) = std::sqrt(input_rates(0));
    return out;
  }

  // Split indices into the kept mode and the block being eliminated.
  std::vector<Eigen::Index> rest;
  for (Eigen::Index i = 0; i < n; ++i)
    if (i != target) rest.push_back(i);
  const auto r = static_cast<Eigen::Index>(rest.size());
  Eigen::MatrixXcd a_rr(r, r);
  Eigen::RowVectorXcd a_tr(r);
  Eigen::VectorXcd a_rt(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    a_tr(i) = a(target, rest[i]);
    a_rt(i) = a(rest[i], target);
    for (Eigen::Index j = 0; j < r; ++j) a_rr(i, j) = a(rest[i], rest[j]);
  }

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a_rr);
  const double rcond = lu.rcond();
  if (!(rcond > kMinRcond))
    throw SingularSystemError("eliminate: block of the " + std::to_string(r) + " eliminated modes is singular (rcond " +
                                  format_rcond(rcond) + ")",
                              rcond);

  // w = A_tr A_rr^-1
  const Eigen::RowVectorXcd w = a_tr * lu.inverse();
  out.schur = a(target, target) - w.cwiseProduct(a_rt.transpose()).sum();
  out.coeffs(target) = std::sqrt(input_rates(target));
  for (Eigen::Index i = 0; i < r; ++i) out.coeffs(rest[i]) = -w(i) * std::sqrt(input_rates(rest[i]));
  return out;
}

EffectiveResponse effective_inverse_susceptibility(const DynamicalMatrix& m, ModeIndex mode, double nu) {
  const auto idx = m.index_of(mode);
  if (!idx) throw std::out_of_range("mode " + std::string(to_string(mode)) + " is not part of the system");
  const auto& spec = m.modes()[*idx];

  Elimination e;
  try {
    e = eliminate(m.coefficient_matrix(nu), m.input_rates(), static_cast<Eigen::Index>(*idx));
  } catch (const SingularSystemError& err) {
    throw SingularSystemError(std::string(err.what()) + " while reducing onto " + std::string(to_string(mode)),
                              err.rcond());
  }

  EffectiveResponse out;
  out.nu = nu;
  out.chi_inv_eff = e.schur;
  out.linewidth = 2.0 * e.schur.real();
  const double w_mode = spec.kind == DiagKind::QuasiMode ? nu : spec.frequency;
  out.shift = e.schur.imag() + (nu - w_mode);
  for (std::size_t i = 0; i < m.size(); ++i)
    out.input_coeffs.push_back({m.modes()[i].id, e.coeffs(static_cast<Eigen::Index>(i))});
  return out;
}

std::vector<std::complex<double>> resonance_poles(const DynamicalMatrix& m, PolePrecision precision) {
  using namespace std::complex_literals;
  Eigen::MatrixXcd h = m.coupling_matrix().cast<std::complex<double>>();
  for (std::size_t k = 0; k < m.size(); ++k) {
    const auto& spec = m.modes()[k];
    if (spec.kind == DiagKind::QuasiMode)
      throw std::invalid_argument("resonance_poles: quasi-mode rows have no resonance frequency");
    const auto i = static_cast<Eigen::Index>(k);
    h(i, i) = spec.frequency - 0.5i * spec.damping;
  }
  std::vector<std::complex<double>> poles;
  if (precision == PolePrecision::Double) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("resonance_poles: eigenvalue solver failed");
    poles.assign(solver.eigenvalues().begin(), solver.eigenvalues().end());
  } else {
    using Real = boost::multiprecision::cpp_bin_float_50;
    using Cplx = std::complex<Real>;
    using MatrixX = Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic>;
    MatrixX hx(h.rows(), h.cols());
    for (Eigen::Index r = 0; r < h.rows(); ++r)
      for (Eigen::Index c = 0; c < h.cols(); ++c) hx(r, c) = Cplx(Real(h(r, c).real()), Real(h(r, c).imag()));
    Eigen::ComplexEigenSolver<MatrixX> solver(hx, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("resonance_poles: eigenvalue solver failed");
    for (const auto& e : solver.eigenvalues())
      poles.emplace_back(static_cast<double>(e.real()), static_cast<double>(e.imag()));
  }
  std::sort(poles.begin(), poles.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  return poles;
}

TemperatureMap mechanical_temperatures(const SystemParams& p) {
  return {{ModeIndex::APlus, p.T_a_plus},
          {ModeIndex::AMinus, p.T_a_minus},
          {ModeIndex::BPlus, p.T_b_plus},
          {ModeIndex::BMinus, p.T_b_minus}};
}

double effective_temperature(const DynamicalMatrix& m, ModeIndex mode, double nu, const TemperatureMap& temps) {
  for (const auto& [id, t] : temps)
    if (!(t >= 0.0)) throw std::invalid_argument("effective_temperature: negative temperature for " +
                                                 std::string(to_string(id)));
  const auto r = effective_inverse_susceptibility(m, mode, nu);
  double weighted = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& spec = m.modes()[i];
    if (spec.kind == DiagKind::Optical) continue;
    auto it = temps.find(spec.id);
    if (it == temps.end())
      throw std::invalid_argument("effective_temperature: no temperature for input " + std::string(to_string(spec.id)));
    weighted += std::norm(r.input_coeffs[i].coeff) * it->second;
  }
  return weighted / r.linewidth;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n < 2) throw std::invalid_argument("linear_grid: need at least 2 points");
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

std::vector<double> default_grid(const SystemParams& p, std::size_t n) {
  return linear_grid(p.omega_m - 5.0 * p.kappa, p.omega_m + 5.0 * p.kappa, n);
}

} // namespace quasimode
