#include "quasimode/bath.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "quasimode/parallel.hpp"

namespace quasimode {

namespace {

double coupling_product(const BathSpec& s, CouplingProduct product) {
  switch (product) {
  case CouplingProduct::LambdaSquared: return s.lambda_k * s.lambda_k;
  case CouplingProduct::MuSquared: return s.mu_k * s.mu_k;
  case CouplingProduct::LambdaMu: return s.lambda_k * s.mu_k;
  }
  return 0.0;
}

constexpr std::size_t kChunk = 4096;

} // namespace

void validate(const BathSpec& s) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("BathSpec: ") + what);
  };
  require(s.rho > 0.0 && std::isfinite(s.rho), "rho must be > 0");
  require(s.eta_th > 0.0 && std::isfinite(s.eta_th), "eta_th must be > 0");
  require(s.band_halfwidth > 0.0 && std::isfinite(s.band_halfwidth), "band_halfwidth must be > 0");
  require(std::isfinite(s.band_center), "band_center must be finite");
  require(s.n_modes >= 2, "n_modes must be >= 2");
  require(s.lambda_k >= 0.0 && s.mu_k >= 0.0, "couplings must be >= 0");
  require(s.alpha >= 0.0, "alpha must be >= 0");
}

double mode_spacing(const BathSpec& s) { return 2.0 * s.band_halfwidth / static_cast<double>(s.n_modes); }

BathSum discrete_bath_sum(const BathSpec& s, double nu, CouplingProduct product) {
  validate(s);
  const double h = mode_spacing(s);
  const double lo = s.band_center - s.band_halfwidth;
  const double weight = s.rho * h * coupling_product(s, product);
  const double half_eta = s.eta_th / 2.0;
  const std::size_t n = s.n_modes;

  // 1 / (i x + eta/2) = (eta/2 - i x) / (x^2 + eta^2/4)
  std::vector<double> re(n), im(n);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t k = c * kChunk; k < end; ++k) {
      const double x = lo + (static_cast<double>(k) + 0.5) * h - nu;
      const double denom = x * x + half_eta * half_eta;
      re[k] = weight * half_eta / denom;
      im[k] = -weight * x / denom;
    }
  });

  BathSum out;
  out.value = {pairwise_sum(re), pairwise_sum(im)};
  out.outside_band = std::abs(nu - s.band_center) > s.band_halfwidth;
  out.undersampled = h >= s.eta_th;
  return out;
}

std::complex<double> band_integral(const BathSpec& s, double nu, CouplingProduct product) {
  validate(s);
  const double scale = s.rho * coupling_product(s, product);
  const double a = s.band_center - s.band_halfwidth;
  const double b = s.band_center + s.band_halfwidth;
  const double half_eta = s.eta_th / 2.0;
  const double re = scale * (std::atan((b - nu) / half_eta) - std::atan((a - nu) / half_eta));
  const double im =
      0.5 * scale *
      std::log(((nu - a) * (nu - a) + half_eta * half_eta) / ((b - nu) * (b - nu) + half_eta * half_eta));
  return {re, im};
}

QuasimodeRates quasimode_reduction(const BathSpec& s, double nu) {
  validate(s);
  constexpr double pi = std::numbers::pi;
  const double d = nu - s.band_center;
  const double w = s.band_halfwidth;
  QuasimodeRates r;
  r.Lambda = 2.0 * pi * s.alpha * s.alpha * s.rho * s.lambda_k * s.lambda_k;
  r.gamma_a_minus = 2.0 * pi * s.rho * s.mu_k * s.mu_k;
  r.chi_cross = 2.0 * pi * s.lambda_k * s.mu_k * s.rho;
  r.pv_shift = d == 0.0 ? 0.0
                        : s.alpha * s.alpha * s.rho * s.lambda_k * s.lambda_k * std::log(std::abs((w + d) / (w - d)));
  return r;
}

Eigen::Matrix2d induced_damping_matrix(const BathSpec& s, double nu) {
  const auto r = quasimode_reduction(s, nu);
  const double cross = s.alpha * r.chi_cross;
  Eigen::Matrix2d m;
  m << r.Lambda, cross, cross, r.gamma_a_minus;
  return m;
}

double eta_correspondence(double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("eta_correspondence: rho must be > 0");
  return std::numbers::pi / rho;
}

double matched_quasimode_coupling(const BathSpec& s, double Gamma) {
  validate(s);
  if (!(Gamma > 0.0)) throw std::invalid_argument("matched_quasimode_coupling: Gamma must be > 0");
  return std::sqrt(std::numbers::pi * Gamma * s.rho / 2.0) * s.lambda_k;
}

} // namespace quasimode
