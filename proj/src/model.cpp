#include "quasimode/model.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace quasimode {

std::string_view to_string(ModeIndex m) {
  switch (m) {
  case ModeIndex::CPlus: return "c+";
  case ModeIndex::CMinus: return "c-";
  case ModeIndex::APlus: return "a+";
  case ModeIndex::AMinus: return "a-";
  case ModeIndex::BPlus: return "b+";
  case ModeIndex::BMinus: return "b-";
  }
  return "?";
}

DynamicalMatrix::DynamicalMatrix(std::vector<ModeSpec> modes, std::vector<Coupling> couplings)
    : modes_(std::move(modes)), couplings_(std::move(couplings)) {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (!(modes_[i].damping > 0.0) || !std::isfinite(modes_[i].damping))
      throw std::invalid_argument("DynamicalMatrix: damping of " +
                                  std::string(to_string(modes_[i].id)) + " must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (modes_[i].id == modes_[j].id)
        throw std::invalid_argument("DynamicalMatrix: duplicate mode " +
                                    std::string(to_string(modes_[i].id)));
  }
  for (const auto& c : couplings_) {
    if (c.a == c.b) throw std::invalid_argument("DynamicalMatrix: self-coupling");
    if (!index_of(c.a) || !index_of(c.b))
      throw std::invalid_argument("DynamicalMatrix: coupling references a missing mode");
    if (!std::isfinite(c.strength)) throw std::invalid_argument("DynamicalMatrix: non-finite coupling");
  }
}

std::optional<std::size_t> DynamicalMatrix::index_of(ModeIndex m) const {
  for (std::size_t i = 0; i < modes_.size(); ++i)
    if (modes_[i].id == m) return i;
  return std::nullopt;
}

const ModeSpec& DynamicalMatrix::mode(ModeIndex m) const {
  auto i = index_of(m);
  if (!i) throw std::out_of_range("mode " + std::string(to_string(m)) + " is not part of the system");
  return modes_[*i];
}

Eigen::VectorXd DynamicalMatrix::input_rates() const {
  Eigen::VectorXd rates(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) rates[i] = modes_[i].damping;
  return rates;
}

Eigen::MatrixXd DynamicalMatrix::coupling_matrix() const {
  const auto n = static_cast<Eigen::Index>(modes_.size());
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (const auto& c : couplings_) {
    const auto i = static_cast<Eigen::Index>(*index_of(c.a));
    const auto j = static_cast<Eigen::Index>(*index_of(c.b));
    v(i, j) += c.strength;
    v(j, i) += c.strength;
  }
  return v;
}

Eigen::MatrixXcd DynamicalMatrix::coefficient_matrix(double nu) const {
  using namespace std::complex_literals;
  Eigen::MatrixXcd a = 1i * coupling_matrix().cast<std::complex<double>>();
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    const auto& m = modes_[k];
    const auto i = static_cast<Eigen::Index>(k);
    const double detuning = m.kind == DiagKind::QuasiMode ? 0.0 : nu - m.frequency;
    a(i, i) = -1i * detuning + m.damping / 2.0;
  }
  return a;
}

PumpAmplitudes pump_amplitudes(double p_plus, double p_minus, double eta_conv) {
  if (!(p_plus >= 0.0) || !(p_minus >= 0.0))
    throw std::domain_error("pump_amplitudes: powers must be >= 0");
  if (!(eta_conv > 0.0)) throw std::domain_error("pump_amplitudes: eta_conv must be > 0");
  return {std::sqrt(eta_conv * p_plus), std::sqrt(eta_conv * p_minus)};
}

Cooperativities cooperativities(const SystemParams& p) {
  validate(p);
  const double scale = 4.0 * p.g_c * p.g_c / (p.Gamma * p.kappa);
  return {scale * p.alpha * p.alpha, scale * p.beta * p.beta};
}

double alpha_squared_for_cooperativity(const SystemParams& p, double c_alpha) {
  return c_alpha * p.Gamma * p.kappa / (4.0 * p.g_c * p.g_c);
}

namespace {

ModeSpec optical(ModeIndex id, const SystemParams& p) {
  return {id, DiagKind::Optical, -p.delta, p.kappa};
}
ModeSpec mechanical(ModeIndex id, const SystemParams& p) {
  return {id, DiagKind::Mechanical, p.omega_m, p.gamma};
}
ModeSpec quasimode(ModeIndex id, const SystemParams& p) {
  return {id, DiagKind::QuasiMode, 0.0, p.Gamma};
}

} // namespace

DynamicalMatrix build_cut_system(const SystemParams& p, CutTopology topology) {
  validate(p);
  using M = ModeIndex;
  if (topology == CutTopology::CutB) {
    return DynamicalMatrix(
        {optical(M::CPlus, p), optical(M::CMinus, p), mechanical(M::AMinus, p), quasimode(M::BPlus, p)},
        {{M::CPlus, M::BPlus, p.alpha * p.g_c},
         {M::CMinus, M::AMinus, p.beta * p.lambda_c},
         {M::AMinus, M::BPlus, p.V0}});
  }
  return DynamicalMatrix(
      {optical(M::CMinus, p), optical(M::CPlus, p), mechanical(M::APlus, p), quasimode(M::BMinus, p)},
      {{M::CMinus, M::BMinus, p.beta * p.g_c},
       {M::CPlus, M::APlus, p.alpha * p.lambda_c},
       {M::APlus, M::BMinus, p.V0}});
}

DynamicalMatrix build_full_system(const SystemParams& p) {
  validate(p);
  using M = ModeIndex;
  return DynamicalMatrix(
      {optical(M::CPlus, p), optical(M::CMinus, p), mechanical(M::APlus, p),
       mechanical(M::AMinus, p), quasimode(M::BPlus, p), quasimode(M::BMinus, p)},
      {{M::CPlus, M::APlus, p.alpha * p.lambda_c},
       {M::CPlus, M::BPlus, p.alpha * p.g_c},
       {M::CMinus, M::AMinus, p.beta * p.lambda_c},
       {M::CMinus, M::BMinus, p.beta * p.g_c},
       {M::APlus, M::BMinus, p.V0},
       {M::AMinus, M::BPlus, p.V0},
       {M::APlus, M::AMinus, p.V1},
       {M::BPlus, M::BMinus, p.V1}});
}

DynamicalMatrix build_v1_pair(const SystemParams& p) {
  validate(p);
  using M = ModeIndex;
  const double optical = 4.0 * p.lambda_c * p.lambda_c / p.kappa;
  return DynamicalMatrix({{M::APlus, DiagKind::Mechanical, p.omega_m, p.gamma + optical * p.alpha * p.alpha},
                          {M::AMinus, DiagKind::Mechanical, p.omega_m, p.gamma + optical * p.beta * p.beta}},
                         {{M::APlus, M::AMinus, p.V1}});
}

} // namespace quasimode
