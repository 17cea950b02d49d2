#ifndef QUASIMODE_MODEL_HPP
#define QUASIMODE_MODEL_HPP

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "quasimode/params.hpp"

namespace quasimode {

enum class ModeIndex { CPlus, CMinus, APlus, AMinus, BPlus, BMinus };

std::string_view to_string(ModeIndex m);

enum class DiagKind {
  Optical,    ///< rotating at -delta, linewidth kappa
  Mechanical, ///< rotating at omega_m, linewidth gamma
  QuasiMode,  ///< no detuning term at any evaluation frequency, linewidth Gamma
};

struct ModeSpec {
  ModeIndex id;
  DiagKind kind;
  double frequency; ///< ignored for QuasiMode
  double damping;   ///< energy decay rate, also the input-coupling rate
};

/// Real coupling strength between two distinct modes (one Hamiltonian edge).
struct Coupling {
  ModeIndex a;
  ModeIndex b;
  double strength;
};

/// Frequency-domain description of a set of linearly coupled modes.
///
/// The Heisenberg-Langevin equations in the Fourier domain read
///   A(nu) x = diag(sqrt(input_rates)) x_in,
/// with A(nu) = -i (nu - w_j) + damping_j / 2 on the diagonal and
/// +i * coupling off the diagonal (the coupling matrix is real symmetric).
/// Quasi-mode rows carry only Gamma/2 on the diagonal.
class DynamicalMatrix {
public:
  /// Throws std::invalid_argument on duplicate modes, non-positive damping,
  /// self-couplings or couplings to modes not in the list.
  DynamicalMatrix(std::vector<ModeSpec> modes, std::vector<Coupling> couplings);

  const std::vector<ModeSpec>& modes() const { return modes_; }
  const std::vector<Coupling>& couplings() const { return couplings_; }
  std::size_t size() const { return modes_.size(); }

  std::optional<std::size_t> index_of(ModeIndex m) const;
  const ModeSpec& mode(ModeIndex m) const;

  Eigen::VectorXd input_rates() const;
  /// Real symmetric matrix of coupling strengths (zero diagonal).
  Eigen::MatrixXd coupling_matrix() const;
  /// A(nu), the coefficient operator acting on the mode amplitudes.
  Eigen::MatrixXcd coefficient_matrix(double nu) const;

private:
  std::vector<ModeSpec> modes_;
  std::vector<Coupling> couplings_;
};

struct PumpAmplitudes {
  double alpha;
  double beta;
};

/// alpha^2 = eta_conv * P_plus, beta^2 = eta_conv * P_minus for
/// detuning-corrected powers. Throws std::domain_error on negative powers
/// or non-positive eta_conv.
PumpAmplitudes pump_amplitudes(double p_plus, double p_minus, double eta_conv);

struct Cooperativities {
  double alpha; ///< C_alpha = 4 alpha^2 g^2 / (Gamma kappa)
  double beta;  ///< C_beta  = 4 beta^2 g^2 / (Gamma kappa)
};

Cooperativities cooperativities(const SystemParams& p);

/// Pump amplitude squared that yields a given co-propagating cooperativity.
double alpha_squared_for_cooperativity(const SystemParams& p, double c_alpha);

enum class CutTopology {
  CutB, ///< {c+, c-, a-, b+}: alpha g (c+,b+), beta lambda (c-,a-), V0 (a-,b+)
  CutC, ///< {c-, c+, a+, b-}: beta g (c-,b-), alpha lambda (c+,a+), V0 (a+,b-)
};

/// Four-mode loop-cut system; V1 is ignored.
DynamicalMatrix build_cut_system(const SystemParams& p, CutTopology topology);

/// Six-mode system with all eight coupling edges.
DynamicalMatrix build_full_system(const SystemParams& p);

/// a+/a- pair coupled only by V1, with both optical modes adiabatically
/// eliminated at nu = -delta: linewidths gamma + 4 alpha^2 lambda^2/kappa and
/// gamma + 4 beta^2 lambda^2/kappa. V0 is ignored.
DynamicalMatrix build_v1_pair(const SystemParams& p);

} // namespace quasimode

#endif
