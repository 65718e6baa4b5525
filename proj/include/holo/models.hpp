#pragma once

// Hamiltonians, error terms and collapse operators for the three simulated systems:
// the abstract Lambda system, one DFS logical qubit on a transmon-cavity-transmon
// chain, and two DFS logical qubits coupled through a parametrically driven
// transmon pair.
//
// Units: time in microseconds, frequencies as angular frequencies in rad/us.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "holo/pathsynth.hpp"
#include "holo/qcore.hpp"

namespace holo {

/// 2 pi x value, converting a frequency in MHz into rad/us.
constexpr double mhz(double value) { return 2.0 * kPi * value; }
constexpr double khz(double value) { return 2.0 * kPi * value * 1e-3; }

double bessel_j(int order, double x);
double bessel_j1(double x);
/// Smallest nonnegative x with J1(x) = value, for value in [0, max J1].
double inverse_bessel_j1(double value);
/// Location of the first maximum of J1.
inline constexpr double kBesselJ1ArgMax = 1.8411837813406593;

struct NoiseChannel {
  ComplexMatrix op;
  double rate = 0.0;
  std::string name;
};

/// Collapse operators with their rates. Each entry is one Lindblad channel.
struct NoiseModel {
  std::vector<NoiseChannel> channels;

  void validate() const;
  NoiseModel scaled(double factor) const;
  bool empty() const { return channels.empty(); }
};

// ---------------------------------------------------------------------------
// Lambda system on {|0>, |1>, |a>}

struct LambdaModel {
  PulseSchedule schedule;
  double delta_err = 0.0;  ///< detuning error, in units of omega_max
  double eps_err = 0.0;    ///< relative Rabi error
};

inline constexpr int kLambdaAux = 2;
std::vector<std::string> lambda_labels();

ComplexMatrix lambda_hamiltonian(const LambdaModel& model, double t);

/// sigma_- = |0><a| + |1><a| and sigma_z = 2|a><a| - |1><1| - |0><0|, rates omega_max / 2000.
NoiseModel lambda_collapse_ops(double omega_max);

// ---------------------------------------------------------------------------
// Generic transmon / cavity chain

struct ChainSite {
  std::string name;
  double frequency = 0.0;
  double anharmonicity = 0.0;  ///< zero for a cavity
  int levels = 2;
};

struct ChainCoupling {
  int a = 0;
  int b = 0;
  double g = 0.0;
};

/// Parametric frequency drive F(t) = beta sin(nu t + phase(t)) on one site.
struct DriveSpec {
  int site = 0;
  double bessel_arg = 0.0;
  double modulation = 0.0;
  std::function<double(double)> phase;

  double value(double t) const;
};

class TransmonChainModel {
 public:
  TransmonChainModel(std::vector<ChainSite> sites, std::vector<ChainCoupling> couplings,
                     std::vector<DriveSpec> drives = {});

  Eigen::Index dim() const { return dim_; }
  const std::vector<ChainSite>& sites() const { return sites_; }
  const std::vector<ChainCoupling>& couplings() const { return couplings_; }
  const std::vector<DriveSpec>& drives() const { return drives_; }

  /// Truncated annihilation operator of one site on the full product space.
  ComplexMatrix lowering(int site) const;
  ComplexMatrix number(int site) const;
  ComplexMatrix total_number() const;
  /// |n><n| on one site, embedded.
  ComplexMatrix level_projector(int site, int level) const;

  /// Product basis index of a list of per-site occupations.
  Eigen::Index index(const std::vector<int>& occupations) const;
  std::vector<std::string> labels() const;

  /// Lab-frame Hamiltonian with anharmonic ladders and exchange couplings.
  ComplexMatrix static_hamiltonian() const;

 private:
  ComplexMatrix embed(int site, const ComplexMatrix& local) const;

  std::vector<ChainSite> sites_;
  std::vector<ChainCoupling> couplings_;
  std::vector<DriveSpec> drives_;
  Eigen::Index dim_ = 1;
};

/// Interaction-picture Hamiltonian with the drive exponentials e^{iF(t)} evaluated exactly.
ComplexMatrix sc_driven_hamiltonian(const TransmonChainModel& model, double t);

// ---------------------------------------------------------------------------
// One DFS logical qubit: T1 - auxiliary (cavity or transmon) - T2

enum class ScConfig { cavity, three_transmon, two_qubit };
std::string to_string(ScConfig config);
ScConfig sc_config_from_string(const std::string& name);

struct ScSingleParams {
  double g = mhz(10.0);
  double beta = 1.7;
  double detuning = mhz(390.0);  ///< Delta_j = omega_a - omega_j
  double kappa = khz(3.0);
};

/// Site order (T1, aux, T2), two levels each.
inline constexpr int kSiteT1 = 0;
inline constexpr int kSiteAux = 1;
inline constexpr int kSiteT2 = 2;

struct ScErrors {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
};

class ScSingleQubit {
 public:
  explicit ScSingleQubit(ScSingleParams params);

  const ScSingleParams& params() const { return params_; }
  /// Three-site chain without drives; used for operators and basis bookkeeping.
  const TransmonChainModel& chain() const { return chain_; }
  Eigen::Index dim() const { return chain_.dim(); }

  /// Lambda-picture peak Rabi frequency reachable for a gate, 2 g J1(beta) / max(sin, cos)(theta/2).
  double lambda_omega(const GateSpec& gate) const;
  /// Flat-envelope schedule whose transmon amplitudes both stay within 2 g J1(beta).
  PulseSchedule schedule(const GateSpec& gate, const PathSpec& path) const;

  /// Indices of |0>_L = |100>, |1>_L = |001> and |a> = |010>.
  Eigen::Index logical0() const { return logical0_; }
  Eigen::Index logical1() const { return logical1_; }
  Eigen::Index auxiliary() const { return auxiliary_; }

  /// |10><01| between transmon j (0 for T1, 1 for T2) and the auxiliary site.
  ComplexMatrix exchange(int transmon) const;

  /// Chain with the parametric drives attached for this schedule.
  TransmonChainModel driven_chain(const PulseSchedule& schedule) const;

  /// Rotating-wave effective Hamiltonian, embedded in the physical space.
  ComplexMatrix effective_hamiltonian(const PulseSchedule& schedule, double t) const;

 private:
  ScSingleParams params_;
  TransmonChainModel chain_;
  Eigen::Index logical0_;
  Eigen::Index logical1_;
  Eigen::Index auxiliary_;
};

/// Transmon amplitudes Omega_j = Omega sin(theta/2), Omega cos(theta/2) of a schedule.
std::array<double, 2> transmon_amplitudes(const PulseSchedule& schedule);

/// Effective Lambda Hamiltonian on {|0>_L, |1>_L, |a>} with Omega_j = 2 g J1(beta_j).
ComplexMatrix sc_effective_hamiltonian(const PulseSchedule& schedule, double g, double beta,
                                       double t);

struct ErrorHamiltonians {
  ComplexMatrix delta;
  ComplexMatrix epsilon;
};

/// Frequency-drift and amplitude-deviation terms on the physical space. In the
/// three-transmon layout the auxiliary transmon drifts by -delta1.
ErrorHamiltonians sc_error_hamiltonians(const ScSingleQubit& system, const ScErrors& errors,
                                        ScConfig config, const PulseSchedule& schedule,
                                        double t);

// ---------------------------------------------------------------------------
// Two DFS logical qubits: T1 T2 | T3 T4, coupled through T2 - T3

struct TwoQubitParams {
  double g23 = mhz(8.0);
  double alpha2 = mhz(300.0);
  double alpha3 = mhz(330.0);
  double beta3 = 2.0;
  double delta3 = mhz(700.0);  ///< omega_3 - omega_2
  double kappa = khz(3.0);
  /// Modulation frequency. Resonant with |11> <-> |02> (delta3 - alpha3) when unset.
  std::optional<double> nu3;

  double modulation() const { return nu3.value_or(delta3 - alpha3); }
  /// Omega' = 2 sqrt(2) g23 J1(beta3).
  double omega_prime() const;
};

enum class TwoQubitMode { full, effective, exact };
std::string to_string(TwoQubitMode mode);
TwoQubitMode two_qubit_mode_from_string(const std::string& name);

/// Pair Hamiltonian on T2 (x) T3, three levels each, index 3 * n2 + n3.
///  full: the three J1-weighted exchange terms with their residual oscillations.
///  effective: only the resonant |11> <-> |02> term.
///  exact: bare exchange couplings times e^{iF3(t)} without Bessel truncation.
ComplexMatrix two_qubit_hamiltonian(const TwoQubitParams& params,
                                    const std::function<double(double)>& phase3, double t,
                                    TwoQubitMode mode);

/// Four three-level transmons restricted to at most max_excitations quanta
/// (negative keeps the full 81-dimensional space).
class TwoQubitSpace {
 public:
  explicit TwoQubitSpace(int max_excitations = 2);

  Eigen::Index dim() const { return static_cast<Eigen::Index>(states_.size()); }
  const std::vector<std::array<int, 4>>& states() const { return states_; }
  Eigen::Index index(const std::array<int, 4>& occupations) const;
  std::vector<std::string> labels() const;

  ComplexMatrix lowering(int site) const;
  ComplexMatrix number(int site) const;

  /// Lift an operator on T2 (x) T3 (9 x 9) into this space, identity on T1 and T4.
  ComplexMatrix embed_pair(const ComplexMatrix& pair_op) const;

  /// Physical index of the logical state |q1 q2>_L.
  Eigen::Index logical_index(int q1, int q2) const;

 private:
  std::vector<std::array<int, 4>> states_;
};

// ---------------------------------------------------------------------------

/// Collective decay and dephasing operators. cavity/three_transmon act on the
/// single-qubit chain, two_qubit on the given four-transmon space.
NoiseModel sc_collapse_ops(ScConfig config, double kappa, const ScSingleQubit* single,
                           const TwoQubitSpace* pair);

enum class DfsSubspace { S1, S2 };

/// Embed a logical state: S1 into the T1-aux-T2 chain, S2 into the given four-transmon space
/// (default: the two-excitation truncation).
QuantumState dfs_encode(const QuantumState& logical, DfsSubspace subspace);
QuantumState dfs_encode(const QuantumState& logical, const TwoQubitSpace& space);

/// diag(1, 1, 1, e^{i gamma}).
ComplexMatrix cp_target(double gamma);

// ---------------------------------------------------------------------------
// Configuration files (frequencies in MHz, rates in kHz)

struct ModelConfig {
  ScSingleParams single;
  TwoQubitParams pair;
  double lambda_kappa_ratio = 1.0 / 2000.0;
};

ModelConfig model_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ModelConfig& config);

}  // namespace holo
