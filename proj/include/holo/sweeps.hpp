#pragma once

// Experiment runners and grid sweeps behind every figure.

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "holo/dynamics.hpp"
#include "holo/metrics.hpp"
#include "holo/models.hpp"
#include "holo/pathsynth.hpp"

namespace holo {

inline constexpr const char* kCodeVersion = "holopath-0.1.0";

// ---------------------------------------------------------------------------
// Single runs

struct LambdaRunOptions {
  int steps = kLambdaSteps;
  int n_inputs = 1000;
  double omega_max = 1.0;
  /// kappa_- = kappa_z = ratio * omega_max.
  double kappa_ratio = 1.0 / 2000.0;
  EnvelopeKind envelope = EnvelopeKind::sin2;
};

/// Lambda-model gate fidelity under detuning error delta, Rabi error eps and decoherence.
FidelityReport lambda_gate_fidelity(const GateSpec& gate, double chi, double delta, double eps,
                                    const LambdaRunOptions& options = {});

/// Population of |a> along the gate, starting from the bright state |mu>.
Trajectory lambda_bright_state_trajectory(const GateSpec& gate, double chi,
                                          const LambdaRunOptions& options = {},
                                          int record_every = 10);

enum class ScMode { full, effective };
std::string to_string(ScMode mode);
ScMode sc_mode_from_string(const std::string& name);

struct ScRunOptions {
  ScMode mode = ScMode::full;
  ScConfig config = ScConfig::cavity;
  int steps = 0;  ///< 0 selects 40000 (full) or 2000 (effective)
  int n_inputs = 1000;
};

FidelityReport sc_gate_fidelity(const GateSpec& gate, const PathSpec& path,
                                const ScSingleParams& params, const ScErrors& errors = {},
                                const ScRunOptions& options = {});

enum class PairRoute { lindblad, sector };
std::string to_string(PairRoute route);

struct TwoQubitRunOptions {
  TwoQubitMode mode = TwoQubitMode::full;
  PairRoute route = PairRoute::lindblad;
  int steps = kTwoQubitSteps;
  int n_inputs = 100;
  double chi = 0.25 * kPi;
  double gamma = 0.25 * kPi;
  double phase_offset = 0.0;
  /// Excitation cutoff of the four-transmon space; negative keeps all 81 states.
  int max_excitations = 2;
  /// Store populations every this many steps (Lindblad route only, 0 = none).
  int record_every = 0;
};

struct TwoQubitResult {
  FidelityReport gate;
  FidelityReport state;
  double tau = 0.0;
  std::optional<PopulationSeries> populations;
};

/// Holonomic CP(gamma) between two DFS logical qubits.
TwoQubitResult two_qubit_cp(const TwoQubitParams& params, const TwoQubitRunOptions& options = {});

/// The schedule driving T3: a theta = 0 path on the |11> <-> |02> transition at Omega'.
PulseSchedule two_qubit_schedule(const TwoQubitParams& params, double gamma, double chi);

// ---------------------------------------------------------------------------
// Grids

struct SweepAxis {
  std::string name;
  std::string unit;
  std::vector<double> values;
};

class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepGrid {
  std::vector<SweepAxis> axes;
  /// What is being computed; serialized into the sidecar and hash.
  nlohmann::json payload = nlohmann::json::object();
  std::size_t max_cells = 200000;

  std::size_t size() const;
  std::vector<std::size_t> shape() const;
  std::vector<double> coordinates(std::size_t flat) const;
  /// Throws for empty or non-monotone axes and for grids over budget.
  void validate() const;
};

enum class SweepStat { fidelity, infidelity, area_over_pi, max_population };
std::string to_string(SweepStat stat);

struct MaskedCell {
  std::size_t index = 0;
  std::string reason;
};

struct SweepResult {
  SweepGrid grid;
  SweepStat stat = SweepStat::fidelity;
  std::vector<double> values;
  /// Optional per-cell text, e.g. the pulse-area region.
  std::vector<std::string> labels;
  std::string label_name;
  std::vector<MaskedCell> masked;
  double runtime_seconds = 0.0;

  double at(const std::vector<std::size_t>& index) const;
  /// Mean over unmasked cells (pairwise summation).
  double mean() const;
};

using CellFn = std::function<double(const std::vector<double>& coordinates)>;

/// Evaluate every cell on a bounded pool of worker threads. Cell failures become NaN with a
/// reason; results do not depend on the worker count.
SweepResult run_sweep(const SweepGrid& grid, const CellFn& cell, SweepStat stat, int workers = 1);

void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// Parses the CSV layout written by write_sweep_csv back into axis coordinates and values.
SweepResult read_sweep_csv(std::istream& in, SweepStat stat);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string content_hash(const std::string& bytes);
nlohmann::json sweep_sidecar(const SweepResult& result, const std::string& csv_bytes);

/// Evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int n);

// ---------------------------------------------------------------------------
// Figure sweeps

/// Region of the pulse-area map: I (S > 2 pi), II (pi < S <= 2 pi), III (S <= pi).
std::string area_region(double area);

SweepResult pulse_area_map(const std::vector<double>& chi_values,
                           const std::vector<double>& gamma_values, int workers = 1);

enum class ErrorKind { delta, epsilon };
std::string to_string(ErrorKind kind);
ErrorKind error_kind_from_string(const std::string& name);

SweepResult fidelity_vs_chi_error(const GateSpec& gate, ErrorKind kind,
                                  const std::vector<double>& chi_values,
                                  const std::vector<double>& error_values,
                                  const LambdaRunOptions& options = {}, int workers = 1);

SweepResult infidelity_surface(const GateSpec& gate, double chi,
                               const std::vector<double>& delta_values,
                               const std::vector<double>& eps_values,
                               const LambdaRunOptions& options = {}, int workers = 1);

/// Fidelity against error value (rad/us) on axes (chi, error). The effective model is used.
SweepResult sc_robustness_curves(const GateSpec& gate, ScConfig config, ErrorKind kind,
                                 const std::vector<double>& chi_values,
                                 const std::vector<double>& values, const ScSingleParams& params,
                                 int workers = 1, int steps = 0, int n_inputs = 1000);

struct ParamSearchOptions {
  TwoQubitMode mode = TwoQubitMode::full;
  /// Modulation frequency held fixed across the scan; unset tracks delta3 - alpha3.
  std::optional<double> nu3;
  int steps = kTwoQubitSteps;
  int n_inputs = 100;
};

/// F2 of CP(pi/4) on axes (beta3, delta3 in rad/us), via the no-jump sector propagator.
SweepResult two_qubit_param_search(const std::vector<double>& beta3_values,
                                   const std::vector<double>& delta3_values,
                                   const TwoQubitParams& base, const ParamSearchOptions& options,
                                   int workers = 1);

/// Max over t of P(|a>) for each chi, starting from the bright state.
SweepResult aux_population_peaks(const GateSpec& gate, const std::vector<double>& chi_values,
                                 const LambdaRunOptions& options = {}, int workers = 1);

}  // namespace holo
