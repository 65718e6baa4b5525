#pragma once

// Gate and state figures of merit averaged over real product-state inputs
// cos(t)|0> + sin(t)|1> on a uniform grid of t in [0, 2 pi).

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "holo/dynamics.hpp"
#include "holo/qcore.hpp"

namespace holo {

enum class FidelityKind { single_qubit_avg, two_qubit_avg, state };
std::string to_string(FidelityKind kind);

struct FidelityReport {
  double value = 0.0;
  int n_samples = 0;
  FidelityKind definition = FidelityKind::state;
  std::string model_config_hash;

  nlohmann::json to_json() const;
};

/// Deterministic pairwise sum; the result depends only on the input order.
double pairwise_sum(const std::vector<double>& values);
double pairwise_mean(const std::vector<double>& values);

/// Maps a logical initial state |psi_i> to the final density matrix in the physical space.
using EvolveFn = std::function<ComplexMatrix(const ComplexVector&)>;

/// Average of <psi_f|rho(tau)|psi_f> over n inputs. `embedding` lifts logical kets into the
/// space of rho; pass an empty matrix when they coincide.
FidelityReport single_qubit_gate_fidelity(const EvolveFn& evolve, const ComplexMatrix& target,
                                          int n = 1000, const ComplexMatrix& embedding = {});

FidelityReport two_qubit_gate_fidelity(const EvolveFn& evolve, const ComplexMatrix& target,
                                       int n = 100, const ComplexMatrix& embedding = {});

/// Linear channel on a logical subspace: entry (j, k) is the image of |j><k| in the physical
/// space, as returned by lindblad_subspace_map.
struct SubspaceChannel {
  std::vector<std::vector<ComplexMatrix>> images;
  ComplexMatrix embedding;  ///< physical x logical isometry

  ComplexMatrix apply(const ComplexVector& logical) const;
  /// <phys(f)| rho(logical) |phys(f)> without forming rho.
  double overlap(const ComplexVector& logical_in, const ComplexVector& logical_out) const;
};

FidelityReport single_qubit_gate_fidelity(const SubspaceChannel& channel,
                                          const ComplexMatrix& target, int n = 1000);
FidelityReport two_qubit_gate_fidelity(const SubspaceChannel& channel, const ComplexMatrix& target,
                                       int n = 100);

/// No-jump propagator V on a logical block: fidelity |<f|V|i>|^2 summed over the grid.
FidelityReport two_qubit_gate_fidelity_pure(const ComplexMatrix& logical_block,
                                            const ComplexMatrix& target, int n = 100);

struct PopulationSeries {
  std::vector<double> times;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;  ///< values[label][time]
};

PopulationSeries population_trace(const Trajectory& traj, const std::vector<std::string>& labels);

/// Uniform input-angle grid on [0, 2 pi) with n points.
std::vector<double> input_angles(int n);

}  // namespace holo
