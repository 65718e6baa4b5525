#pragma once

// Time evolution: piecewise-exponential unitary propagation, RK4 Lindblad integration,
// and diagnostics along the auxiliary-state path.

#include <functional>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "holo/pathsynth.hpp"
#include "holo/models.hpp"
#include "holo/qcore.hpp"

namespace holo {

using HamiltonianFn = std::function<ComplexMatrix(double)>;

/// Raised when the step-halving diagnostic exceeds its tolerance.
class GridTooCoarseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimeGrid {
  double t0 = 0.0;
  double t1 = 0.0;
  int steps = 1;
  /// Extra nodes where H(t) jumps; no step straddles one.
  std::vector<double> breaks;

  TimeGrid() = default;
  TimeGrid(double start, double end, int n, std::vector<double> breakpoints = {});

  double dt() const { return (t1 - t0) / steps; }
  double time(int k) const { return t0 + (t1 - t0) * static_cast<double>(k) / steps; }
  TimeGrid refined(int factor = 2) const { return TimeGrid(t0, t1, steps * factor, breaks); }
  /// Uniform nodes merged with the interior breakpoints.
  std::vector<double> nodes() const;

  /// Uniform grid over [0, tau] with the segment boundaries tau1, tau2 as breakpoints.
  static TimeGrid over(const PulseSchedule& schedule, int steps);
};

inline constexpr int kLambdaSteps = 4000;
inline constexpr int kScFullSteps = 40000;
inline constexpr int kTwoQubitSteps = 3000;

/// Largest dt * ||H(t)||_2 over the grid midpoints.
double grid_resolution(const HamiltonianFn& h, const TimeGrid& grid);

struct Trajectory {
  std::vector<double> times;
  std::vector<QuantumState> states;
  std::string description;
  /// Max entrywise change of the final state when dt is halved; NaN if not checked.
  double halving_discrepancy = std::numeric_limits<double>::quiet_NaN();

  const QuantumState& final_state() const { return states.back(); }
};

/// Ordered product of exp(-i H(t_mid) dt).
ComplexMatrix propagate_unitary(const HamiltonianFn& h, const TimeGrid& grid);

/// Evolve a pure state, storing every record_every-th step (and the final one).
Trajectory propagate_state(const HamiltonianFn& h, const QuantumState& psi0, const TimeGrid& grid,
                           int record_every = 1);

/// Max entrywise difference between propagate_unitary on grid and on the halved grid.
double unitary_halving_discrepancy(const HamiltonianFn& h, const TimeGrid& grid);

struct LindbladOptions {
  /// 0 stores only the initial and final state.
  int record_every = 0;
  bool check_step_halving = false;
  double halving_tolerance = 1e-5;
};

/// RK4 integration of d rho/dt = -i[H, rho] + sum_k (kappa_k / 2)(2 c rho c^+ - c^+c rho - rho c^+c).
Trajectory propagate_lindblad(const HamiltonianFn& h, const NoiseModel& noise,
                              const QuantumState& rho0, const TimeGrid& grid,
                              const LindbladOptions& options = {});

/// Same integrator applied to arbitrary (not necessarily Hermitian) operators that share
/// one time grid. The map is linear, so evolving |j><k| gives the full channel.
std::vector<ComplexMatrix> propagate_lindblad_batch(const HamiltonianFn& h, const NoiseModel& noise,
                                                    std::vector<ComplexMatrix> operators,
                                                    const TimeGrid& grid);

/// Channel restricted to the span of the columns of an isometry V: element (j, k) of the
/// result is the evolved |v_j><v_k|. Only j <= k is integrated; the rest follow by adjoint.
std::vector<std::vector<ComplexMatrix>> lindblad_subspace_map(const HamiltonianFn& h,
                                                              const NoiseModel& noise,
                                                              const ComplexMatrix& isometry,
                                                              const TimeGrid& grid);

/// No-jump propagator on an invariant sector. Requires H to leave the sector invariant,
/// every collapse operator to act on it as a multiple of the identity, and none to feed
/// it from outside. Then the sector block of rho evolves as V rho V^+ with V generated by
/// H - (i/2) sum kappa (c^+c - |lambda|^2) restricted to the sector (RK4).
ComplexMatrix propagate_sector(const HamiltonianFn& h, const NoiseModel& noise,
                               const std::vector<Eigen::Index>& sector, const TimeGrid& grid);

// ---------------------------------------------------------------------------

struct PathTrajectory {
  std::vector<double> times;
  std::vector<double> chi;
  std::vector<double> xi;
};

inline constexpr double kPoleWindow = 1e-2;

/// RK4 of chi' = Omega sin(phi0 - xi), xi' = -Omega cot(chi) cos(phi0 - xi), starting at the
/// north pole. Within kPoleWindow of either pole xi is pinned to its segment value.
PathTrajectory path_reconstruct(const PulseSchedule& schedule, const TimeGrid& grid);

struct HolonomyAccumulators {
  double a11 = 0.0;
  double k11 = 0.0;
};

/// A11 = -1/2 int xi' (1 - cos chi), K11 = -int <psi1|H|psi1>, with
/// |psi1> = cos(chi/2)|mu> + sin(chi/2) e^{i xi}|a>.
HolonomyAccumulators holonomy_accumulators(const PathTrajectory& path, const GateSpec& gate,
                                           const HamiltonianFn& h);
HolonomyAccumulators holonomy_accumulators(const std::function<double(double)>& chi_t,
                                           const std::function<double(double)>& xi_t,
                                           const GateSpec& gate, const HamiltonianFn& h,
                                           const TimeGrid& grid);

// ---------------------------------------------------------------------------

enum class CsvColumns { populations, amplitudes };

/// Columns t, then populations of the named basis states or Re/Im of every amplitude.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, CsvColumns columns,
                          const std::vector<std::string>& labels = {});

}  // namespace holo
