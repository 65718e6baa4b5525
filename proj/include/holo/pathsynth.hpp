#pragma once

// Pulse synthesis for longitude-latitude holonomic paths on the auxiliary Bloch sphere.
//
// The auxiliary state starts at the north pole, moves down the meridian xi = xi1 to
// polar angle chi, runs along the latitude circle to xi2 and climbs back along
// xi = xi2. With a resonant drive the phase picked up is an unconventional geometric
// phase: the dynamical part stays a fixed multiple eta(chi) of the geometric part.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "holo/qcore.hpp"

namespace holo {

/// Raised for chi inside the guard band around pi/2 where eta diverges.
class SingularPathError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Rotation by gamma about n = (-sin(theta)cos(phi), -sin(theta)sin(phi), cos(theta)).
struct GateSpec {
  double theta = 0.0;
  double phi = 0.0;
  double gamma = 0.0;

  static GateSpec rx(double gamma) { return {kPi / 2, kPi, gamma}; }
  static GateSpec ry(double gamma) { return {kPi / 2, -kPi / 2, gamma}; }
  static GateSpec rz(double gamma) { return {0.0, 0.0, gamma}; }
};

struct PathSpec {
  double chi = kPi;
  double xi1 = 0.0;
  /// Latitude end point. Derived from the gate angle when empty.
  std::optional<double> xi2;
};

enum class EnvelopeKind { sin2, flat };

std::string to_string(EnvelopeKind kind);
EnvelopeKind envelope_from_string(const std::string& name);

/// Half-width of the excluded band around chi = pi/2.
inline constexpr double kEquatorGuard = 1e-6;

/// eta = -(1 + sec chi).
double eta_of_chi(double chi);

/// Latitude sweep xi2 - xi1 = 2 gamma / (sec chi - 1) that yields total phase gamma.
double solve_xi_span(double gamma, double chi);

struct PhasePair {
  double geometric = 0.0;
  double dynamical = 0.0;
};

/// Geometric and dynamical phase of the latitude path; they sum to gamma.
PhasePair closed_form_phases(double gamma, double chi);

/// e^{i gamma/2} exp(-i gamma/2 n.sigma), global phase included.
ComplexMatrix target_unitary(const GateSpec& gate);

/// Piecewise drive realizing a longitude-latitude loop. Times are in the same
/// units as 1/omega_max.
class PulseSchedule {
 public:
  PulseSchedule(GateSpec gate, double chi, double xi1, double xi2, double omega_max,
                EnvelopeKind envelope, double tau, double tau1, double tau2);

  const GateSpec& gate() const { return gate_; }
  double chi() const { return chi_; }
  double xi1() const { return xi1_; }
  double xi2() const { return xi2_; }
  double omega_max() const { return omega_max_; }
  EnvelopeKind envelope() const { return envelope_; }
  double tau() const { return tau_; }
  double tau1() const { return tau1_; }
  double tau2() const { return tau2_; }

  /// Rabi envelope Omega(t) >= 0.
  double omega(double t) const;
  /// Integral of Omega from 0 to t.
  double cumulative_area(double t) const;
  double total_area() const { return cumulative_area(tau_); }
  /// Pulse area S = total_area / 2.
  double pulse_area() const { return 0.5 * total_area(); }

  double phase0(double t) const;
  /// Segment index 0, 1, 2 containing t.
  int segment(double t) const;
  /// phase0 evaluated with the law of a given segment, regardless of where t falls.
  double phase0_on(int segment, double t) const;
  double phase1(double t) const { return phase0(t) - gate_.phi; }
  double detuning(double /*t*/) const { return 0.0; }

  nlohmann::json to_json() const;
  /// Adds a "samples" table of rows [t, Omega, phase0, phase1] with n + 1 evenly spaced points.
  nlohmann::json to_json(int samples) const;

 private:
  GateSpec gate_;
  double chi_;
  double xi1_;
  double xi2_;
  double omega_max_;
  EnvelopeKind envelope_;
  double tau_;
  double tau1_;
  double tau2_;
};

/// Area of the latitude segment, 2|gamma| cot(chi/2); zero at chi = pi.
double latitude_area(double gamma, double chi);

PulseSchedule synthesize(const GateSpec& gate, const PathSpec& path, double omega_max,
                         EnvelopeKind envelope);

}  // namespace holo
