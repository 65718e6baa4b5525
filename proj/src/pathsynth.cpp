#include "holo/pathsynth.hpp"

#include <cmath>
#include <limits>

namespace holo {

namespace {

void check_chi_range(double chi) {
  if (!std::isfinite(chi) || chi <= 0.0 || chi > kPi + 1e-12) {
    throw std::invalid_argument("path polar angle chi must lie in (0, pi]");
  }
}

void check_off_equator(double chi) {
  if (std::abs(chi - kPi / 2) <= kEquatorGuard) {
    throw SingularPathError("chi is at the equator where eta = -(1 + sec chi) diverges");
  }
}

double sign_of(double x) { return (x > 0.0) - (x < 0.0); }

// cot(chi/2) written as sin/(1 - cos) so that chi = pi gives an exact zero-ish value.
double half_cot(double chi) { return std::sin(chi) / (1.0 - std::cos(chi)); }

double sin2_cumulative(double omega_max, double tau, double t) {
  return omega_max * (0.5 * t - tau / (4.0 * kPi) * std::sin(2.0 * kPi * t / tau));
}

// Smallest t in [0, tau] with cumulative area equal to target, by bisection.
double invert_area(double omega_max, double tau, double target) {
  double lo = 0.0;
  double hi = tau;
  const double total = sin2_cumulative(omega_max, tau, tau);
  const double tol = 1e-13 * total;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double a = sin2_cumulative(omega_max, tau, mid);
    if (std::abs(a - target) <= tol) return mid;
    (a < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string to_string(EnvelopeKind kind) { return kind == EnvelopeKind::sin2 ? "sin2" : "flat"; }

EnvelopeKind envelope_from_string(const std::string& name) {
  if (name == "sin2") return EnvelopeKind::sin2;
  if (name == "flat") return EnvelopeKind::flat;
  throw std::invalid_argument("unknown envelope kind: " + name);
}

double eta_of_chi(double chi) {
  check_chi_range(chi);
  check_off_equator(chi);
  return -(1.0 + 1.0 / std::cos(chi));
}

double solve_xi_span(double gamma, double chi) {
  check_chi_range(chi);
  check_off_equator(chi);
  return 2.0 * gamma / (1.0 / std::cos(chi) - 1.0);
}

PhasePair closed_form_phases(double gamma, double chi) {
  const double span = solve_xi_span(gamma, chi);
  const double c = std::cos(chi);
  const double s = std::sin(chi);
  return {-0.5 * span * (1.0 - c), 0.5 * span * s * s / c};
}

ComplexMatrix target_unitary(const GateSpec& gate) {
  const double nx = -std::sin(gate.theta) * std::cos(gate.phi);
  const double ny = -std::sin(gate.theta) * std::sin(gate.phi);
  const double nz = std::cos(gate.theta);
  const ComplexMatrix n_sigma = nx * pauli::x() + ny * pauli::y() + nz * pauli::z();
  const double h = 0.5 * gate.gamma;
  const ComplexMatrix rot =
      std::cos(h) * ComplexMatrix::Identity(2, 2) - kI * std::sin(h) * n_sigma;
  return std::exp(kI * h) * rot;
}

double latitude_area(double gamma, double chi) {
  check_chi_range(chi);
  if (gamma == 0.0 || std::abs(chi - kPi) < 1e-12) return 0.0;
  return 2.0 * std::abs(gamma) * half_cot(chi);
}

PulseSchedule::PulseSchedule(GateSpec gate, double chi, double xi1, double xi2, double omega_max,
                             EnvelopeKind envelope, double tau, double tau1, double tau2)
    : gate_(gate),
      chi_(chi),
      xi1_(xi1),
      xi2_(xi2),
      omega_max_(omega_max),
      envelope_(envelope),
      tau_(tau),
      tau1_(tau1),
      tau2_(tau2) {
  if (!(0.0 < tau1_ && tau1_ <= tau2_ && tau2_ < tau_)) {
    throw std::invalid_argument("segment boundaries must satisfy 0 < tau1 <= tau2 < tau");
  }
}

double PulseSchedule::omega(double t) const {
  if (t < 0.0 || t > tau_) return 0.0;
  if (envelope_ == EnvelopeKind::flat) return omega_max_;
  const double s = std::sin(kPi * t / tau_);
  return omega_max_ * s * s;
}

double PulseSchedule::cumulative_area(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= tau_) t = tau_;
  if (envelope_ == EnvelopeKind::flat) return omega_max_ * t;
  return sin2_cumulative(omega_max_, tau_, t);
}

int PulseSchedule::segment(double t) const {
  if (t < tau1_) return 0;
  return t < tau2_ ? 1 : 2;
}

double PulseSchedule::phase0_on(int segment, double t) const {
  if (segment == 0) return xi1_ + kPi / 2;
  if (segment == 1) {
    const double swept = cumulative_area(t) - chi_;
    const double offset = gate_.gamma > 0.0 ? kPi : 0.0;
    return offset + sign_of(gate_.gamma) * (std::cos(chi_) / std::sin(chi_)) * swept + xi1_;
  }
  return xi2_ - kPi / 2;
}

double PulseSchedule::phase0(double t) const { return phase0_on(segment(t), t); }

nlohmann::json PulseSchedule::to_json() const {
  return {{"tau", tau_},
          {"tau1", tau1_},
          {"tau2", tau2_},
          {"omega_max", omega_max_},
          {"envelope_kind", to_string(envelope_)},
          {"chi", chi_},
          {"xi1", xi1_},
          {"xi2", xi2_},
          {"theta", gate_.theta},
          {"phi", gate_.phi},
          {"gamma", gate_.gamma}};
}

nlohmann::json PulseSchedule::to_json(int samples) const {
  if (samples < 1) throw std::invalid_argument("sample count must be positive");
  nlohmann::json doc = to_json();
  nlohmann::json rows = nlohmann::json::array();
  for (int k = 0; k <= samples; ++k) {
    const double t = tau_ * static_cast<double>(k) / samples;
    rows.push_back({t, omega(t), phase0(t), phase1(t)});
  }
  doc["samples"] = std::move(rows);
  return doc;
}

PulseSchedule synthesize(const GateSpec& gate, const PathSpec& path, double omega_max,
                         EnvelopeKind envelope) {
  if (!(omega_max > 0.0) || !std::isfinite(omega_max)) {
    throw std::invalid_argument("omega_max must be positive");
  }
  if (!std::isfinite(gate.gamma)) throw std::invalid_argument("rotation angle must be finite");
  check_chi_range(path.chi);
  if (path.chi < 1e-9) throw std::domain_error("degenerate path: chi too close to 0");

  const double chi = path.chi;
  const double mid_area = latitude_area(gate.gamma, chi);
  if (!std::isfinite(mid_area) || mid_area > 1e12) {
    throw std::overflow_error("latitude segment area overflows");
  }
  const double total = 2.0 * chi + mid_area;

  // Latitude sweep written as 2 gamma cos(chi) / (1 - cos(chi)), which is regular at pi/2.
  const double span = 2.0 * gate.gamma * std::cos(chi) / (1.0 - std::cos(chi));
  const double xi2 = path.xi2.value_or(path.xi1 + span);

  double tau = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  if (envelope == EnvelopeKind::flat) {
    tau = total / omega_max;
    tau1 = chi / omega_max;
    tau2 = (chi + mid_area) / omega_max;
  } else {
    tau = 2.0 * total / omega_max;
    tau1 = invert_area(omega_max, tau, chi);
    tau2 = mid_area == 0.0 ? tau1 : invert_area(omega_max, tau, chi + mid_area);
  }
  return PulseSchedule(gate, chi, path.xi1, xi2, omega_max, envelope, tau, tau1, tau2);
}

}  // namespace holo
