#include "holo/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace holo {

namespace {

void check_time(const PulseSchedule& s, double t) {
  const double slack = 1e-12 * std::max(1.0, s.tau());
  if (!(t >= -slack && t <= s.tau() + slack)) {
    throw std::out_of_range("time lies outside the pulse schedule");
  }
}

ComplexMatrix local_lowering(int levels) {
  ComplexMatrix a = ComplexMatrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// Energy of the n -> n+1 transition of an anharmonic ladder.
double transition_energy(const ChainSite& s, int n) { return s.frequency - n * s.anharmonicity; }

double half_sin(const GateSpec& g) { return std::sin(0.5 * g.theta); }
double half_cos(const GateSpec& g) { return std::cos(0.5 * g.theta); }

}  // namespace

double bessel_j(int order, double x) {
  if (x < 0.0) {
    const double v = bessel_j(order, -x);
    return (order % 2 == 0) ? v : -v;
  }
  if (order < 0) {
    const double v = bessel_j(-order, x);
    return (order % 2 == 0) ? v : -v;
  }
  return std::cyl_bessel_j(static_cast<double>(order), x);
}

double bessel_j1(double x) { return bessel_j(1, x); }

double inverse_bessel_j1(double value) {
  const double peak = bessel_j1(kBesselJ1ArgMax);
  if (!(value >= 0.0) || value > peak * (1.0 + 1e-12)) {
    throw std::domain_error("J1 value outside [0, max J1]");
  }
  if (value >= peak) return kBesselJ1ArgMax;
  double lo = 0.0;
  double hi = kBesselJ1ArgMax;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j1(mid) < value ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void NoiseModel::validate() const {
  for (const auto& c : channels) {
    if (!(c.rate >= 0.0)) throw std::invalid_argument("collapse rate must be nonnegative: " + c.name);
    if (c.op.rows() != c.op.cols()) throw std::invalid_argument("collapse operator must be square");
  }
}

NoiseModel NoiseModel::scaled(double factor) const {
  NoiseModel out = *this;
  for (auto& c : out.channels) c.rate *= factor;
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::string> lambda_labels() { return {"|0⟩", "|1⟩", "|a⟩"}; }

ComplexMatrix lambda_hamiltonian(const LambdaModel& model, double t) {
  const PulseSchedule& s = model.schedule;
  check_time(s, t);
  const double omega = s.omega(t) * (1.0 + model.eps_err);
  const GateSpec& g = s.gate();
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 2) = 0.5 * omega * half_sin(g) * std::exp(-kI * s.phase0(t));
  h(1, 2) = 0.5 * omega * half_cos(g) * std::exp(-kI * s.phase1(t));
  h(2, 0) = std::conj(h(0, 2));
  h(2, 1) = std::conj(h(1, 2));
  h(2, 2) = model.delta_err * s.omega_max();
  return h;
}

NoiseModel lambda_collapse_ops(double omega_max) {
  if (!(omega_max > 0.0)) throw std::invalid_argument("omega_max must be positive");
  ComplexMatrix lower = ComplexMatrix::Zero(3, 3);
  lower(0, 2) = 1.0;
  lower(1, 2) = 1.0;
  ComplexMatrix z = ComplexMatrix::Zero(3, 3);
  z(0, 0) = -1.0;
  z(1, 1) = -1.0;
  z(2, 2) = 2.0;
  const double rate = omega_max / 2000.0;
  return NoiseModel{{{lower, rate, "sigma_minus"}, {z, rate, "sigma_z"}}};
}

// ---------------------------------------------------------------------------

double DriveSpec::value(double t) const {
  const double p = phase ? phase(t) : 0.0;
  return bessel_arg * std::sin(modulation * t + p);
}

TransmonChainModel::TransmonChainModel(std::vector<ChainSite> sites,
                                       std::vector<ChainCoupling> couplings,
                                       std::vector<DriveSpec> drives)
    : sites_(std::move(sites)), couplings_(std::move(couplings)), drives_(std::move(drives)) {
  if (sites_.empty()) throw std::invalid_argument("chain needs at least one site");
  const int n = static_cast<int>(sites_.size());
  for (const auto& s : sites_) {
    if (s.levels < 2) throw std::invalid_argument("site " + s.name + " needs at least two levels");
    dim_ *= s.levels;
  }
  for (const auto& c : couplings_) {
    if (c.a < 0 || c.a >= n || c.b < 0 || c.b >= n || c.a == c.b) {
      throw std::invalid_argument("coupling references an invalid site pair");
    }
  }
  for (const auto& d : drives_) {
    if (d.site < 0 || d.site >= n) throw std::invalid_argument("drive references an invalid site");
    if (!(d.bessel_arg >= 0.0)) throw std::invalid_argument("drive amplitude beta must be >= 0");
  }
}

ComplexMatrix TransmonChainModel::embed(int site, const ComplexMatrix& local) const {
  std::vector<ComplexMatrix> factors;
  factors.reserve(sites_.size());
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    factors.push_back(static_cast<int>(i) == site
                          ? local
                          : ComplexMatrix::Identity(sites_[i].levels, sites_[i].levels));
  }
  return kron_all(factors);
}

ComplexMatrix TransmonChainModel::lowering(int site) const {
  return embed(site, local_lowering(sites_.at(static_cast<std::size_t>(site)).levels));
}

ComplexMatrix TransmonChainModel::number(int site) const {
  const ComplexMatrix a = local_lowering(sites_.at(static_cast<std::size_t>(site)).levels);
  return embed(site, a.adjoint() * a);
}

ComplexMatrix TransmonChainModel::total_number() const {
  ComplexMatrix n = ComplexMatrix::Zero(dim_, dim_);
  for (int i = 0; i < static_cast<int>(sites_.size()); ++i) n += number(i);
  return n;
}

ComplexMatrix TransmonChainModel::level_projector(int site, int level) const {
  const int levels = sites_.at(static_cast<std::size_t>(site)).levels;
  return embed(site, outer(levels, level, level));
}

Eigen::Index TransmonChainModel::index(const std::vector<int>& occupations) const {
  if (occupations.size() != sites_.size()) throw std::invalid_argument("occupation list size");
  Eigen::Index idx = 0;
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (occupations[i] < 0 || occupations[i] >= sites_[i].levels) {
      throw std::out_of_range("occupation exceeds truncation");
    }
    idx = idx * sites_[i].levels + occupations[i];
  }
  return idx;
}

std::vector<std::string> TransmonChainModel::labels() const {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(dim_));
  for (Eigen::Index k = 0; k < dim_; ++k) {
    std::string digits(sites_.size(), '0');
    Eigen::Index rest = k;
    for (std::size_t i = sites_.size(); i-- > 0;) {
      digits[i] = static_cast<char>('0' + rest % sites_[i].levels);
      rest /= sites_[i].levels;
    }
    out.push_back("|" + digits + "⟩");
  }
  return out;
}

ComplexMatrix TransmonChainModel::static_hamiltonian() const {
  ComplexMatrix h = ComplexMatrix::Zero(dim_, dim_);
  for (int i = 0; i < static_cast<int>(sites_.size()); ++i) {
    const ChainSite& s = sites_[static_cast<std::size_t>(i)];
    ComplexMatrix ladder = ComplexMatrix::Zero(s.levels, s.levels);
    for (int n = 0; n < s.levels; ++n) {
      ladder(n, n) = n * s.frequency - 0.5 * n * (n - 1) * s.anharmonicity;
    }
    h += embed(i, ladder);
  }
  for (const auto& c : couplings_) {
    const ComplexMatrix hop = c.g * lowering(c.a) * lowering(c.b).adjoint();
    h += hop + hop.adjoint();
  }
  return h;
}

ComplexMatrix sc_driven_hamiltonian(const TransmonChainModel& model, double t) {
  const auto& sites = model.sites();
  std::vector<double> f(sites.size(), 0.0);
  for (const auto& d : model.drives()) f[static_cast<std::size_t>(d.site)] += d.value(t);

  const Eigen::Index dim = model.dim();
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (const auto& c : model.couplings()) {
    const ChainSite& up = sites[static_cast<std::size_t>(c.a)];
    const ChainSite& down = sites[static_cast<std::size_t>(c.b)];
    // Raise site a from n, lower site b from m; each ladder rung rotates at its own frequency.
    for (int n = 0; n + 1 < up.levels; ++n) {
      for (int m = 1; m < down.levels; ++m) {
        const double freq = transition_energy(up, n) - transition_energy(down, m - 1);
        const double amp = c.g * std::sqrt(static_cast<double>((n + 1) * m));
        const Complex phase =
            std::exp(kI * (freq * t + f[static_cast<std::size_t>(c.a)] -
                           f[static_cast<std::size_t>(c.b)]));
        for (Eigen::Index col = 0; col < dim; ++col) {
          // Decode occupations of a and b in this column.
          std::vector<int> occ(sites.size());
          Eigen::Index rest = col;
          for (std::size_t i = sites.size(); i-- > 0;) {
            occ[i] = static_cast<int>(rest % sites[i].levels);
            rest /= sites[i].levels;
          }
          if (occ[static_cast<std::size_t>(c.a)] != n || occ[static_cast<std::size_t>(c.b)] != m) {
            continue;
          }
          occ[static_cast<std::size_t>(c.a)] = n + 1;
          occ[static_cast<std::size_t>(c.b)] = m - 1;
          const Eigen::Index row = model.index(occ);
          h(row, col) += amp * phase;
          h(col, row) += amp * std::conj(phase);
        }
      }
    }
  }
  return h;
}

// ---------------------------------------------------------------------------

std::string to_string(ScConfig config) {
  switch (config) {
    case ScConfig::cavity: return "cavity";
    case ScConfig::three_transmon: return "3T";
    case ScConfig::two_qubit: return "two_qubit";
  }
  return "unknown";
}

ScConfig sc_config_from_string(const std::string& name) {
  if (name == "cavity") return ScConfig::cavity;
  if (name == "3T" || name == "3t" || name == "three_transmon") return ScConfig::three_transmon;
  if (name == "two_qubit") return ScConfig::two_qubit;
  throw std::invalid_argument("unknown superconducting configuration: " + name);
}

namespace {

TransmonChainModel bare_chain(const ScSingleParams& p) {
  // Frequencies relative to the auxiliary site; only differences enter.
  std::vector<ChainSite> sites = {{"T1", -p.detuning, 0.0, 2},
                                  {"aux", 0.0, 0.0, 2},
                                  {"T2", -p.detuning, 0.0, 2}};
  std::vector<ChainCoupling> couplings = {{kSiteT1, kSiteAux, p.g}, {kSiteT2, kSiteAux, p.g}};
  return TransmonChainModel(std::move(sites), std::move(couplings));
}

}  // namespace

ScSingleQubit::ScSingleQubit(ScSingleParams params)
    : params_(params),
      chain_(bare_chain(params)),
      logical0_(chain_.index({1, 0, 0})),
      logical1_(chain_.index({0, 0, 1})),
      auxiliary_(chain_.index({0, 1, 0})) {
  if (!(params_.g > 0.0)) throw std::invalid_argument("coupling g must be positive");
  if (!(params_.beta > 0.0) || params_.beta > kBesselJ1ArgMax) {
    throw std::invalid_argument("beta must lie in (0, first maximum of J1]");
  }
  if (!(params_.kappa >= 0.0)) throw std::invalid_argument("kappa must be nonnegative");
}

double ScSingleQubit::lambda_omega(const GateSpec& gate) const {
  const double larger = std::max(std::abs(half_sin(gate)), std::abs(half_cos(gate)));
  return 2.0 * params_.g * bessel_j1(params_.beta) / larger;
}

PulseSchedule ScSingleQubit::schedule(const GateSpec& gate, const PathSpec& path) const {
  return synthesize(gate, path, lambda_omega(gate), EnvelopeKind::flat);
}

ComplexMatrix ScSingleQubit::exchange(int transmon) const {
  const int site = transmon == 0 ? kSiteT1 : kSiteT2;
  return chain_.lowering(site).adjoint() * chain_.lowering(kSiteAux);
}

std::array<double, 2> transmon_amplitudes(const PulseSchedule& schedule) {
  const double w = schedule.omega_max();
  return {w * std::abs(half_sin(schedule.gate())), w * std::abs(half_cos(schedule.gate()))};
}

TransmonChainModel ScSingleQubit::driven_chain(const PulseSchedule& schedule) const {
  const auto amps = transmon_amplitudes(schedule);
  const double two_g = 2.0 * params_.g;
  const double b1 = inverse_bessel_j1(std::min(amps[0] / two_g, bessel_j1(kBesselJ1ArgMax)));
  const double b2 = inverse_bessel_j1(std::min(amps[1] / two_g, bessel_j1(kBesselJ1ArgMax)));
  // sign(sin/cos(theta/2)) folds into the drive phase
  const double s1 = half_sin(schedule.gate()) < 0.0 ? kPi : 0.0;
  const double s2 = half_cos(schedule.gate()) < 0.0 ? kPi : 0.0;
  std::vector<DriveSpec> drives = {
      {kSiteT1, b1, params_.detuning, [schedule, s1](double t) { return s1 - schedule.phase0(t); }},
      {kSiteT2, b2, params_.detuning, [schedule, s2](double t) { return s2 - schedule.phase1(t); }}};
  return TransmonChainModel(chain_.sites(), chain_.couplings(), std::move(drives));
}

ComplexMatrix ScSingleQubit::effective_hamiltonian(const PulseSchedule& schedule, double t) const {
  check_time(schedule, t);
  const double w = schedule.omega(t);
  const GateSpec& g = schedule.gate();
  const ComplexMatrix e1 = exchange(0);
  const ComplexMatrix e2 = exchange(1);
  const ComplexMatrix half = 0.5 * w *
                             (half_sin(g) * std::exp(-kI * schedule.phase0(t)) * e1 +
                              half_cos(g) * std::exp(-kI * schedule.phase1(t)) * e2);
  return half + half.adjoint();
}

ComplexMatrix sc_effective_hamiltonian(const PulseSchedule& schedule, double g, double beta,
                                       double t) {
  check_time(schedule, t);
  const GateSpec& gate = schedule.gate();
  const double larger = std::max(std::abs(half_sin(gate)), std::abs(half_cos(gate)));
  const double omega = 2.0 * g * bessel_j1(beta) / larger;
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 2) = 0.5 * omega * half_sin(gate) * std::exp(-kI * schedule.phase0(t));
  h(1, 2) = 0.5 * omega * half_cos(gate) * std::exp(-kI * schedule.phase1(t));
  h(2, 0) = std::conj(h(0, 2));
  h(2, 1) = std::conj(h(1, 2));
  return h;
}

ErrorHamiltonians sc_error_hamiltonians(const ScSingleQubit& system, const ScErrors& errors,
                                        ScConfig config, const PulseSchedule& schedule,
                                        double t) {
  if (config == ScConfig::two_qubit) {
    throw std::invalid_argument("error Hamiltonians are defined for single-qubit layouts");
  }
  const TransmonChainModel& chain = system.chain();
  ComplexMatrix hd = errors.delta1 * chain.number(kSiteT1) + errors.delta2 * chain.number(kSiteT2);
  if (config == ScConfig::three_transmon) hd += -errors.delta1 * chain.number(kSiteAux);

  const ComplexMatrix half = 0.5 * (errors.eps1 * std::exp(-kI * schedule.phase0(t)) *
                                        system.exchange(0) +
                                    errors.eps2 * std::exp(-kI * schedule.phase1(t)) *
                                        system.exchange(1));
  return {hd, half + half.adjoint()};
}

// ---------------------------------------------------------------------------

double TwoQubitParams::omega_prime() const {
  return 2.0 * std::sqrt(2.0) * g23 * bessel_j1(beta3);
}

std::string to_string(TwoQubitMode mode) {
  switch (mode) {
    case TwoQubitMode::full: return "full";
    case TwoQubitMode::effective: return "effective";
    case TwoQubitMode::exact: return "exact";
  }
  return "unknown";
}

TwoQubitMode two_qubit_mode_from_string(const std::string& name) {
  if (name == "full") return TwoQubitMode::full;
  if (name == "effective") return TwoQubitMode::effective;
  if (name == "exact") return TwoQubitMode::exact;
  throw std::invalid_argument("unknown two-qubit mode: " + name);
}

ComplexMatrix two_qubit_hamiltonian(const TwoQubitParams& p,
                                    const std::function<double(double)>& phase3, double t,
                                    TwoQubitMode mode) {
  auto idx = [](int n2, int n3) { return 3 * n2 + n3; };
  const double phi = phase3 ? phase3(t) : 0.0;
  const double nu = p.modulation();
  const double r2 = std::sqrt(2.0);

  // Prefactors of |10><01|, |11><02|, |20><11| (T2 raised, T3 lowered).
  std::array<Complex, 3> c{};
  if (mode == TwoQubitMode::exact) {
    const Complex drive = p.g23 * std::exp(kI * p.beta3 * std::sin(nu * t + phi));
    c = {drive * std::exp(-kI * p.delta3 * t),
         r2 * drive * std::exp(-kI * (p.delta3 - p.alpha3) * t),
         r2 * drive * std::exp(-kI * (p.delta3 + p.alpha2) * t)};
  } else {
    const Complex drive = p.g23 * bessel_j1(p.beta3) * std::exp(kI * (nu * t + phi));
    c = {drive * std::exp(-kI * p.delta3 * t),
         r2 * drive * std::exp(-kI * (p.delta3 - p.alpha3) * t),
         r2 * drive * std::exp(-kI * (p.delta3 + p.alpha2) * t)};
    if (mode == TwoQubitMode::effective) {
      c[0] = 0.0;
      c[2] = 0.0;
    }
  }

  ComplexMatrix h = ComplexMatrix::Zero(9, 9);
  const std::array<std::pair<int, int>, 3> pairs = {
      std::pair{idx(1, 0), idx(0, 1)}, std::pair{idx(1, 1), idx(0, 2)},
      std::pair{idx(2, 0), idx(1, 1)}};
  for (std::size_t k = 0; k < 3; ++k) {
    h(pairs[k].first, pairs[k].second) += c[k];
    h(pairs[k].second, pairs[k].first) += std::conj(c[k]);
  }
  return h;
}

TwoQubitSpace::TwoQubitSpace(int max_excitations) {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d)
          if (max_excitations < 0 || a + b + c + d <= max_excitations) {
            states_.push_back({a, b, c, d});
          }
}

Eigen::Index TwoQubitSpace::index(const std::array<int, 4>& occupations) const {
  const auto it = std::lower_bound(states_.begin(), states_.end(), occupations);
  if (it == states_.end() || *it != occupations) {
    throw std::out_of_range("occupation pattern outside the truncated space");
  }
  return static_cast<Eigen::Index>(it - states_.begin());
}

std::vector<std::string> TwoQubitSpace::labels() const {
  std::vector<std::string> out;
  out.reserve(states_.size());
  for (const auto& s : states_) {
    std::string label = "|";
    for (int n : s) label += static_cast<char>('0' + n);
    out.push_back(label + "⟩");
  }
  return out;
}

ComplexMatrix TwoQubitSpace::lowering(int site) const {
  if (site < 0 || site > 3) throw std::out_of_range("site index");
  ComplexMatrix a = ComplexMatrix::Zero(dim(), dim());
  for (Eigen::Index k = 0; k < dim(); ++k) {
    auto s = states_[static_cast<std::size_t>(k)];
    const int n = s[static_cast<std::size_t>(site)];
    if (n == 0) continue;
    s[static_cast<std::size_t>(site)] = n - 1;
    a(index(s), k) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

ComplexMatrix TwoQubitSpace::number(int site) const {
  if (site < 0 || site > 3) throw std::out_of_range("site index");
  ComplexMatrix n = ComplexMatrix::Zero(dim(), dim());
  for (Eigen::Index k = 0; k < dim(); ++k) n(k, k) = states_[static_cast<std::size_t>(k)][site];
  return n;
}

ComplexMatrix TwoQubitSpace::embed_pair(const ComplexMatrix& pair_op) const {
  if (pair_op.rows() != 9 || pair_op.cols() != 9) throw std::invalid_argument("pair operator must be 9x9");
  ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
  for (Eigen::Index col = 0; col < dim(); ++col) {
    const auto& s = states_[static_cast<std::size_t>(col)];
    const int src = 3 * s[1] + s[2];
    for (int dst = 0; dst < 9; ++dst) {
      const Complex v = pair_op(dst, src);
      if (v == Complex(0.0)) continue;
      std::array<int, 4> t = s;
      t[1] = dst / 3;
      t[2] = dst % 3;
      const auto it = std::lower_bound(states_.begin(), states_.end(), t);
      if (it == states_.end() || *it != t) {
        throw std::invalid_argument("pair operator leaves the truncated space");
      }
      out(it - states_.begin(), col) += v;
    }
  }
  return out;
}

Eigen::Index TwoQubitSpace::logical_index(int q1, int q2) const {
  if ((q1 != 0 && q1 != 1) || (q2 != 0 && q2 != 1)) throw std::out_of_range("logical bit");
  // The second pair is mirrored so that |11>_L occupies |11> on the coupled transmons T2, T3.
  return index({1 - q1, q1, q2, 1 - q2});
}

// ---------------------------------------------------------------------------

NoiseModel sc_collapse_ops(ScConfig config, double kappa, const ScSingleQubit* single,
                           const TwoQubitSpace* pair) {
  if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be nonnegative");
  NoiseModel out;
  if (config == ScConfig::two_qubit) {
    if (pair == nullptr) throw std::invalid_argument("two-qubit collapse operators need a space");
    ComplexMatrix lower = ComplexMatrix::Zero(pair->dim(), pair->dim());
    ComplexMatrix z = lower;
    for (int i = 0; i < 4; ++i) {
      lower += pair->lowering(i);
      z += pair->number(i);
    }
    out.channels = {{lower, kappa, "D2-"}, {z, kappa, "D2z"}};
    return out;
  }
  if (single == nullptr) throw std::invalid_argument("single-qubit collapse operators need a chain");
  const TransmonChainModel& chain = single->chain();
  ComplexMatrix lower = ComplexMatrix::Zero(chain.dim(), chain.dim());
  ComplexMatrix z = lower;
  for (int site : {kSiteT1, kSiteAux, kSiteT2}) lower += chain.lowering(site);
  std::vector<int> dephased = {kSiteT1, kSiteT2};
  if (config == ScConfig::three_transmon) dephased.push_back(kSiteAux);
  for (int site : dephased) z += chain.level_projector(site, 1) - chain.level_projector(site, 0);
  const std::string suffix = config == ScConfig::three_transmon ? "'" : "";
  out.channels = {{lower, kappa, "D1-" + suffix}, {z, kappa, "D1z" + suffix}};
  return out;
}

namespace {

QuantumState embed_isometry(const QuantumState& logical, const ComplexMatrix& v,
                            std::vector<std::string> labels) {
  if (logical.dim() != v.cols()) throw std::invalid_argument("logical state dimension mismatch");
  if (logical.is_vector()) return QuantumState::from_vector(v * logical.vector(), std::move(labels));
  return QuantumState::from_density(v * logical.density() * v.adjoint(), std::move(labels));
}

}  // namespace

QuantumState dfs_encode(const QuantumState& logical, DfsSubspace subspace) {
  if (subspace == DfsSubspace::S2) return dfs_encode(logical, TwoQubitSpace(2));
  const ScSingleQubit system(ScSingleParams{});
  ComplexMatrix v = ComplexMatrix::Zero(system.dim(), 2);
  v(system.logical0(), 0) = 1.0;
  v(system.logical1(), 1) = 1.0;
  return embed_isometry(logical, v, system.chain().labels());
}

QuantumState dfs_encode(const QuantumState& logical, const TwoQubitSpace& space) {
  ComplexMatrix v = ComplexMatrix::Zero(space.dim(), 4);
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2) v(space.logical_index(q1, q2), 2 * q1 + q2) = 1.0;
  return embed_isometry(logical, v, space.labels());
}

ComplexMatrix cp_target(double gamma) {
  ComplexMatrix m = ComplexMatrix::Identity(4, 4);
  m(3, 3) = std::exp(kI * gamma);
  return m;
}

// ---------------------------------------------------------------------------

namespace {

double read_mhz(const nlohmann::json& j, const char* key, double fallback) {
  return j.contains(key) ? mhz(j.at(key).get<double>()) : fallback;
}

double read_khz(const nlohmann::json& j, const char* key, double fallback) {
  return j.contains(key) ? khz(j.at(key).get<double>()) : fallback;
}

double read_plain(const nlohmann::json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> keys,
                    const std::string& section) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool known = std::any_of(keys.begin(), keys.end(),
                                   [&](const char* k) { return it.key() == k; });
    if (!known) throw std::invalid_argument("unknown key " + section + "." + it.key());
  }
}

}  // namespace

ModelConfig model_config_from_json(const nlohmann::json& doc) {
  ModelConfig cfg;
  if (!doc.is_object()) throw std::invalid_argument("model config must be an object");
  reject_unknown(doc, {"single", "pair", "lambda"}, "model");
  if (doc.contains("single")) {
    const auto& s = doc.at("single");
    reject_unknown(s, {"g_mhz", "beta", "detuning_mhz", "kappa_khz"}, "single");
    cfg.single.g = read_mhz(s, "g_mhz", cfg.single.g);
    cfg.single.beta = read_plain(s, "beta", cfg.single.beta);
    cfg.single.detuning = read_mhz(s, "detuning_mhz", cfg.single.detuning);
    cfg.single.kappa = read_khz(s, "kappa_khz", cfg.single.kappa);
  }
  if (doc.contains("pair")) {
    const auto& p = doc.at("pair");
    reject_unknown(p, {"g23_mhz", "alpha2_mhz", "alpha3_mhz", "beta3", "delta3_mhz", "kappa_khz",
                       "nu3_mhz"},
                   "pair");
    cfg.pair.g23 = read_mhz(p, "g23_mhz", cfg.pair.g23);
    cfg.pair.alpha2 = read_mhz(p, "alpha2_mhz", cfg.pair.alpha2);
    cfg.pair.alpha3 = read_mhz(p, "alpha3_mhz", cfg.pair.alpha3);
    cfg.pair.beta3 = read_plain(p, "beta3", cfg.pair.beta3);
    cfg.pair.delta3 = read_mhz(p, "delta3_mhz", cfg.pair.delta3);
    cfg.pair.kappa = read_khz(p, "kappa_khz", cfg.pair.kappa);
    if (p.contains("nu3_mhz") && !p.at("nu3_mhz").is_null()) {
      cfg.pair.nu3 = mhz(p.at("nu3_mhz").get<double>());
    }
  }
  if (doc.contains("lambda")) {
    const auto& l = doc.at("lambda");
    reject_unknown(l, {"kappa_over_omega_max"}, "lambda");
    cfg.lambda_kappa_ratio = read_plain(l, "kappa_over_omega_max", cfg.lambda_kappa_ratio);
  }
  if (!(cfg.single.g > 0.0) || !(cfg.pair.g23 > 0.0)) {
    throw std::invalid_argument("coupling strengths must be positive");
  }
  if (cfg.single.kappa < 0.0 || cfg.pair.kappa < 0.0 || cfg.lambda_kappa_ratio < 0.0) {
    throw std::invalid_argument("decoherence rates must be nonnegative");
  }
  if (cfg.pair.beta3 < 0.0) throw std::invalid_argument("beta3 must be nonnegative");
  return cfg;
}

nlohmann::json to_json(const ModelConfig& cfg) {
  const double to_mhz = 1.0 / (2.0 * kPi);
  nlohmann::json pair = {{"g23_mhz", cfg.pair.g23 * to_mhz},
                         {"alpha2_mhz", cfg.pair.alpha2 * to_mhz},
                         {"alpha3_mhz", cfg.pair.alpha3 * to_mhz},
                         {"beta3", cfg.pair.beta3},
                         {"delta3_mhz", cfg.pair.delta3 * to_mhz},
                         {"kappa_khz", cfg.pair.kappa * to_mhz * 1e3}};
  if (cfg.pair.nu3) pair["nu3_mhz"] = *cfg.pair.nu3 * to_mhz;
  return {{"single",
           {{"g_mhz", cfg.single.g * to_mhz},
            {"beta", cfg.single.beta},
            {"detuning_mhz", cfg.single.detuning * to_mhz},
            {"kappa_khz", cfg.single.kappa * to_mhz * 1e3}}},
          {"pair", pair},
          {"lambda", {{"kappa_over_omega_max", cfg.lambda_kappa_ratio}}}};
}

}  // namespace holo
