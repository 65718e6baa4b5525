#include "holo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/SVD>

namespace holo {

namespace {

void check_hermitian_sample(const ComplexMatrix& h, double t) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (!is_hermitian(h, 1e-12 * scale)) {
    throw std::invalid_argument("Hamiltonian is not Hermitian at t = " + std::to_string(t));
  }
}

// Precomputed pieces of the dissipator: H_eff = H - i * damping.
struct Dissipator {
  ComplexMatrix damping;
  std::vector<std::pair<ComplexMatrix, double>> jumps;  // (c, kappa)
};

Dissipator prepare(const NoiseModel& noise, Eigen::Index dim) {
  noise.validate();
  Dissipator d;
  d.damping = ComplexMatrix::Zero(dim, dim);
  for (const auto& c : noise.channels) {
    if (c.op.rows() != dim) throw std::invalid_argument("collapse operator dimension mismatch");
    if (c.rate == 0.0) continue;
    d.damping += 0.5 * c.rate * c.op.adjoint() * c.op;
    d.jumps.emplace_back(c.op, c.rate);
  }
  return d;
}

void rhs(const ComplexMatrix& heff, const Dissipator& d, const ComplexMatrix& rho,
         ComplexMatrix& out) {
  const ComplexMatrix a = heff * rho;
  out.noalias() = -kI * (a - rho * heff.adjoint());
  for (const auto& [c, k] : d.jumps) out.noalias() += k * (c * rho * c.adjoint());
}

struct Span {
  double a;
  double b;
  bool a_break;  // H may jump at a: evaluate just after it
  bool b_break;  // H may jump at b: evaluate just before it
  double lo() const { return a_break ? a + 1e-9 * (b - a) : a; }
  double hi() const { return b_break ? b - 1e-9 * (b - a) : b; }
};

std::vector<Span> spans(const TimeGrid& grid) {
  const std::vector<double> nodes = grid.nodes();
  const double eps = 1e-12 * (grid.t1 - grid.t0);
  auto is_break = [&](double t) {
    return std::any_of(grid.breaks.begin(), grid.breaks.end(),
                       [&](double b) { return std::abs(b - t) <= eps; });
  };
  std::vector<Span> out;
  out.reserve(nodes.size());
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    out.push_back({nodes[k], nodes[k + 1], is_break(nodes[k]), is_break(nodes[k + 1])});
  }
  return out;
}

std::vector<ComplexMatrix> rk4_lindblad(const HamiltonianFn& h, const Dissipator& d,
                                        std::vector<ComplexMatrix> ops, const TimeGrid& grid,
                                        int record_every, std::vector<double>* times,
                                        std::vector<ComplexMatrix>* records) {
  const Eigen::Index dim = d.damping.rows();
  auto heff_at = [&](double t) {
    ComplexMatrix hh = h(t);
    check_hermitian_sample(hh, t);
    if (hh.rows() != dim) throw std::invalid_argument("Hamiltonian dimension mismatch");
    return ComplexMatrix(hh - kI * d.damping);
  };
  ComplexMatrix k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim);
  const std::vector<Span> steps = spans(grid);
  ComplexMatrix h0 = heff_at(grid.t0);
  if (records != nullptr) {
    times->push_back(grid.t0);
    records->push_back(ops.front());
  }
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const Span& sp = steps[k];
    const double dt = sp.b - sp.a;
    if (sp.a_break) h0 = heff_at(sp.lo());
    const ComplexMatrix hm = heff_at(sp.a + 0.5 * dt);
    const ComplexMatrix h1 = heff_at(sp.hi());
    for (auto& rho : ops) {
      rhs(h0, d, rho, k1);
      tmp = rho + (0.5 * dt) * k1;
      rhs(hm, d, tmp, k2);
      tmp = rho + (0.5 * dt) * k2;
      rhs(hm, d, tmp, k3);
      tmp = rho + dt * k3;
      rhs(h1, d, tmp, k4);
      rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    h0 = h1;
    if (records != nullptr && record_every > 0 && (k + 1) % record_every == 0 &&
        k + 1 != steps.size()) {
      times->push_back(sp.b);
      records->push_back(ops.front());
    }
  }
  if (records != nullptr) {
    times->push_back(grid.t1);
    records->push_back(ops.front());
  }
  return ops;
}

// Density matrices from RK4 carry O(dt^5) anti-Hermitian noise; symmetrize before wrapping.
QuantumState wrap_density(const ComplexMatrix& rho, const std::vector<std::string>& labels) {
  const ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
  return QuantumState::from_density(sym, labels);
}

double wrap_angle(double a) { return std::remainder(a, 2.0 * kPi); }

}  // namespace

TimeGrid::TimeGrid(double start, double end, int n, std::vector<double> breakpoints)
    : t0(start), t1(end), steps(n), breaks(std::move(breakpoints)) {
  if (n <= 0) throw std::invalid_argument("time grid needs a positive step count");
  if (!(end > start)) throw std::invalid_argument("time grid end must exceed its start");
  std::sort(breaks.begin(), breaks.end());
}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps) + 1 + breaks.size());
  for (int k = 0; k <= steps; ++k) out.push_back(time(k));
  const double eps = 1e-12 * (t1 - t0);
  for (double b : breaks) {
    if (b <= t0 + eps || b >= t1 - eps) continue;
    const auto it = std::lower_bound(out.begin(), out.end(), b);
    if (std::abs(*it - b) > eps && std::abs(*(it - 1) - b) > eps) out.insert(it, b);
  }
  return out;
}

TimeGrid TimeGrid::over(const PulseSchedule& schedule, int steps) {
  return TimeGrid(0.0, schedule.tau(), steps, {schedule.tau1(), schedule.tau2()});
}

double grid_resolution(const HamiltonianFn& h, const TimeGrid& grid) {
  double worst = 0.0;
  for (const Span& sp : spans(grid)) {
    const ComplexMatrix m = h(0.5 * (sp.a + sp.b));
    const double norm = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
    worst = std::max(worst, norm * (sp.b - sp.a));
  }
  return worst;
}

ComplexMatrix propagate_unitary(const HamiltonianFn& h, const TimeGrid& grid) {
  ComplexMatrix u;
  for (const Span& sp : spans(grid)) {
    const double tm = 0.5 * (sp.a + sp.b);
    const ComplexMatrix hh = h(tm);
    check_hermitian_sample(hh, tm);
    const ComplexMatrix step = expm_hermitian_step(0.5 * (hh + hh.adjoint()), sp.b - sp.a);
    u = (u.size() == 0) ? step : ComplexMatrix(step * u);
  }
  return u;
}

Trajectory propagate_state(const HamiltonianFn& h, const QuantumState& psi0, const TimeGrid& grid,
                           int record_every) {
  if (!psi0.is_vector()) throw std::invalid_argument("propagate_state expects a state vector");
  Trajectory traj;
  traj.description = "unitary";
  ComplexVector psi = psi0.vector();
  traj.times.push_back(grid.t0);
  traj.states.push_back(psi0);
  const std::vector<Span> steps = spans(grid);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const Span& sp = steps[k];
    const double tm = 0.5 * (sp.a + sp.b);
    const ComplexMatrix hh = h(tm);
    check_hermitian_sample(hh, tm);
    psi = expm_hermitian_step(0.5 * (hh + hh.adjoint()), sp.b - sp.a) * psi;
    const bool last = k + 1 == steps.size();
    if (last || (record_every > 0 && (k + 1) % record_every == 0)) {
      psi.normalize();
      traj.times.push_back(sp.b);
      traj.states.push_back(QuantumState::from_vector(psi, psi0.labels()));
    }
  }
  return traj;
}

double unitary_halving_discrepancy(const HamiltonianFn& h, const TimeGrid& grid) {
  const ComplexMatrix a = propagate_unitary(h, grid);
  const ComplexMatrix b = propagate_unitary(h, grid.refined(2));
  return (a - b).cwiseAbs().maxCoeff();
}

Trajectory propagate_lindblad(const HamiltonianFn& h, const NoiseModel& noise,
                              const QuantumState& rho0, const TimeGrid& grid,
                              const LindbladOptions& options) {
  const ComplexMatrix start = rho0.density();
  const Dissipator d = prepare(noise, start.rows());
  std::vector<double> times;
  std::vector<ComplexMatrix> records;
  const auto finals =
      rk4_lindblad(h, d, {start}, grid, options.record_every, &times, &records);

  Trajectory traj;
  traj.description = "lindblad";
  traj.times = std::move(times);
  traj.states.reserve(records.size());
  for (const auto& r : records) traj.states.push_back(wrap_density(r, rho0.labels()));

  if (options.check_step_halving) {
    const auto fine = rk4_lindblad(h, d, {start}, grid.refined(2), 0, nullptr, nullptr);
    traj.halving_discrepancy = (fine.front() - finals.front()).cwiseAbs().maxCoeff();
    if (traj.halving_discrepancy > options.halving_tolerance) {
      throw GridTooCoarseError("Lindblad step-halving discrepancy " +
                               std::to_string(traj.halving_discrepancy) + " exceeds tolerance");
    }
  }
  return traj;
}

std::vector<ComplexMatrix> propagate_lindblad_batch(const HamiltonianFn& h, const NoiseModel& noise,
                                                    std::vector<ComplexMatrix> operators,
                                                    const TimeGrid& grid) {
  if (operators.empty()) return operators;
  const Dissipator d = prepare(noise, operators.front().rows());
  return rk4_lindblad(h, d, std::move(operators), grid, 0, nullptr, nullptr);
}

std::vector<std::vector<ComplexMatrix>> lindblad_subspace_map(const HamiltonianFn& h,
                                                              const NoiseModel& noise,
                                                              const ComplexMatrix& isometry,
                                                              const TimeGrid& grid) {
  const Eigen::Index m = isometry.cols();
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = j; k < m; ++k) {
      ops.push_back(isometry.col(j) * isometry.col(k).adjoint());
    }
  }
  const auto evolved = propagate_lindblad_batch(h, noise, std::move(ops), grid);
  std::vector<std::vector<ComplexMatrix>> out(static_cast<std::size_t>(m),
                                              std::vector<ComplexMatrix>(static_cast<std::size_t>(m)));
  std::size_t n = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = j; k < m; ++k) {
      out[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = evolved[n];
      out[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = evolved[n].adjoint();
      ++n;
    }
  }
  return out;
}

ComplexMatrix propagate_sector(const HamiltonianFn& h, const NoiseModel& noise,
                               const std::vector<Eigen::Index>& sector, const TimeGrid& grid) {
  noise.validate();
  if (sector.empty()) throw std::invalid_argument("empty sector");
  const Eigen::Index s = static_cast<Eigen::Index>(sector.size());
  auto block = [&](const ComplexMatrix& m) {
    ComplexMatrix out(s, s);
    for (Eigen::Index r = 0; r < s; ++r)
      for (Eigen::Index c = 0; c < s; ++c) out(r, c) = m(sector[r], sector[c]);
    return out;
  };
  const Eigen::Index dim = noise.channels.empty() ? h(grid.t0).rows() : noise.channels[0].op.rows();
  std::vector<bool> inside(static_cast<std::size_t>(dim), false);
  for (Eigen::Index i : sector) inside.at(static_cast<std::size_t>(i)) = true;

  ComplexMatrix damping = ComplexMatrix::Zero(s, s);
  for (const auto& ch : noise.channels) {
    const ComplexMatrix cb = block(ch.op);
    const Complex lambda = cb(0, 0);
    if ((cb - lambda * ComplexMatrix::Identity(s, s)).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::invalid_argument("collapse operator " + ch.name + " is not scalar on the sector");
    }
    for (Eigen::Index r : sector) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        if (!inside[static_cast<std::size_t>(c)] && std::abs(ch.op(r, c)) > 1e-12) {
          throw std::invalid_argument("collapse operator " + ch.name + " feeds the sector");
        }
      }
    }
    damping += 0.5 * ch.rate *
               (block(ch.op.adjoint() * ch.op) - std::norm(lambda) * ComplexMatrix::Identity(s, s));
  }

  auto gen = [&](double t) {
    const ComplexMatrix full = h(t);
    check_hermitian_sample(full, t);
    for (Eigen::Index r : sector) {
      for (Eigen::Index c = 0; c < full.rows(); ++c) {
        if (!inside[static_cast<std::size_t>(c)] && std::abs(full(r, c)) > 1e-12) {
          throw std::invalid_argument("Hamiltonian couples the sector to the rest of the space");
        }
      }
    }
    return ComplexMatrix(-kI * (block(full) - kI * damping));
  };

  ComplexMatrix v = ComplexMatrix::Identity(s, s);
  ComplexMatrix g0 = gen(grid.t0);
  for (const Span& sp : spans(grid)) {
    const double dt = sp.b - sp.a;
    if (sp.a_break) g0 = gen(sp.lo());
    const ComplexMatrix gm = gen(sp.a + 0.5 * dt);
    const ComplexMatrix g1 = gen(sp.hi());
    const ComplexMatrix k1 = g0 * v;
    const ComplexMatrix k2 = gm * (v + 0.5 * dt * k1);
    const ComplexMatrix k3 = gm * (v + 0.5 * dt * k2);
    const ComplexMatrix k4 = g1 * (v + dt * k3);
    v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    g0 = g1;
  }
  return v;
}

// ---------------------------------------------------------------------------

PathTrajectory path_reconstruct(const PulseSchedule& schedule, const TimeGrid& grid) {
  // Segment boundaries are nodes, so that no step straddles a phase jump.
  TimeGrid g = grid;
  g.breaks.insert(g.breaks.end(), {schedule.tau1(), schedule.tau2()});
  const std::vector<double> nodes = g.nodes();

  auto pinned = [&](int seg, double chi) -> std::optional<double> {
    const bool near_pole = chi < kPoleWindow || chi > kPi - kPoleWindow;
    if (!near_pole || seg == 1) return std::nullopt;
    return seg == 0 ? schedule.xi1() : schedule.xi2();
  };
  auto deriv = [&](int seg, double t, double chi, double xi, double& dchi, double& dxi) {
    const double w = schedule.omega(t);
    const auto pin = pinned(seg, chi);
    const double rel = schedule.phase0_on(seg, t) - (pin ? *pin : xi);
    dchi = w * std::sin(rel);
    dxi = pin ? 0.0 : -w * (std::cos(chi) / std::sin(chi)) * std::cos(rel);
    if (!std::isfinite(dchi) || !std::isfinite(dxi)) {
      throw std::runtime_error("path reconstruction diverged near a pole");
    }
  };

  PathTrajectory out;
  out.times.reserve(nodes.size());
  double chi = 0.0;
  double xi = schedule.xi1();
  out.times.push_back(nodes.front());
  out.chi.push_back(chi);
  out.xi.push_back(xi);
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double t = nodes[k];
    const double dt = nodes[k + 1] - t;
    const int seg = schedule.segment(t + 0.5 * dt);
    double a1, b1, a2, b2, a3, b3, a4, b4;
    deriv(seg, t, chi, xi, a1, b1);
    deriv(seg, t + 0.5 * dt, chi + 0.5 * dt * a1, xi + 0.5 * dt * b1, a2, b2);
    deriv(seg, t + 0.5 * dt, chi + 0.5 * dt * a2, xi + 0.5 * dt * b2, a3, b3);
    deriv(seg, t + dt, chi + dt * a3, xi + dt * b3, a4, b4);
    chi += dt / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4);
    xi += dt / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4);
    if (const auto pin = pinned(seg, chi)) xi = *pin;
    out.times.push_back(nodes[k + 1]);
    out.chi.push_back(chi);
    out.xi.push_back(xi);
  }
  return out;
}

HolonomyAccumulators holonomy_accumulators(const PathTrajectory& path, const GateSpec& gate,
                                           const HamiltonianFn& h) {
  const std::size_t n = path.times.size();
  if (n < 2 || path.chi.size() != n || path.xi.size() != n) {
    throw std::invalid_argument("path trajectory needs at least two consistent samples");
  }
  const double st = std::sin(0.5 * gate.theta);
  const double ct = std::cos(0.5 * gate.theta);
  HolonomyAccumulators acc;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double chi_m = 0.5 * (path.chi[k] + path.chi[k + 1]);
    const double dchi = path.chi[k + 1] - path.chi[k];
    double dxi = path.xi[k + 1] - path.xi[k];
    const bool at_pole = std::min(path.chi[k], path.chi[k + 1]) < kPoleWindow ||
                         std::max(path.chi[k], path.chi[k + 1]) > kPi - kPoleWindow;
    if (std::abs(dchi) > 0.5 || (!at_pole && std::abs(wrap_angle(dxi)) > 0.5)) {
      throw std::invalid_argument("discontinuous path samples");
    }
    // Azimuth jumps at a pole are coordinate artifacts; take the short way round.
    if (at_pole) dxi = wrap_angle(dxi);
    acc.a11 += -0.5 * dxi * (1.0 - std::cos(chi_m));

    const double tm = 0.5 * (path.times[k] + path.times[k + 1]);
    const double xi_m = path.xi[k] + 0.5 * dxi;
    const ComplexMatrix hh = h(tm);
    ComplexVector psi1(3);
    const double c = std::cos(0.5 * chi_m);
    const double s = std::sin(0.5 * chi_m);
    psi1(0) = c * st;
    psi1(1) = c * ct * std::exp(kI * gate.phi);
    psi1(2) = s * std::exp(kI * xi_m);
    const Complex e = psi1.dot(hh * psi1);
    acc.k11 += -e.real() * (path.times[k + 1] - path.times[k]);
  }
  return acc;
}

HolonomyAccumulators holonomy_accumulators(const std::function<double(double)>& chi_t,
                                           const std::function<double(double)>& xi_t,
                                           const GateSpec& gate, const HamiltonianFn& h,
                                           const TimeGrid& grid) {
  PathTrajectory path;
  for (double t : grid.nodes()) {
    path.times.push_back(t);
    path.chi.push_back(chi_t(t));
    path.xi.push_back(xi_t(t));
  }
  return holonomy_accumulators(path, gate, h);
}

// ---------------------------------------------------------------------------

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, CsvColumns columns,
                          const std::vector<std::string>& labels) {
  if (traj.states.empty()) throw std::invalid_argument("empty trajectory");
  const auto& basis = traj.states.front().labels();
  std::vector<Eigen::Index> picks;
  if (columns == CsvColumns::populations) {
    const std::vector<std::string>& wanted = labels.empty() ? basis : labels;
    for (const auto& l : wanted) picks.push_back(traj.states.front().index_of(l));
  }
  out << "t";
  if (columns == CsvColumns::populations) {
    for (Eigen::Index i : picks) out << ",P" << basis[static_cast<std::size_t>(i)];
  } else {
    if (!traj.states.front().is_vector()) {
      throw std::invalid_argument("amplitude columns need pure states");
    }
    for (const auto& l : basis) out << ",Re" << l << ",Im" << l;
  }
  out << '\n';
  out.precision(12);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << traj.times[k];
    const QuantumState& st = traj.states[k];
    if (columns == CsvColumns::populations) {
      const ComplexMatrix rho = st.density();
      for (Eigen::Index i : picks) out << ',' << rho(i, i).real();
    } else {
      const ComplexVector v = st.vector();
      for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << v(i).real() << ',' << v(i).imag();
    }
    out << '\n';
  }
}

}  // namespace holo
