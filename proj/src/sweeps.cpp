#include "holo/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

namespace holo {

namespace {

ComplexMatrix isometry_from(Eigen::Index dim, const std::vector<Eigen::Index>& columns) {
  ComplexMatrix v = ComplexMatrix::Zero(dim, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) v(columns[k], static_cast<Eigen::Index>(k)) = 1.0;
  return v;
}

NoiseModel lambda_noise(const LambdaRunOptions& o) {
  return lambda_collapse_ops(o.omega_max).scaled(o.kappa_ratio * 2000.0);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

FidelityReport lambda_gate_fidelity(const GateSpec& gate, double chi, double delta, double eps,
                                    const LambdaRunOptions& options) {
  const PulseSchedule s = synthesize(gate, PathSpec{chi, 0.0, std::nullopt}, options.omega_max,
                                     options.envelope);
  const LambdaModel model{s, delta, eps};
  const HamiltonianFn h = [&model](double t) { return lambda_hamiltonian(model, t); };
  const ComplexMatrix iso = isometry_from(3, {0, 1});
  SubspaceChannel channel{
      lindblad_subspace_map(h, lambda_noise(options), iso, TimeGrid::over(s, options.steps)), iso};
  return single_qubit_gate_fidelity(channel, target_unitary(gate), options.n_inputs);
}

Trajectory lambda_bright_state_trajectory(const GateSpec& gate, double chi,
                                          const LambdaRunOptions& options, int record_every) {
  const PulseSchedule s = synthesize(gate, PathSpec{chi, 0.0, std::nullopt}, options.omega_max,
                                     options.envelope);
  const LambdaModel model{s, 0.0, 0.0};
  const HamiltonianFn h = [&model](double t) { return lambda_hamiltonian(model, t); };
  ComplexVector mu = ComplexVector::Zero(3);
  mu(0) = std::sin(0.5 * gate.theta);
  mu(1) = std::cos(0.5 * gate.theta) * std::exp(kI * gate.phi);
  const QuantumState rho0 = QuantumState::from_density(mu * mu.adjoint(), lambda_labels());
  LindbladOptions lo;
  lo.record_every = record_every;
  return propagate_lindblad(h, lambda_noise(options), rho0, TimeGrid::over(s, options.steps), lo);
}

std::string to_string(ScMode mode) { return mode == ScMode::full ? "full" : "effective"; }

ScMode sc_mode_from_string(const std::string& name) {
  if (name == "full") return ScMode::full;
  if (name == "effective") return ScMode::effective;
  throw std::invalid_argument("unknown superconducting mode: " + name);
}

FidelityReport sc_gate_fidelity(const GateSpec& gate, const PathSpec& path,
                                const ScSingleParams& params, const ScErrors& errors,
                                const ScRunOptions& options) {
  if (options.config == ScConfig::two_qubit) {
    throw std::invalid_argument("single-qubit run needs the cavity or 3T layout");
  }
  const ScSingleQubit sys(params);
  const PulseSchedule s = sys.schedule(gate, path);
  const bool has_errors =
      errors.delta1 != 0.0 || errors.delta2 != 0.0 || errors.eps1 != 0.0 || errors.eps2 != 0.0;
  const ScConfig config = options.config;

  HamiltonianFn base;
  if (options.mode == ScMode::full) {
    auto chain = std::make_shared<TransmonChainModel>(sys.driven_chain(s));
    base = [chain](double t) { return sc_driven_hamiltonian(*chain, t); };
  } else {
    base = [&sys, &s](double t) { return sys.effective_hamiltonian(s, t); };
  }
  const HamiltonianFn h = [&, base](double t) {
    ComplexMatrix m = base(t);
    if (has_errors) {
      const ErrorHamiltonians e = sc_error_hamiltonians(sys, errors, config, s, t);
      m += e.delta + e.epsilon;
    }
    return m;
  };
  const int steps = options.steps > 0 ? options.steps
                                      : (options.mode == ScMode::full ? kScFullSteps : 2000);
  const NoiseModel noise = sc_collapse_ops(config, params.kappa, &sys, nullptr);
  const ComplexMatrix iso = isometry_from(sys.dim(), {sys.logical0(), sys.logical1()});
  SubspaceChannel channel{lindblad_subspace_map(h, noise, iso, TimeGrid::over(s, steps)), iso};
  return single_qubit_gate_fidelity(channel, target_unitary(gate), options.n_inputs);
}

std::string to_string(PairRoute route) { return route == PairRoute::lindblad ? "lindblad" : "sector"; }

PulseSchedule two_qubit_schedule(const TwoQubitParams& params, double gamma, double chi) {
  return synthesize(GateSpec::rz(gamma), PathSpec{chi, 0.0, std::nullopt}, params.omega_prime(),
                    EnvelopeKind::flat);
}

TwoQubitResult two_qubit_cp(const TwoQubitParams& params, const TwoQubitRunOptions& options) {
  const TwoQubitSpace space(options.max_excitations);
  const PulseSchedule s = two_qubit_schedule(params, options.gamma, options.chi);
  const double offset = options.phase_offset;
  const std::function<double(double)> phase3 = [&s, offset](double t) {
    return offset - s.phase0(t);
  };
  const TwoQubitMode mode = options.mode;
  const HamiltonianFn h = [&](double t) {
    return space.embed_pair(two_qubit_hamiltonian(params, phase3, t, mode));
  };
  const NoiseModel noise = sc_collapse_ops(ScConfig::two_qubit, params.kappa, nullptr, &space);
  const TimeGrid grid = TimeGrid::over(s, options.steps);
  const ComplexMatrix target = cp_target(options.gamma);

  std::vector<Eigen::Index> logical;
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2) logical.push_back(space.logical_index(q1, q2));

  ComplexVector probe = ComplexVector::Zero(4);
  probe(1) = 1.0 / std::sqrt(2.0);  // |01>_L, i.e. |01> on T2 T3
  probe(3) = 1.0 / std::sqrt(2.0);  // |11>_L, i.e. |11> on T2 T3
  const ComplexVector probe_out = target * probe;

  TwoQubitResult out;
  out.tau = s.tau();
  out.state.definition = FidelityKind::state;
  out.state.n_samples = 1;

  if (options.route == PairRoute::sector) {
    std::vector<Eigen::Index> sector;
    for (Eigen::Index k = 0; k < space.dim(); ++k) {
      const auto& st = space.states()[static_cast<std::size_t>(k)];
      if (st[0] + st[1] + st[2] + st[3] == 2) sector.push_back(k);
    }
    const ComplexMatrix v = propagate_sector(h, noise, sector, grid);
    ComplexMatrix block(4, 4);
    std::vector<Eigen::Index> pos;
    for (Eigen::Index idx : logical) {
      pos.push_back(std::find(sector.begin(), sector.end(), idx) - sector.begin());
    }
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) block(r, c) = v(pos[r], pos[c]);
    out.gate = two_qubit_gate_fidelity_pure(block, target, options.n_inputs);
    out.state.value = std::clamp(std::norm(probe_out.dot(block * probe)), 0.0, 1.0);
    return out;
  }

  const ComplexMatrix iso = isometry_from(space.dim(), logical);
  SubspaceChannel channel{lindblad_subspace_map(h, noise, iso, grid), iso};
  out.gate = two_qubit_gate_fidelity(channel, target, options.n_inputs);
  out.state.value = std::clamp(channel.overlap(probe, probe_out), 0.0, 1.0);

  if (options.record_every > 0) {
    const QuantumState rho0 = QuantumState::from_vector(iso * probe, space.labels());
    LindbladOptions lo;
    lo.record_every = options.record_every;
    const Trajectory traj = propagate_lindblad(h, noise, rho0, grid, lo);
    out.populations = population_trace(traj, {"|1010⟩", "|0110⟩", "|0020⟩", "|0200⟩"});
  }
  return out;
}

// ---------------------------------------------------------------------------

std::size_t SweepGrid::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return axes.empty() ? 0 : n;
}

std::vector<std::size_t> SweepGrid::shape() const {
  std::vector<std::size_t> s;
  for (const auto& a : axes) s.push_back(a.values.size());
  return s;
}

std::vector<double> SweepGrid::coordinates(std::size_t flat) const {
  std::vector<double> c(axes.size());
  for (std::size_t i = axes.size(); i-- > 0;) {
    const std::size_t n = axes[i].values.size();
    c[i] = axes[i].values[flat % n];
    flat /= n;
  }
  return c;
}

void SweepGrid::validate() const {
  if (axes.empty()) throw std::invalid_argument("sweep grid has no axes");
  for (const auto& a : axes) {
    if (a.values.empty()) throw std::invalid_argument("sweep axis " + a.name + " is empty");
    const bool up = a.values.size() < 2 || a.values[1] > a.values[0];
    for (std::size_t k = 1; k < a.values.size(); ++k) {
      const bool ok = up ? a.values[k] > a.values[k - 1] : a.values[k] < a.values[k - 1];
      if (!ok) throw std::invalid_argument("sweep axis " + a.name + " is not strictly monotone");
    }
  }
  if (size() > max_cells) {
    throw BudgetExceededError("sweep grid has " + std::to_string(size()) +
                              " cells, budget is " + std::to_string(max_cells));
  }
}

std::string to_string(SweepStat stat) {
  switch (stat) {
    case SweepStat::fidelity: return "fidelity";
    case SweepStat::infidelity: return "infidelity";
    case SweepStat::area_over_pi: return "area_over_pi";
    case SweepStat::max_population: return "max_population";
  }
  return "unknown";
}

double SweepResult::at(const std::vector<std::size_t>& index) const {
  const auto shape = grid.shape();
  if (index.size() != shape.size()) throw std::invalid_argument("index rank");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (index[i] >= shape[i]) throw std::out_of_range("sweep index");
    flat = flat * shape[i] + index[i];
  }
  return values[flat];
}

double SweepResult::mean() const {
  std::vector<double> finite;
  for (double v : values)
    if (!std::isnan(v)) finite.push_back(v);
  return pairwise_mean(finite);
}

SweepResult run_sweep(const SweepGrid& grid, const CellFn& cell, SweepStat stat, int workers) {
  grid.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = grid.size();
  std::vector<double> values(n, std::nan(""));
  std::vector<std::string> failures(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        values[i] = cell(grid.coordinates(i));
        if (std::isnan(values[i])) failures[i] = "cell returned NaN";
      } catch (const std::exception& e) {
        values[i] = std::nan("");
        failures[i] = e.what();
      }
    }
  };
  const int pool = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  std::vector<std::thread> threads;
  for (int w = 1; w < pool; ++w) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();

  SweepResult r;
  r.grid = grid;
  r.stat = stat;
  r.values = std::move(values);
  for (std::size_t i = 0; i < n; ++i) {
    if (!failures[i].empty()) r.masked.push_back({i, failures[i]});
  }
  r.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  for (const auto& a : result.grid.axes) out << a.name << '[' << a.unit << "],";
  out << to_string(result.stat) << "[1]";
  if (!result.labels.empty()) out << ',' << result.label_name;
  out << '\n';
  for (std::size_t i = 0; i < result.values.size(); ++i) {
    for (double c : result.grid.coordinates(i)) out << format_double(c) << ',';
    out << format_double(result.values[i]);
    if (!result.labels.empty()) out << ',' << result.labels[i];
    out << '\n';
  }
}

SweepResult read_sweep_csv(std::istream& in, SweepStat stat) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty sweep CSV");
  const auto header = split_csv_line(line);
  const std::string value_name = to_string(stat) + "[1]";
  const auto vit = std::find(header.begin(), header.end(), value_name);
  if (vit == header.end()) throw std::invalid_argument("sweep CSV lacks column " + value_name);
  const std::size_t n_axes = static_cast<std::size_t>(vit - header.begin());
  const bool has_label = header.size() > n_axes + 1;

  SweepResult r;
  r.stat = stat;
  for (std::size_t i = 0; i < n_axes; ++i) {
    const std::string& h = header[i];
    const auto open = h.find('[');
    if (open == std::string::npos || h.back() != ']') throw std::invalid_argument("axis header " + h);
    r.grid.axes.push_back({h.substr(0, open), h.substr(open + 1, h.size() - open - 2), {}});
  }
  if (has_label) r.label_name = header[n_axes + 1];
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) throw std::invalid_argument("ragged sweep CSV row");
    for (std::size_t i = 0; i < n_axes; ++i) {
      const double v = std::strtod(fields[i].c_str(), nullptr);
      auto& vals = r.grid.axes[i].values;
      if (std::find(vals.begin(), vals.end(), v) == vals.end()) vals.push_back(v);
    }
    r.values.push_back(std::strtod(fields[n_axes].c_str(), nullptr));
    if (has_label) r.labels.push_back(fields[n_axes + 1]);
  }
  if (r.grid.size() != r.values.size()) throw std::invalid_argument("sweep CSV is not a full grid");
  for (std::size_t i = 0; i < r.values.size(); ++i)
    if (std::isnan(r.values[i])) r.masked.push_back({i, "masked"});
  return r;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json sweep_sidecar(const SweepResult& result, const std::string& csv_bytes) {
  nlohmann::json axes = nlohmann::json::array();
  for (const auto& a : result.grid.axes) {
    axes.push_back({{"name", a.name},
                    {"unit", a.unit},
                    {"count", a.values.size()},
                    {"first", a.values.front()},
                    {"last", a.values.back()}});
  }
  nlohmann::json masked = nlohmann::json::array();
  for (const auto& m : result.masked) {
    masked.push_back({{"index", m.index},
                      {"coordinates", result.grid.coordinates(m.index)},
                      {"reason", m.reason}});
  }
  const std::string config = result.grid.payload.dump();
  return {{"config", result.grid.payload},
          {"stat", to_string(result.stat)},
          {"axes", axes},
          {"code_version", kCodeVersion},
          {"hash", content_hash(config + '\n' + kCodeVersion + '\n' + csv_bytes)},
          {"runtime_seconds", result.runtime_seconds},
          {"masked_cells", masked}};
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("linspace needs at least one point");
  if (n == 1) return {lo};
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  return v;
}

// ---------------------------------------------------------------------------

std::string area_region(double area) {
  const double slack = 1e-12;
  if (area > 2.0 * kPi * (1.0 + slack)) return "I";
  if (area > kPi * (1.0 + slack)) return "II";
  return "III";
}

SweepResult pulse_area_map(const std::vector<double>& chi_values,
                           const std::vector<double>& gamma_values, int workers) {
  SweepGrid grid;
  grid.axes = {{"chi", "rad", chi_values}, {"gamma", "rad", gamma_values}};
  grid.payload = {{"sweep", "pulse_area_map"}};
  for (double chi : chi_values) {
    if (!(chi > 0.0)) throw std::invalid_argument("pulse area map requires chi > 0");
  }
  const CellFn cell = [](const std::vector<double>& c) {
    const PulseSchedule s = synthesize(GateSpec::rx(c[1]), PathSpec{c[0], 0.0, std::nullopt}, 1.0,
                                       EnvelopeKind::sin2);
    return s.pulse_area() / kPi;
  };
  SweepResult r = run_sweep(grid, cell, SweepStat::area_over_pi, workers);
  r.label_name = "region";
  r.labels.reserve(r.values.size());
  for (double v : r.values) r.labels.push_back(std::isnan(v) ? "" : area_region(v * kPi));
  return r;
}

std::string to_string(ErrorKind kind) { return kind == ErrorKind::delta ? "delta" : "epsilon"; }

ErrorKind error_kind_from_string(const std::string& name) {
  if (name == "delta") return ErrorKind::delta;
  if (name == "epsilon" || name == "eps") return ErrorKind::epsilon;
  throw std::invalid_argument("unknown error kind: " + name);
}

namespace {

nlohmann::json gate_json(const GateSpec& g) {
  return {{"theta", g.theta}, {"phi", g.phi}, {"gamma", g.gamma}};
}

nlohmann::json lambda_json(const LambdaRunOptions& o) {
  return {{"steps", o.steps},
          {"n_inputs", o.n_inputs},
          {"omega_max", o.omega_max},
          {"kappa_ratio", o.kappa_ratio},
          {"envelope", to_string(o.envelope)}};
}

}  // namespace

SweepResult fidelity_vs_chi_error(const GateSpec& gate, ErrorKind kind,
                                  const std::vector<double>& chi_values,
                                  const std::vector<double>& error_values,
                                  const LambdaRunOptions& options, int workers) {
  for (double e : error_values) {
    if (std::abs(e) > 0.1 + 1e-12) throw std::invalid_argument("error values must lie in [-0.1, 0.1]");
  }
  SweepGrid grid;
  grid.axes = {{"chi", "rad", chi_values}, {to_string(kind), "1", error_values}};
  grid.payload = {{"sweep", "fidelity_vs_chi_error"},
                  {"gate", gate_json(gate)},
                  {"error", to_string(kind)},
                  {"lambda", lambda_json(options)}};
  const CellFn cell = [=](const std::vector<double>& c) {
    const double d = kind == ErrorKind::delta ? c[1] : 0.0;
    const double e = kind == ErrorKind::epsilon ? c[1] : 0.0;
    return lambda_gate_fidelity(gate, c[0], d, e, options).value;
  };
  return run_sweep(grid, cell, SweepStat::fidelity, workers);
}

SweepResult infidelity_surface(const GateSpec& gate, double chi,
                               const std::vector<double>& delta_values,
                               const std::vector<double>& eps_values,
                               const LambdaRunOptions& options, int workers) {
  SweepGrid grid;
  grid.axes = {{"delta", "1", delta_values}, {"epsilon", "1", eps_values}};
  grid.payload = {{"sweep", "infidelity_surface"},
                  {"gate", gate_json(gate)},
                  {"chi", chi},
                  {"lambda", lambda_json(options)}};
  const CellFn cell = [=](const std::vector<double>& c) {
    return 1.0 - lambda_gate_fidelity(gate, chi, c[0], c[1], options).value;
  };
  return run_sweep(grid, cell, SweepStat::infidelity, workers);
}

SweepResult sc_robustness_curves(const GateSpec& gate, ScConfig config, ErrorKind kind,
                                 const std::vector<double>& chi_values,
                                 const std::vector<double>& values, const ScSingleParams& params,
                                 int workers, int steps, int n_inputs) {
  SweepGrid grid;
  grid.axes = {{"chi", "rad", chi_values}, {to_string(kind), "rad/us", values}};
  grid.payload = {{"sweep", "sc_robustness_curves"},
                  {"gate", gate_json(gate)},
                  {"config", to_string(config)},
                  {"error", to_string(kind)},
                  {"g", params.g},
                  {"beta", params.beta},
                  {"detuning", params.detuning},
                  {"kappa", params.kappa},
                  {"steps", steps},
                  {"n_inputs", n_inputs}};
  const CellFn cell = [=](const std::vector<double>& c) {
    ScErrors e;
    if (kind == ErrorKind::delta) {
      e.delta1 = e.delta2 = c[1];
    } else {
      e.eps1 = e.eps2 = c[1];
    }
    ScRunOptions o;
    o.mode = ScMode::effective;
    o.config = config;
    o.steps = steps;
    o.n_inputs = n_inputs;
    return sc_gate_fidelity(gate, PathSpec{c[0], 0.0, std::nullopt}, params, e, o).value;
  };
  return run_sweep(grid, cell, SweepStat::fidelity, workers);
}

SweepResult two_qubit_param_search(const std::vector<double>& beta3_values,
                                   const std::vector<double>& delta3_values,
                                   const TwoQubitParams& base, const ParamSearchOptions& options,
                                   int workers) {
  SweepGrid grid;
  grid.axes = {{"beta3", "1", beta3_values}, {"delta3", "rad/us", delta3_values}};
  grid.payload = {{"sweep", "two_qubit_param_search"},
                  {"mode", to_string(options.mode)},
                  {"nu3", options.nu3 ? nlohmann::json(*options.nu3) : nlohmann::json(nullptr)},
                  {"g23", base.g23},
                  {"alpha2", base.alpha2},
                  {"alpha3", base.alpha3},
                  {"kappa", base.kappa},
                  {"steps", options.steps},
                  {"n_inputs", options.n_inputs}};
  const CellFn cell = [=](const std::vector<double>& c) {
    TwoQubitParams p = base;
    p.beta3 = c[0];
    p.delta3 = c[1];
    p.nu3 = options.nu3;
    if (!(p.omega_prime() > 0.0)) throw std::domain_error("no drive: J1(beta3) = 0");
    TwoQubitRunOptions o;
    o.mode = options.mode;
    o.route = PairRoute::sector;
    o.steps = options.steps;
    o.n_inputs = options.n_inputs;
    return two_qubit_cp(p, o).gate.value;
  };
  return run_sweep(grid, cell, SweepStat::fidelity, workers);
}

SweepResult aux_population_peaks(const GateSpec& gate, const std::vector<double>& chi_values,
                                 const LambdaRunOptions& options, int workers) {
  SweepGrid grid;
  grid.axes = {{"chi", "rad", chi_values}};
  grid.payload = {{"sweep", "aux_population_peaks"},
                  {"gate", gate_json(gate)},
                  {"lambda", lambda_json(options)}};
  const CellFn cell = [=](const std::vector<double>& c) {
    const Trajectory traj = lambda_bright_state_trajectory(gate, c[0], options, 1);
    const auto pops = population_trace(traj, {"|a⟩"});
    return *std::max_element(pops.values[0].begin(), pops.values[0].end());
  };
  return run_sweep(grid, cell, SweepStat::max_population, workers);
}

}  // namespace holo
