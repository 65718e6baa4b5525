#include "holo/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "holo/dynamics.hpp"
#include "holo/metrics.hpp"
#include "holo/models.hpp"
#include "holo/pathsynth.hpp"
#include "holo/sweeps.hpp"

namespace holo {

namespace {

using nlohmann::json;

struct Case {
  GateSpec gate;
  std::string name;
};

const std::vector<Case>& gate_cases() {
  static const std::vector<Case> cases = {
      {GateSpec::rx(kPi / 2), "Rx(pi/2)"},
      {GateSpec::ry(kPi / 4), "Ry(pi/4)"},
      {GateSpec::rz(kPi / 3), "Rz(pi/3)"},
  };
  return cases;
}

const std::vector<double>& chi_cases() {
  static const std::vector<double> chis = {0.2 * kPi, 0.25 * kPi, 0.4 * kPi,
                                           0.6 * kPi, 0.75 * kPi, kPi};
  return chis;
}

PulseSchedule lambda_schedule(const GateSpec& gate, double chi) {
  return synthesize(gate, PathSpec{chi, 0.0, std::nullopt}, 1.0, EnvelopeKind::sin2);
}

HamiltonianFn lambda_h(const LambdaModel& model) {
  return [model](double t) { return lambda_hamiltonian(model, t); };
}

double gk(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

std::string pi_units(double x) { return fmt::format("{:.3g}pi", x / kPi); }

// 1 ------------------------------------------------------------------------

CriterionResult gate_synthesis(const AcceptanceOptions&) {
  constexpr int steps = kLambdaSteps;
  CriterionResult r;
  double worst_d = 0.0, worst_leak = 0.0;
  std::string where_d, where_leak;
  for (const auto& c : gate_cases()) {
    for (double chi : chi_cases()) {
      const PulseSchedule s = lambda_schedule(c.gate, chi);
      const ComplexMatrix u =
          propagate_unitary(lambda_h(LambdaModel{s, 0.0, 0.0}), TimeGrid::over(s, steps));
      const double d = unitary_distance_upto_phase(u.topLeftCorner(2, 2), target_unitary(c.gate));
      const double leak = std::max(std::abs(u(kLambdaAux, 0)), std::abs(u(kLambdaAux, 1)));
      if (d >= worst_d) worst_d = d, where_d = c.name + " chi=" + pi_units(chi);
      if (leak >= worst_leak) worst_leak = leak, where_leak = c.name + " chi=" + pi_units(chi);
    }
  }
  r.passed = worst_d <= 1e-3 && worst_leak <= 1e-3;
  r.measured = {{"max_distance", worst_d}, {"max_distance_at", where_d},
                {"max_leakage", worst_leak}, {"max_leakage_at", where_leak},
                {"steps", steps}};
  r.summary = fmt::format("max distance {:.2e} ({}), max leakage {:.2e} ({}); tol 1e-3", worst_d,
                          where_d, worst_leak, where_leak);
  return r;
}

// 2 ------------------------------------------------------------------------

CriterionResult area_law(const AcceptanceOptions& options) {
  CriterionResult r;
  std::vector<double> chis;
  for (int k = 1; k <= 20; ++k) chis.push_back(0.05 * k * kPi);
  const std::vector<double> gammas = linspace(0.0, kPi / 2, 21);
  const SweepResult map = pulse_area_map(chis, gammas, options.workers);

  double worst_area = 0.0, worst_segment = 0.0, worst_row = 0.0;
  int label_mismatch = 0;
  for (std::size_t i = 0; i < chis.size(); ++i) {
    for (std::size_t j = 0; j < gammas.size(); ++j) {
      const double chi = chis[i], gamma = gammas[j];
      const PulseSchedule s = lambda_schedule(GateSpec::rx(gamma), chi);
      const auto w = [&s](double t) { return s.omega(t); };
      const double seg0 = gk(w, 0.0, s.tau1());
      const double seg1 = gk(w, s.tau1(), s.tau2());
      const double seg2 = gk(w, s.tau2(), s.tau());
      const double quad_s = 0.5 * (seg0 + seg1 + seg2);
      const double closed = chi + std::abs(gamma) / std::tan(0.5 * chi);
      worst_area = std::max({worst_area, std::abs(quad_s - closed),
                             std::abs(map.at({i, j}) * kPi - quad_s)});
      worst_segment = std::max({worst_segment, std::abs(seg0 - chi), std::abs(seg2 - chi),
                                std::abs(seg1 - latitude_area(gamma, chi))});
      if (i + 1 == chis.size()) worst_row = std::max(worst_row, std::abs(quad_s - kPi));
      const std::string level = closed > 2 * kPi ? "I" : (closed > kPi ? "II" : "III");
      if (map.labels[i * gammas.size() + j] != level) ++label_mismatch;
    }
  }
  r.passed = worst_area <= 1e-9 && worst_segment <= 1e-9 && worst_row <= 1e-9 &&
             label_mismatch == 0;
  r.measured = {{"max_area_error", worst_area},
                {"max_segment_error", worst_segment},
                {"chi_pi_row_error", worst_row},
                {"region_label_mismatches", label_mismatch},
                {"cells", chis.size() * gammas.size()}};
  r.summary = fmt::format(
      "area err {:.1e}, segment err {:.1e}, chi=pi row err {:.1e}, label mismatches {}; tol 1e-9",
      worst_area, worst_segment, worst_row, label_mismatch);
  return r;
}

// 3 ------------------------------------------------------------------------

CriterionResult holonomy(const AcceptanceOptions& options) {
  constexpr int steps = 20000;
  const auto eta = options.eta ? options.eta : [](double chi) { return eta_of_chi(chi); };
  CriterionResult r;
  double worst_ratio = 0.0, worst_sum = 0.0, worst_pole = 0.0;
  std::string where_ratio;
  json rows = json::array();
  for (const auto& c : gate_cases()) {
    for (double chi : chi_cases()) {
      if (std::abs(chi - kPi / 2) <= 0.05) continue;
      const PulseSchedule s = lambda_schedule(c.gate, chi);
      const PathTrajectory path = path_reconstruct(s, TimeGrid::over(s, steps));
      const auto acc =
          holonomy_accumulators(path, c.gate, lambda_h(LambdaModel{s, 0.0, 0.0}));
      const double sum_err = std::abs(std::remainder(acc.a11 + acc.k11 - c.gate.gamma, 2 * kPi));
      worst_sum = std::max(worst_sum, sum_err);
      double ratio = std::nan("");
      if (chi == kPi) {
        worst_pole = std::max(worst_pole, std::abs(acc.k11) / std::abs(c.gate.gamma));
      } else {
        ratio = acc.k11 / acc.a11;
        const double err = std::abs(ratio - eta(chi));
        if (err >= worst_ratio) worst_ratio = err, where_ratio = c.name + " chi=" + pi_units(chi);
      }
      rows.push_back({{"gate", c.name}, {"chi", chi}, {"a11", acc.a11}, {"k11", acc.k11},
                      {"ratio", ratio}, {"expected_ratio", chi == kPi ? 0.0 : eta(chi)}});
    }
  }
  r.passed = worst_ratio <= 1e-3 && worst_sum <= 1e-3 && worst_pole <= 1e-6;
  r.measured = {{"max_ratio_error", worst_ratio}, {"max_ratio_error_at", where_ratio},
                {"max_sum_error", worst_sum},     {"chi_pi_k11_over_gamma", worst_pole},
                {"paths", rows},                  {"steps", steps}};
  r.summary = fmt::format(
      "K/A - eta max {:.2e} ({}), A+K-gamma max {:.2e}, |K|/|gamma| at chi=pi {:.1e}", worst_ratio,
      where_ratio, worst_sum, worst_pole);
  return r;
}

// 4 ------------------------------------------------------------------------

CriterionResult aux_population(const AcceptanceOptions& options) {
  CriterionResult r;
  const std::vector<double> chis = {0.2 * kPi, 0.4 * kPi, 0.6 * kPi, 0.8 * kPi, kPi};
  const SweepResult peaks = aux_population_peaks(GateSpec::rx(kPi / 2), chis, {}, options.workers);
  bool monotone = true;
  for (std::size_t k = 1; k < peaks.values.size(); ++k)
    monotone = monotone && peaks.values[k] >= peaks.values[k - 1];
  r.passed = monotone && peaks.values.back() > 0.9;
  r.measured = {{"chi", chis}, {"max_population", peaks.values}};
  std::string list;
  for (double v : peaks.values) list += fmt::format(" {:.4f}", v);
  r.summary = fmt::format("max P_a over chi 0.2..1 pi:{}", list);
  return r;
}

// 5 ------------------------------------------------------------------------

CriterionResult path_robustness(const AcceptanceOptions& options) {
  CriterionResult r;
  const std::vector<double> errs = linspace(-0.1, 0.1, 21);
  r.passed = true;
  std::vector<std::string> parts;
  for (const auto& c : {gate_cases()[0], gate_cases()[1]}) {
    const SweepResult ours = infidelity_surface(c.gate, 0.25 * kPi, errs, errs, {}, options.workers);
    const SweepResult sl = infidelity_surface(c.gate, kPi, errs, errs, {}, options.workers);
    std::size_t below = 0;
    for (std::size_t k = 0; k < ours.values.size(); ++k) below += ours.values[k] <= sl.values[k];
    const double frac = static_cast<double>(below) / static_cast<double>(ours.values.size());
    const double m_ours = ours.mean(), m_sl = sl.mean();
    r.passed = r.passed && frac >= 0.95 && m_ours < m_sl;
    r.measured[c.name] = {{"fraction_below", frac},
                          {"mean_infidelity_ours", m_ours},
                          {"mean_infidelity_sl", m_sl}};
    parts.push_back(fmt::format("{} below {:.1f}% mean {:.2e} vs {:.2e}", c.name, 100 * frac,
                                m_ours, m_sl));
  }
  r.summary = parts[0] + "; " + parts[1];
  return r;
}

// 6 ------------------------------------------------------------------------

CriterionResult sc_fidelity(const AcceptanceOptions&) {
  CriterionResult r;
  const ScSingleParams params;
  const PathSpec path{0.25 * kPi, 0.0, std::nullopt};
  const double fx = sc_gate_fidelity(GateSpec::rx(kPi / 2), path, params).value;
  const double fy = sc_gate_fidelity(GateSpec::ry(kPi / 4), path, params).value;
  r.passed = std::abs(fx - 0.9976) <= 1e-3 && std::abs(fy - 0.9982) <= 1e-3;
  r.measured = {{"F_rx", fx}, {"F_ry", fy}, {"steps", kScFullSteps}};
  r.summary = fmt::format("F(Rx(pi/2)) {:.5f} (0.9976+-0.001), F(Ry(pi/4)) {:.5f} (0.9982+-0.001)",
                          fx, fy);
  return r;
}

// 7 ------------------------------------------------------------------------

CriterionResult sc_robustness(const AcceptanceOptions& options) {
  CriterionResult r;
  const ScSingleParams params;
  const std::vector<double> chis = {0.25 * kPi, kPi};
  const std::vector<double> values = linspace(-mhz(2.0), mhz(2.0), 21);
  const std::size_t n = values.size();
  r.passed = true;
  double worst_gap = 0.0, worst_eps_diff = 0.0;
  std::vector<std::string> parts;
  for (const auto& c : {gate_cases()[0], gate_cases()[1]}) {
    std::map<std::pair<ScConfig, ErrorKind>, SweepResult> res;
    for (ScConfig cfg : {ScConfig::cavity, ScConfig::three_transmon})
      for (ErrorKind kind : {ErrorKind::delta, ErrorKind::epsilon})
        res.emplace(std::make_pair(cfg, kind),
                    sc_robustness_curves(c.gate, cfg, kind, chis, values, params, options.workers));
    for (const auto& [key, sweep] : res)
      for (std::size_t k = 0; k < n; ++k)
        worst_gap = std::max(worst_gap, sweep.values[n + k] - sweep.values[k]);
    auto mean_ours = [&](ScConfig cfg) {
      const auto& v = res.at({cfg, ErrorKind::delta}).values;
      return pairwise_mean(std::vector<double>(v.begin(), v.begin() + static_cast<long>(n)));
    };
    const double cav = mean_ours(ScConfig::cavity), tt = mean_ours(ScConfig::three_transmon);
    const auto& ec = res.at({ScConfig::cavity, ErrorKind::epsilon}).values;
    const auto& et = res.at({ScConfig::three_transmon, ErrorKind::epsilon}).values;
    double eps_diff = 0.0;
    for (std::size_t k = 0; k < ec.size(); ++k) eps_diff = std::max(eps_diff, std::abs(ec[k] - et[k]));
    worst_eps_diff = std::max(worst_eps_diff, eps_diff);
    r.passed = r.passed && cav > tt;
    r.measured[c.name] = {{"delta_mean_cavity", cav}, {"delta_mean_3T", tt},
                          {"epsilon_max_abs_diff", eps_diff}};
    parts.push_back(fmt::format("{} delta mean cavity {:.5f} vs 3T {:.5f}", c.name, cav, tt));
  }
  r.passed = r.passed && worst_gap <= 1e-3 && worst_eps_diff <= 2e-3;
  r.measured["max_sl_minus_ours"] = worst_gap;
  r.measured["max_epsilon_config_diff"] = worst_eps_diff;
  r.summary = fmt::format("max F_SL-F_our {:.2e}; eps cavity/3T diff {:.2e}; {}; {}", worst_gap,
                          worst_eps_diff, parts[0], parts[1]);
  return r;
}

// 8 ------------------------------------------------------------------------

CriterionResult two_qubit(const AcceptanceOptions& options) {
  CriterionResult r;
  const TwoQubitParams base;
  const TwoQubitResult cp = two_qubit_cp(base);
  ParamSearchOptions search;
  search.nu3 = base.modulation();
  const std::vector<double> betas = linspace(1.5, 2.5, 21);
  const std::vector<double> deltas = linspace(mhz(600.0), mhz(800.0), 21);
  const SweepResult scan = two_qubit_param_search(betas, deltas, base, search, options.workers);
  std::size_t best = 0;
  for (std::size_t k = 0; k < scan.values.size(); ++k)
    if (!std::isnan(scan.values[k]) && !(scan.values[k] <= scan.values[best])) best = k;
  const auto at = scan.grid.coordinates(best);
  const double b = at[0], d_mhz = at[1] / mhz(1.0);
  const bool f2_ok = std::abs(cp.gate.value - 0.995) <= 1.5e-3;
  const bool fs_ok = std::abs(cp.state.value - 0.995) <= 1.5e-3;
  const bool arg_ok = b >= 1.8 - 1e-9 && b <= 2.2 + 1e-9 && d_mhz >= 650 - 1e-6 && d_mhz <= 750 + 1e-6;
  r.passed = f2_ok && fs_ok && arg_ok;
  r.measured = {{"F2", cp.gate.value},        {"F_S", cp.state.value},
                {"tau_us", cp.tau},           {"argmax_beta3", b},
                {"argmax_delta3_mhz", d_mhz}, {"argmax_F2", scan.values[best]},
                {"scan_nu3_mhz", *search.nu3 / mhz(1.0)}};
  r.summary = fmt::format(
      "F2 {:.5f}{} F_S {:.5f}{} (0.995+-0.0015); argmax beta3={:.2f} delta3=2pi*{:.0f}MHz{}",
      cp.gate.value, f2_ok ? "" : " [out]", cp.state.value, fs_ok ? "" : " [out]", b, d_mhz,
      arg_ok ? "" : " [out]");
  return r;
}

// 9 ------------------------------------------------------------------------

CriterionResult path_reconstruction(const AcceptanceOptions&) {
  constexpr int steps = 20000;
  CriterionResult r;
  double worst_end = 0.0, worst_plateau = 0.0;
  for (const auto& c : gate_cases()) {
    for (double chi : chi_cases()) {
      const PulseSchedule s = lambda_schedule(c.gate, chi);
      const PathTrajectory p = path_reconstruct(s, TimeGrid::over(s, steps));
      worst_end = std::max(worst_end, std::abs(p.chi.back()));
      worst_plateau = std::max(
          worst_plateau, std::abs(*std::max_element(p.chi.begin(), p.chi.end()) - chi));
    }
  }
  r.passed = worst_end <= 1e-3 && worst_plateau <= 1e-3;
  r.measured = {{"max_chi_tau", worst_end}, {"max_plateau_error", worst_plateau}, {"steps", steps}};
  r.summary = fmt::format("max chi(tau) {:.2e}, max |max chi - chi| {:.2e}; tol 1e-3", worst_end,
                          worst_plateau);
  return r;
}

// 10 -----------------------------------------------------------------------

CriterionResult hygiene(const AcceptanceOptions& options) {
  CriterionResult r;
  const GateSpec gate = GateSpec::rx(kPi / 2);
  const PulseSchedule s = lambda_schedule(gate, 0.25 * kPi);
  const HamiltonianFn h = lambda_h(LambdaModel{s, 0.05, 0.05});
  const TimeGrid grid = TimeGrid::over(s, kLambdaSteps);

  LindbladOptions lo;
  lo.record_every = 50;
  lo.check_step_halving = true;
  lo.halving_tolerance = std::numeric_limits<double>::infinity();
  const Trajectory traj = propagate_lindblad(h, lambda_collapse_ops(1.0),
                                             QuantumState::from_vector(basis_ket(3, 0)), grid, lo);
  double drift = 0.0;
  for (const auto& st : traj.states) drift = std::max(drift, std::abs(st.data().trace().real() - 1.0));

  double defect = 0.0;
  for (const auto& c : gate_cases())
    for (double chi : chi_cases()) {
      const PulseSchedule sc = lambda_schedule(c.gate, chi);
      defect = std::max(defect, unitarity_defect(propagate_unitary(
                                    lambda_h(LambdaModel{sc, 0.0, 0.0}), TimeGrid::over(sc, kLambdaSteps))));
    }
  const double unitary_halving = unitary_halving_discrepancy(h, grid);

  const std::vector<double> chis = {0.25 * kPi, 0.75 * kPi};
  const std::vector<double> errs = {-0.05, 0.05};
  LambdaRunOptions fast;
  fast.steps = 400;
  fast.n_inputs = 50;
  auto csv = [&](int workers) {
    std::ostringstream out;
    write_sweep_csv(out, fidelity_vs_chi_error(gate, ErrorKind::delta, chis, errs, fast, workers));
    return out.str();
  };
  const bool deterministic = csv(1) == csv(std::max(4, options.workers));

  r.passed = drift <= 1e-7 && defect <= 1e-9 && traj.halving_discrepancy <= 1e-5 &&
             unitary_halving <= 1e-5 && deterministic;
  r.measured = {{"trace_drift", drift},
                {"unitarity_defect", defect},
                {"lindblad_halving", traj.halving_discrepancy},
                {"unitary_halving", unitary_halving},
                {"sweep_bytes_identical", deterministic}};
  r.summary = fmt::format(
      "trace drift {:.1e}, unitarity defect {:.1e}, halving rk4 {:.1e} / unitary {:.1e}, "
      "sweep bytes identical: {}",
      drift, defect, traj.halving_discrepancy, unitary_halving, deterministic ? "yes" : "no");
  return r;
}

using Runner = CriterionResult (*)(const AcceptanceOptions&);

const std::vector<std::pair<CriterionInfo, Runner>>& registry() {
  static const std::vector<std::pair<CriterionInfo, Runner>> table = {
      {{1, "gate-synthesis", "Lambda-model gates match their targets"}, gate_synthesis},
      {{2, "area-law", "Pulse area follows chi + |gamma| cot(chi/2)"}, area_law},
      {{3, "holonomy", "K11/A11 = eta(chi) and A11 + K11 = gamma"}, holonomy},
      {{4, "aux-population", "Peak auxiliary population grows with chi"}, aux_population},
      {{5, "path-robustness", "chi = 0.25pi surface below the single-loop surface"},
       path_robustness},
      {{6, "sc-fidelity", "Transmon full-model gate fidelities"}, sc_fidelity},
      {{7, "sc-robustness", "Transmon robustness ordering"}, sc_robustness},
      {{8, "two-qubit", "CP(pi/4) fidelities and parameter search"}, two_qubit},
      {{9, "path-reconstruction", "Integrated path closes at the pole"}, path_reconstruction},
      {{10, "hygiene", "Trace, unitarity, step halving, determinism"}, hygiene},
  };
  return table;
}

}  // namespace

nlohmann::json CriterionResult::to_json() const {
  return {{"number", number},   {"id", id},
          {"title", title},     {"passed", passed},
          {"summary", summary}, {"measured", measured},
          {"runtime_seconds", runtime_seconds}};
}

const std::vector<CriterionInfo>& acceptance_criteria() {
  static const std::vector<CriterionInfo> infos = [] {
    std::vector<CriterionInfo> v;
    for (const auto& [info, run] : registry()) v.push_back(info);
    return v;
  }();
  return infos;
}

CriterionResult run_criterion(const std::string& id, const AcceptanceOptions& options) {
  for (const auto& [info, run] : registry()) {
    if (info.id != id && std::to_string(info.number) != id) continue;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r = run(options);
    r.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.number = info.number;
    r.id = info.id;
    r.title = info.title;
    return r;
  }
  throw std::invalid_argument("unknown criterion: " + id);
}

std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& only,
                                            const AcceptanceOptions& options) {
  std::vector<CriterionResult> out;
  if (only.empty()) {
    for (const auto& info : acceptance_criteria()) out.push_back(run_criterion(info.id, options));
  } else {
    for (const auto& id : only) out.push_back(run_criterion(id, options));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  return fmt::format("[{}] {:>2} {}: {} ({:.1f}s)", r.passed ? "PASS" : "FAIL", r.number, r.id,
                     r.summary, r.runtime_seconds);
}

}  // namespace holo
