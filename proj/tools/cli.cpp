#include "holo/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "holo/acceptance.hpp"
#include "holo/sweeps.hpp"

namespace holo::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt17(double v) { return fmt::format("{:.17g}", v); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string gate_text(const GateSpec& g) {
  return fmt::format("theta={} phi={} gamma={}", fmt17(g.theta), fmt17(g.phi), fmt17(g.gamma));
}

json gate_json(const GateSpec& g) {
  return {{"theta", g.theta}, {"phi", g.phi}, {"gamma", g.gamma}};
}

// One output table: optional leading label columns, then the sweep columns.
struct Block {
  std::vector<std::string> tags;
  SweepResult sweep;
};

std::string stacked_csv(const std::vector<std::string>& tag_names, const std::vector<Block>& blocks) {
  std::ostringstream out;
  std::string header;
  for (const auto& t : tag_names) header += t + ',';
  std::ostringstream body;
  write_sweep_csv(body, blocks.front().sweep);
  const std::string first = body.str();
  header += first.substr(0, first.find('\n'));
  out << header << '\n';
  for (const auto& b : blocks) {
    std::ostringstream one;
    write_sweep_csv(one, b.sweep);
    std::istringstream lines(one.str());
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
      for (const auto& t : b.tags) out << t << ',';
      out << line << '\n';
    }
  }
  return out.str();
}

struct Output {
  std::string csv;
  json config = json::array();
  json masked = json::array();
  json extra = json::object();
};

void add_sweep(Output& o, const SweepResult& r, const std::vector<std::string>& tags = {}) {
  o.config.push_back(r.grid.payload);
  for (const auto& m : r.masked) {
    o.masked.push_back(
        {{"tags", tags}, {"coordinates", r.grid.coordinates(m.index)}, {"reason", m.reason}});
  }
}

void write_files(const fs::path& dir, const std::string& figure, const Output& o,
                 const ModelConfig& model, double runtime, std::ostream& out) {
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "data.csv", std::ios::binary);
    f << o.csv;
  }
  json config = {{"figure", figure}, {"sweeps", o.config}, {"model", to_json(model)}};
  json meta = {{"figure", figure},
               {"config", config},
               {"code_version", kCodeVersion},
               {"hash", content_hash(config.dump() + '\n' + kCodeVersion + '\n' + o.csv)},
               {"runtime_seconds", runtime},
               {"masked_cells", o.masked}};
  for (auto it = o.extra.begin(); it != o.extra.end(); ++it) meta[it.key()] = it.value();
  std::ofstream f(dir / "meta.json", std::ios::binary);
  f << meta.dump(2) << '\n';
  out << "wrote " << (dir / "data.csv").string() << " and meta.json\n";
}

std::vector<double> chi_axis(int n) {
  std::vector<double> v;
  for (int k = 1; k <= n; ++k) v.push_back(kPi * k / n);
  return v;
}

struct FigureArgs {
  std::string id;
  int resolution = 0;
  int steps = 0;
  int inputs = 0;
  std::string layout = "cavity";
  std::string gate;
};

LambdaRunOptions lambda_options(const FigureArgs& a, const ModelConfig& m) {
  LambdaRunOptions o;
  o.kappa_ratio = m.lambda_kappa_ratio;
  if (a.steps > 0) o.steps = a.steps;
  if (a.inputs > 0) o.n_inputs = a.inputs;
  return o;
}

Output figure_2a(const FigureArgs& a, int workers) {
  const int n = a.resolution > 0 ? a.resolution : 100;
  const SweepResult r = pulse_area_map(chi_axis(n), linspace(0.0, kPi / 2, n), workers);
  Output o;
  std::ostringstream s;
  write_sweep_csv(s, r);
  o.csv = s.str();
  add_sweep(o, r);
  return o;
}

Output figure_2b(const FigureArgs& a, const ModelConfig& m) {
  const LambdaRunOptions opts = lambda_options(a, m);
  const GateSpec gate = GateSpec::rx(kPi / 2);
  Output o;
  std::ostringstream s;
  s << "chi[rad],t[1/omega_max],population_a[1]\n";
  json peaks = json::array();
  for (double chi : {0.2 * kPi, 0.4 * kPi, 0.6 * kPi, 0.8 * kPi, kPi}) {
    const Trajectory traj = lambda_bright_state_trajectory(gate, chi, opts, 10);
    const PopulationSeries p = population_trace(traj, {"|a⟩"});
    double peak = 0.0;
    for (std::size_t k = 0; k < p.times.size(); ++k) {
      s << fmt17(chi) << ',' << fmt17(p.times[k]) << ',' << fmt17(p.values[0][k]) << '\n';
      peak = std::max(peak, p.values[0][k]);
    }
    peaks.push_back({{"chi", chi}, {"max_population", peak}});
  }
  o.csv = s.str();
  o.config.push_back({{"figure", "2b"},
                      {"gate", gate_json(gate)},
                      {"initial_state", "bright"},
                      {"steps", opts.steps},
                      {"kappa_ratio", opts.kappa_ratio}});
  o.extra["max_population"] = peaks;
  return o;
}

Output figure_2cdef(const FigureArgs& a, const ModelConfig& m, int workers) {
  const bool rx = a.id == "2c" || a.id == "2d";
  const ErrorKind kind = (a.id == "2c" || a.id == "2e") ? ErrorKind::delta : ErrorKind::epsilon;
  const int n = a.resolution > 0 ? a.resolution : 41;
  const GateSpec gate = rx ? GateSpec::rx(kPi / 2) : GateSpec::ry(kPi / 4);
  const SweepResult r = fidelity_vs_chi_error(gate, kind, chi_axis(n - 1), linspace(-0.1, 0.1, n),
                                              lambda_options(a, m), workers);
  Output o;
  std::ostringstream s;
  write_sweep_csv(s, r);
  o.csv = s.str();
  add_sweep(o, r);
  return o;
}

Output figure_2gh(const FigureArgs& a, const ModelConfig& m, int workers) {
  const GateSpec gate = a.id == "2g" ? GateSpec::rx(kPi / 2) : GateSpec::ry(kPi / 4);
  const int n = a.resolution > 0 ? a.resolution : 41;
  const auto errs = linspace(-0.1, 0.1, n);
  Output o;
  std::vector<Block> blocks;
  for (const auto& [scheme, chi] : {std::pair{"ours", 0.25 * kPi}, std::pair{"single_loop", kPi}}) {
    blocks.push_back({{scheme, fmt17(chi)},
                      infidelity_surface(gate, chi, errs, errs, lambda_options(a, m), workers)});
    add_sweep(o, blocks.back().sweep, blocks.back().tags);
  }
  o.csv = stacked_csv({"scheme", "chi[rad]"}, blocks);
  return o;
}

Output figure_3(const FigureArgs& a, const ModelConfig& m, int workers) {
  const GateSpec gate = a.gate.empty() ? GateSpec::rx(kPi / 2) : parse_gate(a.gate);
  const int n = a.resolution > 0 ? a.resolution : 41;
  const auto values = linspace(-mhz(2.0), mhz(2.0), n);
  std::vector<ScConfig> layouts = {ScConfig::cavity};
  const ScConfig requested = sc_config_from_string(a.layout);
  if (requested == ScConfig::two_qubit) throw ConfigError("--config: expected cavity or 3T");
  if (requested == ScConfig::three_transmon) layouts.push_back(ScConfig::three_transmon);
  Output o;
  std::vector<Block> blocks;
  for (ScConfig layout : layouts) {
    for (ErrorKind kind : {ErrorKind::delta, ErrorKind::epsilon}) {
      SweepResult r = sc_robustness_curves(gate, layout, kind, {0.25 * kPi, kPi}, values, m.single,
                                           workers, a.steps, a.inputs > 0 ? a.inputs : 1000);
      r.grid.axes[1].name = "error";
      blocks.push_back({{to_string(layout), to_string(kind)}, std::move(r)});
      add_sweep(o, blocks.back().sweep, blocks.back().tags);
    }
  }
  o.csv = stacked_csv({"config", "error_kind"}, blocks);
  o.extra["schemes"] = {{"ours", 0.25 * kPi}, {"single_loop", kPi}};
  return o;
}

Output figure_4a(const FigureArgs& a, const ModelConfig& m, int workers) {
  const int n = a.resolution > 0 ? a.resolution : 21;
  ParamSearchOptions search;
  search.nu3 = m.pair.modulation();
  if (a.steps > 0) search.steps = a.steps;
  if (a.inputs > 0) search.n_inputs = a.inputs;
  const SweepResult r = two_qubit_param_search(linspace(1.5, 2.5, n),
                                               linspace(mhz(600.0), mhz(800.0), n), m.pair,
                                               search, workers);
  Output o;
  std::ostringstream s;
  write_sweep_csv(s, r);
  o.csv = s.str();
  add_sweep(o, r);
  std::size_t best = 0;
  for (std::size_t k = 0; k < r.values.size(); ++k)
    if (!std::isnan(r.values[k]) && !(r.values[k] <= r.values[best])) best = k;
  const auto c = r.grid.coordinates(best);
  o.extra["argmax"] = {{"beta3", c[0]}, {"delta3", c[1]}, {"F2", r.values[best]}};
  return o;
}

Output figure_4b(const FigureArgs& a, const ModelConfig& m) {
  TwoQubitRunOptions opts;
  if (a.steps > 0) opts.steps = a.steps;
  if (a.inputs > 0) opts.n_inputs = a.inputs;
  opts.record_every = 10;
  const TwoQubitResult r = two_qubit_cp(m.pair, opts);
  const PopulationSeries& p = *r.populations;
  Output o;
  std::ostringstream s;
  s << "t[us]";
  for (const auto& l : p.labels) s << ",P" << l << "[1]";
  s << '\n';
  for (std::size_t k = 0; k < p.times.size(); ++k) {
    s << fmt17(p.times[k]);
    for (const auto& v : p.values) s << ',' << fmt17(v[k]);
    s << '\n';
  }
  o.csv = s.str();
  o.config.push_back({{"figure", "4b"},
                      {"mode", to_string(opts.mode)},
                      {"steps", opts.steps},
                      {"n_inputs", opts.n_inputs},
                      {"initial_state", "(|01>+|11>)/sqrt2 on T2 T3"}});
  o.extra["state_fidelity"] = r.state.value;
  o.extra["gate_fidelity"] = r.gate.value;
  o.extra["tau_us"] = r.tau;
  return o;
}

}  // namespace

double parse_angle(const std::string& text, const std::string& field) {
  static const std::regex re(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(pi)?\s*$)");
  std::smatch m;
  if (text.empty() || !std::regex_match(text, m, re) || (!m[1].matched && !m[2].matched)) {
    throw ConfigError(field + ": cannot read angle '" + text + "' (use e.g. 0.25pi)");
  }
  double v = 1.0;
  if (m[1].matched) {
    const std::string num = m[1].str();
    if (num == "+" || num == "-") {
      v = num == "-" ? -1.0 : 1.0;
    } else {
      v = std::stod(num);
    }
  }
  if (m[2].matched) v *= kPi;
  if (!std::isfinite(v)) throw ConfigError(field + ": angle is not finite");
  return v;
}

GateSpec parse_gate(const std::string& text, const std::string& field) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ConfigError(field + ": expected NAME:ANGLE, e.g. rx:0.5pi");
  }
  const std::string name = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  if (name == "rx") return GateSpec::rx(parse_angle(rest, field));
  if (name == "ry") return GateSpec::ry(parse_angle(rest, field));
  if (name == "rz") return GateSpec::rz(parse_angle(rest, field));
  if (name == "n") {
    std::vector<double> v;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(parse_angle(item, field));
    if (v.size() != 3) throw ConfigError(field + ": n: needs theta,phi,gamma");
    return GateSpec{v[0], v[1], v[2]};
  }
  if (name == "cp") throw ConfigError(field + ": cp is a two-qubit gate; use figure 4a/4b");
  throw ConfigError(field + ": unknown gate '" + name + "' (rx, ry, rz, n)");
}

FileConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config: cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("--config: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw ConfigError("--config: top level must be an object");
  FileConfig cfg;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    try {
      if (key == "model") {
        cfg.model = model_config_from_json(it.value());
      } else if (key == "workers") {
        cfg.workers = it.value().get<int>();
        if (cfg.workers < 1) throw ConfigError("workers: must be at least 1");
      } else if (key == "output") {
        cfg.output = it.value().get<std::string>();
      } else {
        throw ConfigError("--config: unknown key '" + key + "'");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }
  return cfg;
}

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"2a", "2b", "2c", "2d", "2e", "2f",
                                               "2g", "2h", "3",  "4a", "4b"};
  return ids;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Path-optimized holonomic gate simulations", "holo"};
  app.require_subcommand(1);
  int workers = 0;
  std::string config_path;
  std::string out_dir;
  app.add_option("--workers", workers, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--config", config_path, "Model configuration file (JSON)");
  app.add_option("--out", out_dir, "Output directory (default out)");

  auto* synth = app.add_subcommand("synth", "Synthesize a pulse schedule");
  std::string gate_s, chi_s, xi1_s = "0", envelope_s = "sin2";
  double omega_max = 1.0;
  int samples = 400;
  synth->add_option("--gate", gate_s, "rx:0.5pi, ry:..., rz:..., n:theta,phi,gamma")->required();
  synth->add_option("--chi", chi_s, "Path polar angle, e.g. 0.25pi")->required();
  synth->add_option("--xi1", xi1_s, "Longitude of the first segment");
  synth->add_option("--omega-max", omega_max, "Peak Rabi frequency");
  synth->add_option("--envelope", envelope_s, "sin2 or flat");
  synth->add_option("--samples", samples, "Pulse samples in the CSV")->check(CLI::PositiveNumber);

  auto* figure = app.add_subcommand("figure", "Write the data behind one figure");
  FigureArgs fa;
  figure->add_option("id", fa.id, "2a 2b 2c 2d 2e 2f 2g 2h 3 4a 4b")->required();
  figure->add_option("--resolution", fa.resolution, "Points per axis")->check(CLI::PositiveNumber);
  figure->add_option("--steps", fa.steps, "Integration steps per gate")->check(CLI::PositiveNumber);
  figure->add_option("--inputs", fa.inputs, "Fidelity inputs per axis")->check(CLI::PositiveNumber);
  figure->add_option("--config", fa.layout, "Figure 3 layout: cavity, or 3T to add the overlay");
  figure->add_option("--gate", fa.gate, "Figure 3 gate (default rx:0.5pi)");

  auto* verify = app.add_subcommand("verify", "Run the acceptance criteria");
  std::vector<std::string> only;
  bool json_only = false;
  verify->add_option("--only", only, "Criterion id or number (repeatable)");
  verify->add_flag("--json", json_only, "Print only the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    FileConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (workers > 0) cfg.workers = workers;
    if (!out_dir.empty()) cfg.output = out_dir;
    const fs::path root(cfg.output);

    if (synth->parsed()) {
      const GateSpec gate = parse_gate(gate_s, "--gate");
      const double chi = parse_angle(chi_s, "--chi");
      const double xi1 = parse_angle(xi1_s, "--xi1");
      EnvelopeKind env;
      try {
        env = envelope_from_string(envelope_s);
      } catch (const std::exception&) {
        throw ConfigError("--envelope: expected sin2 or flat");
      }
      if (!(chi > 0.0 && chi <= kPi + 1e-12)) throw ConfigError("--chi: must lie in (0, pi]");
      if (!(omega_max > 0.0)) throw ConfigError("--omega-max: must be positive");
      const PulseSchedule s = synthesize(gate, PathSpec{chi, xi1, std::nullopt}, omega_max, env);
      const fs::path dir = root / "synth";
      fs::create_directories(dir);
      json doc = s.to_json();
      doc["pulse_area"] = s.pulse_area();
      {
        std::ofstream f(dir / "schedule.json", std::ios::binary);
        f << doc.dump(2) << '\n';
      }
      std::ofstream f(dir / "pulse.csv", std::ios::binary);
      f << "t[1/omega_max],omega[omega_max],phase0[rad],phase1[rad]\n";
      for (int k = 0; k <= samples; ++k) {
        const double t = s.tau() * k / samples;
        f << fmt17(t) << ',' << fmt17(s.omega(t)) << ',' << fmt17(s.phase0(t)) << ','
          << fmt17(s.phase1(t)) << '\n';
      }
      out << fmt::format("{}  chi={}  tau={:.6g}  tau1={:.6g}  tau2={:.6g}  S={:.6g} (S/pi={:.6g})\n",
                         gate_text(gate), fmt17(chi), s.tau(), s.tau1(), s.tau2(), s.pulse_area(),
                         s.pulse_area() / kPi);
      out << "wrote " << (dir / "schedule.json").string() << " and pulse.csv\n";
      return kExitOk;
    }

    if (figure->parsed()) {
      const auto& ids = figure_ids();
      if (std::find(ids.begin(), ids.end(), fa.id) == ids.end()) {
        throw ConfigError("figure: unknown id '" + fa.id + "'");
      }
      if (fa.layout != "cavity" && fa.layout != "3T") {
        throw ConfigError("--config: expected cavity or 3T");
      }
      const auto start = std::chrono::steady_clock::now();
      Output o;
      const std::string& id = fa.id;
      if (id == "2a") o = figure_2a(fa, cfg.workers);
      else if (id == "2b") o = figure_2b(fa, cfg.model);
      else if (id == "2g" || id == "2h") o = figure_2gh(fa, cfg.model, cfg.workers);
      else if (id[0] == '2') o = figure_2cdef(fa, cfg.model, cfg.workers);
      else if (id == "3") o = figure_3(fa, cfg.model, cfg.workers);
      else if (id == "4a") o = figure_4a(fa, cfg.model, cfg.workers);
      else o = figure_4b(fa, cfg.model);
      write_files(root / id, id, o, cfg.model, seconds_since(start), out);
      return kExitOk;
    }

    AcceptanceOptions ao;
    ao.workers = cfg.workers;
    json report = {{"criteria", json::array()}};
    bool ok = true;
    std::vector<std::string> ids = only;
    if (ids.empty()) {
      for (const auto& c : acceptance_criteria()) ids.push_back(c.id);
    }
    for (const auto& id : ids) {
      CriterionResult r;
      try {
        r = run_criterion(id, ao);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("--only: " + std::string(e.what()));
      }
      if (!json_only) out << format_line(r) << std::endl;
      report["criteria"].push_back(r.to_json());
      ok = ok && r.passed;
    }
    report["passed"] = ok;
    report["code_version"] = kCodeVersion;
    if (json_only) {
      out << report.dump(2) << '\n';
    } else {
      fs::create_directories(root / "verify");
      std::ofstream f(root / "verify" / "report.json", std::ios::binary);
      f << report.dump(2) << '\n';
      out << (ok ? "all criteria passed" : "some criteria failed") << '\n';
    }
    return ok ? kExitOk : kExitCriterion;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace holo::cli
