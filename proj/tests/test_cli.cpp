#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "holo/cli.hpp"

using namespace holo;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "holo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("holo_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(ParseAngle, Forms) {
  EXPECT_NEAR(cli::parse_angle("0.25pi"), 0.25 * kPi, 1e-15);
  EXPECT_NEAR(cli::parse_angle("pi"), kPi, 1e-15);
  EXPECT_NEAR(cli::parse_angle("-0.5pi"), -0.5 * kPi, 1e-15);
  EXPECT_NEAR(cli::parse_angle("1.2"), 1.2, 1e-15);
  EXPECT_THROW(cli::parse_angle("quarter"), cli::ConfigError);
  EXPECT_THROW(cli::parse_angle(""), cli::ConfigError);
}

TEST(ParseGate, Forms) {
  const GateSpec rx = cli::parse_gate("rx:0.5pi");
  EXPECT_NEAR(rx.theta, kPi / 2, 1e-15);
  EXPECT_NEAR(rx.phi, kPi, 1e-15);
  EXPECT_NEAR(rx.gamma, kPi / 2, 1e-15);
  const GateSpec n = cli::parse_gate("n:0.1,0.2,0.3");
  EXPECT_EQ(n.theta, 0.1);
  EXPECT_EQ(n.gamma, 0.3);
  EXPECT_THROW(cli::parse_gate("cp:0.25pi"), cli::ConfigError);
  EXPECT_THROW(cli::parse_gate("hadamard:1"), cli::ConfigError);
  EXPECT_THROW(cli::parse_gate("n:1,2"), cli::ConfigError);
}

TEST(Config, LoadsAndRejectsUnknownKeys) {
  const fs::path dir = scratch_dir("config");
  std::ofstream(dir / "ok.json") << R"({"model": {"single": {"beta": 1.6}}, "workers": 3})";
  const auto cfg = cli::load_config((dir / "ok.json").string());
  EXPECT_EQ(cfg.workers, 3);
  EXPECT_NEAR(cfg.model.single.beta, 1.6, 1e-15);

  std::ofstream(dir / "bad.json") << R"({"model": {}, "wrokers": 3})";
  try {
    cli::load_config((dir / "bad.json").string());
    FAIL() << "expected ConfigError";
  } catch (const cli::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("wrokers"), std::string::npos);
  }
  std::ofstream(dir / "nested.json") << R"({"model": {"pair": {"beta": 2}}})";
  EXPECT_THROW(cli::load_config((dir / "nested.json").string()), cli::ConfigError);
  EXPECT_THROW(cli::load_config((dir / "missing.json").string()), cli::ConfigError);

  const CliResult r = run_cli({"--config", (dir / "bad.json").string(), "synth", "--gate", "rx:0.5pi",
                         "--chi", "0.25pi"});
  EXPECT_EQ(r.code, cli::kExitConfig);
  EXPECT_NE(r.err.find("wrokers"), std::string::npos);
}

TEST(ShippedConfig, Parses) {
  const auto cfg = cli::load_config(HOLO_SOURCE_DIR "/configs/default.json");
  EXPECT_NEAR(cfg.model.single.beta, 1.7, 1e-15);
  EXPECT_NEAR(cfg.model.pair.delta3, mhz(700.0), 1e-9);
}

TEST(ExitCodes, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
  EXPECT_EQ(run_cli({"bogus"}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"synth", "--gate", "rx:0.5pi"}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"synth", "--gate", "rx:0.5pi", "--chi", "0"}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"synth", "--gate", "cp:0.25pi", "--chi", "0.25pi"}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"figure", "9z"}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"--workers", "0", "verify"}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"verify", "--only", "no-such-criterion"}).code, cli::kExitConfig);
}

TEST(Synth, WritesScheduleAndPulse) {
  const fs::path dir = scratch_dir("synth");
  const CliResult r = run_cli({"--out", dir.string(), "synth", "--gate", "rx:0.5pi", "--chi", "0.25pi",
                         "--samples", "40"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("4.5776"), std::string::npos);
  const auto sched = nlohmann::json::parse(slurp(dir / "synth" / "schedule.json"));
  EXPECT_NEAR(sched.at("pulse_area").get<double>(), 0.25 * kPi + (kPi / 2) / std::tan(kPi / 8), 1e-12);
  std::istringstream pulse(slurp(dir / "synth" / "pulse.csv"));
  std::string line;
  std::getline(pulse, line);
  EXPECT_EQ(line, "t[1/omega_max],omega[omega_max],phase0[rad],phase1[rad]");
  int rows = 0;
  while (std::getline(pulse, line)) ++rows;
  EXPECT_EQ(rows, 41);
}

TEST(Figure, AreaMapIsReproducible) {
  const fs::path a = scratch_dir("fig_a"), b = scratch_dir("fig_b");
  ASSERT_EQ(run_cli({"--out", a.string(), "figure", "2a", "--resolution", "12"}).code, cli::kExitOk);
  ASSERT_EQ(run_cli({"--out", b.string(), "--workers", "4", "figure", "2a", "--resolution", "12"}).code,
            cli::kExitOk);
  const std::string csv = slurp(a / "2a" / "data.csv");
  EXPECT_EQ(csv, slurp(b / "2a" / "data.csv"));
  const auto meta = nlohmann::json::parse(slurp(a / "2a" / "meta.json"));
  const auto meta_b = nlohmann::json::parse(slurp(b / "2a" / "meta.json"));
  EXPECT_EQ(meta.at("hash"), meta_b.at("hash"));
  EXPECT_EQ(meta.at("figure"), "2a");
  EXPECT_TRUE(meta.contains("code_version"));
  EXPECT_TRUE(meta.contains("runtime_seconds"));
  std::istringstream rows(csv);
  std::string line;
  int n = -1;
  while (std::getline(rows, line)) ++n;
  EXPECT_EQ(n, 144);
}

TEST(Verify, SingleCriterionReport) {
  const fs::path dir = scratch_dir("verify");
  const CliResult r = run_cli({"--out", dir.string(), "verify", "--only", "area-law"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.out << r.err;
  EXPECT_NE(r.out.find("[PASS]"), std::string::npos);
  const auto report = nlohmann::json::parse(slurp(dir / "verify" / "report.json"));
  ASSERT_TRUE(report.contains("criteria"));
  EXPECT_EQ(report.at("criteria").size(), 1u);
}
