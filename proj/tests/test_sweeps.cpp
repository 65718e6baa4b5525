#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "holo/sweeps.hpp"

using namespace holo;

namespace {

SweepGrid two_axis_grid() {
  SweepGrid g;
  g.axes = {{"x", "1", linspace(0.0, 1.0, 7)}, {"y", "rad", linspace(-1.0, 1.0, 5)}};
  g.payload = {{"kind", "test"}};
  return g;
}

std::string csv_of(const SweepResult& r) {
  std::ostringstream out;
  write_sweep_csv(out, r);
  return out.str();
}

}  // namespace

TEST(Linspace, Endpoints) {
  const auto v = linspace(-1.0, 1.0, 5);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v.front(), -1.0);
  EXPECT_EQ(v.back(), 1.0);
  EXPECT_NEAR(v[1], -0.5, 1e-15);
  EXPECT_EQ(linspace(2.0, 3.0, 1), std::vector<double>{2.0});
}

TEST(Hash, Fnv1aVectors) {
  EXPECT_EQ(content_hash(""), "cbf29ce484222325");
  EXPECT_EQ(content_hash("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(content_hash("foobar"), "85944171f73967e8");
}

TEST(Grid, Validation) {
  SweepGrid g = two_axis_grid();
  EXPECT_NO_THROW(g.validate());
  EXPECT_EQ(g.size(), 35u);
  EXPECT_EQ(g.coordinates(6), (std::vector<double>{1.0 / 6.0, -0.5}));
  SweepGrid empty = g;
  empty.axes[1].values.clear();
  EXPECT_THROW(empty.validate(), std::invalid_argument);
  SweepGrid none;
  EXPECT_THROW(none.validate(), std::invalid_argument);
  SweepGrid bumpy = g;
  bumpy.axes[0].values = {0.0, 1.0, 0.5};
  EXPECT_THROW(bumpy.validate(), std::invalid_argument);
  SweepGrid big = g;
  big.max_cells = 10;
  EXPECT_THROW(big.validate(), BudgetExceededError);
}

TEST(RunSweep, WorkerCountDoesNotChangeResult) {
  const CellFn f = [](const std::vector<double>& c) {
    if (c[0] == 0.5 && c[1] == 0.0) throw std::domain_error("bad cell");
    return std::sin(3 * c[0]) * std::cos(c[1]);
  };
  const SweepGrid g = two_axis_grid();
  const auto one = run_sweep(g, f, SweepStat::fidelity, 1);
  const auto many = run_sweep(g, f, SweepStat::fidelity, 8);
  EXPECT_EQ(csv_of(one), csv_of(many));
  ASSERT_EQ(one.masked.size(), 1u);
  EXPECT_NE(one.masked[0].reason.find("bad cell"), std::string::npos);
  EXPECT_TRUE(std::isnan(one.at({3, 2})));
  EXPECT_NEAR(one.at({1, 0}), std::sin(0.5) * std::cos(-1.0), 1e-15);
}

TEST(RunSweep, MeanSkipsMaskedCells) {
  SweepGrid g;
  g.axes = {{"x", "1", {0.0, 1.0, 2.0}}};
  const auto r = run_sweep(g, [](const std::vector<double>& c) {
    if (c[0] == 1.0) throw std::runtime_error("x");
    return c[0];
  }, SweepStat::fidelity);
  EXPECT_DOUBLE_EQ(r.mean(), 1.0);
}

TEST(Csv, RoundTrip) {
  const auto r = run_sweep(two_axis_grid(),
                           [](const std::vector<double>& c) { return c[0] / 3.0 + c[1] * 1e-17; },
                           SweepStat::infidelity);
  std::istringstream in(csv_of(r));
  const auto back = read_sweep_csv(in, SweepStat::infidelity);
  ASSERT_EQ(back.grid.axes.size(), 2u);
  EXPECT_EQ(back.grid.axes[0].name, "x");
  EXPECT_EQ(back.grid.axes[1].unit, "rad");
  EXPECT_EQ(back.grid.axes[0].values, r.grid.axes[0].values);
  EXPECT_EQ(back.grid.axes[1].values, r.grid.axes[1].values);
  ASSERT_EQ(back.values.size(), r.values.size());
  for (std::size_t i = 0; i < r.values.size(); ++i) EXPECT_EQ(back.values[i], r.values[i]);
  std::istringstream wrong(csv_of(r));
  EXPECT_THROW(read_sweep_csv(wrong, SweepStat::fidelity), std::invalid_argument);
}

TEST(Sidecar, HashCoversPayloadAndCsv) {
  const auto r = run_sweep(two_axis_grid(), [](const std::vector<double>& c) { return c[0]; },
                           SweepStat::fidelity);
  const std::string csv = csv_of(r);
  const auto a = sweep_sidecar(r, csv);
  EXPECT_EQ(a.at("hash"), sweep_sidecar(r, csv).at("hash"));
  EXPECT_NE(a.at("hash"), sweep_sidecar(r, csv + "x").at("hash"));
  EXPECT_EQ(a.at("code_version"), kCodeVersion);
  EXPECT_EQ(a.at("axes").size(), 2u);
}

TEST(AreaMap, ClosedFormAndRegions) {
  EXPECT_EQ(area_region(7.0), "I");
  EXPECT_EQ(area_region(2 * kPi), "II");
  EXPECT_EQ(area_region(4.0), "II");
  EXPECT_EQ(area_region(kPi), "III");
  const auto chis = linspace(0.1 * kPi, kPi, 10);
  const auto gammas = linspace(0.0, kPi / 2, 6);
  const auto r = pulse_area_map(chis, gammas, 2);
  for (std::size_t i = 0; i < chis.size(); ++i)
    for (std::size_t j = 0; j < gammas.size(); ++j) {
      const double s = chis[i] + gammas[j] / std::tan(chis[i] / 2);
      EXPECT_NEAR(r.at({i, j}), s / kPi, 1e-12);
      EXPECT_EQ(r.labels[i * gammas.size() + j], area_region(s));
    }
}

TEST(LambdaRun, IdealGateIsNearPerfect) {
  LambdaRunOptions o;
  o.kappa_ratio = 0.0;
  o.n_inputs = 50;
  o.steps = 2000;
  EXPECT_GT(lambda_gate_fidelity(GateSpec::rx(kPi / 2), 0.25 * kPi, 0.0, 0.0, o).value, 1 - 1e-8);
}

TEST(LambdaRun, StrongerDecoherenceLowersFidelity) {
  LambdaRunOptions o;
  o.n_inputs = 50;
  o.steps = 1000;
  const double base = lambda_gate_fidelity(GateSpec::ry(kPi / 4), 0.6 * kPi, 0.0, 0.0, o).value;
  o.kappa_ratio *= 10;
  const double worse = lambda_gate_fidelity(GateSpec::ry(kPi / 4), 0.6 * kPi, 0.0, 0.0, o).value;
  EXPECT_LT(worse, base);
  EXPECT_LT(base, 1.0);
}

TEST(LambdaRun, ErrorsLowerFidelity) {
  LambdaRunOptions o;
  o.n_inputs = 50;
  o.steps = 1000;
  o.kappa_ratio = 0.0;
  const auto g = GateSpec::rx(kPi / 2);
  EXPECT_LT(lambda_gate_fidelity(g, kPi, 0.1, 0.0, o).value, 1 - 1e-4);
  EXPECT_LT(lambda_gate_fidelity(g, kPi, 0.0, 0.1, o).value, 1 - 1e-4);
}

TEST(LambdaSweep, CsvIndependentOfWorkers) {
  LambdaRunOptions o;
  o.n_inputs = 20;
  o.steps = 200;
  const auto chis = linspace(0.2 * kPi, kPi, 4);
  const auto errs = linspace(-0.1, 0.1, 3);
  const auto a = fidelity_vs_chi_error(GateSpec::rx(kPi / 2), ErrorKind::delta, chis, errs, o, 1);
  const auto b = fidelity_vs_chi_error(GateSpec::rx(kPi / 2), ErrorKind::delta, chis, errs, o, 8);
  EXPECT_EQ(csv_of(a), csv_of(b));
}

TEST(AuxPeaks, GrowWithChi) {
  LambdaRunOptions o;
  o.steps = 1000;
  const auto chis = linspace(0.2 * kPi, kPi, 5);
  const auto r = aux_population_peaks(GateSpec::rx(kPi / 2), chis, o);
  for (std::size_t k = 1; k < chis.size(); ++k) EXPECT_GT(r.values[k], r.values[k - 1]);
  EXPECT_NEAR(r.values.back(), 1.0, 1e-2);
}

TEST(Pair, TruncationIsExact) {
  TwoQubitRunOptions o;
  o.steps = 300;
  o.n_inputs = 6;
  const TwoQubitParams p;
  const auto small = two_qubit_cp(p, o);
  o.max_excitations = -1;
  const auto full = two_qubit_cp(p, o);
  EXPECT_NEAR(small.gate.value, full.gate.value, 1e-10);
  EXPECT_NEAR(small.state.value, full.state.value, 1e-10);
}

TEST(Pair, SectorRouteMatchesLindblad) {
  TwoQubitRunOptions o;
  o.steps = 300;
  o.n_inputs = 6;
  const TwoQubitParams p;
  const auto lind = two_qubit_cp(p, o);
  o.route = PairRoute::sector;
  const auto sec = two_qubit_cp(p, o);
  EXPECT_NEAR(lind.gate.value, sec.gate.value, 1e-7);
}

TEST(Pair, StrongerDecoherenceLowersFidelity) {
  TwoQubitRunOptions o;
  o.steps = 300;
  o.n_inputs = 6;
  o.route = PairRoute::sector;
  TwoQubitParams p;
  const double base = two_qubit_cp(p, o).gate.value;
  p.kappa *= 10;
  EXPECT_LT(two_qubit_cp(p, o).gate.value, base);
}

TEST(Pair, ScheduleUsesEffectiveRabi) {
  const TwoQubitParams p;
  const auto s = two_qubit_schedule(p, kPi / 4, 0.25 * kPi);
  EXPECT_NEAR(s.omega_max(), p.omega_prime(), 1e-12);
  EXPECT_NEAR(s.pulse_area(), 0.25 * kPi + (kPi / 4) / std::tan(kPi / 8), 1e-9);
}

TEST(ParamSearch, ZeroDriveIsMasked) {
  ParamSearchOptions o;
  o.steps = 200;
  o.n_inputs = 4;
  o.nu3 = mhz(370.0);
  const auto r = two_qubit_param_search({0.0, 2.0}, {mhz(700.0)}, TwoQubitParams{}, o, 2);
  ASSERT_EQ(r.masked.size(), 1u);
  EXPECT_EQ(r.masked[0].index, 0u);
  EXPECT_TRUE(std::isnan(r.values[0]));
  EXPECT_GT(r.values[1], 0.5);
}
