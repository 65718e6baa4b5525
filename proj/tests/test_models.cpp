#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "holo/models.hpp"

using namespace holo;

namespace {

// Power series of J1, 40 terms.
double j1_series(double x) {
  double sum = 0.0;
  double term = x / 2.0;
  for (int m = 0; m < 40; ++m) {
    sum += term;
    term *= -(x / 2.0) * (x / 2.0) / ((m + 1.0) * (m + 2.0));
  }
  return sum;
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

PulseSchedule rx_schedule(double chi = 0.25 * kPi) {
  return synthesize(GateSpec::rx(kPi / 2), PathSpec{chi, 0.0, std::nullopt}, 1.0,
                    EnvelopeKind::sin2);
}

}  // namespace

TEST(Bessel, MatchesSeries) {
  for (double x = -4.0; x <= 4.0; x += 0.125) EXPECT_NEAR(bessel_j1(x), j1_series(x), 1e-13);
  EXPECT_NEAR(bessel_j1(1.7), 0.5778, 1e-4);
  EXPECT_NEAR(bessel_j1(2.0), 0.5767, 1e-4);
  EXPECT_EQ(bessel_j1(0.0), 0.0);
  EXPECT_NEAR(bessel_j(-1, 0.9), -bessel_j1(0.9), 1e-15);
}

TEST(Bessel, InverseRoundTrip) {
  for (double x = 0.0; x <= kBesselJ1ArgMax; x += 0.05) {
    EXPECT_NEAR(inverse_bessel_j1(j1_series(x)), x, 1e-9);
  }
  EXPECT_THROW(inverse_bessel_j1(0.7), std::domain_error);
}

TEST(Lambda, HamiltonianEntries) {
  const auto s = rx_schedule();
  const double t = 0.5 * s.tau();
  const ComplexMatrix h = lambda_hamiltonian(LambdaModel{s, 0.0, 0.0}, t);
  const double w = s.omega(t);
  EXPECT_NEAR(w, 1.0, 1e-15);
  const double st = std::sin(kPi / 4), ct = std::cos(kPi / 4);
  EXPECT_LT(std::abs(h(0, 2) - 0.5 * w * st * std::exp(-kI * s.phase0(t))), 1e-15);
  EXPECT_LT(std::abs(h(1, 2) - 0.5 * w * ct * std::exp(-kI * s.phase1(t))), 1e-15);
  EXPECT_EQ(h(0, 0), 0.0);
  EXPECT_EQ(h(2, 2), 0.0);
  EXPECT_EQ(h(0, 1), 0.0);
}

TEST(Lambda, ErrorTerms) {
  const auto s = rx_schedule();
  for (double t : {0.1 * s.tau(), 0.5 * s.tau(), 0.9 * s.tau()}) {
    const ComplexMatrix ideal = lambda_hamiltonian(LambdaModel{s, 0.0, 0.0}, t);
    const ComplexMatrix d = lambda_hamiltonian(LambdaModel{s, 0.1, 0.0}, t);
    EXPECT_NEAR(d(2, 2).real(), 0.1 * s.omega_max(), 1e-15);
    const ComplexMatrix e = lambda_hamiltonian(LambdaModel{s, 0.0, 0.05}, t);
    EXPECT_LT(max_abs(e - 1.05 * ideal), 1e-15);
  }
}

TEST(Lambda, CollapseOperators) {
  const NoiseModel n = lambda_collapse_ops(1.0);
  ASSERT_EQ(n.channels.size(), 2u);
  ComplexMatrix minus = ComplexMatrix::Zero(3, 3);
  minus(0, 2) = 1.0;
  minus(1, 2) = 1.0;
  EXPECT_EQ(max_abs(n.channels[0].op - minus), 0.0);
  ComplexMatrix z = ComplexMatrix::Zero(3, 3);
  z.diagonal() << -1.0, -1.0, 2.0;
  EXPECT_EQ(max_abs(n.channels[1].op - z), 0.0);
  const ComplexVector out = n.channels[0].op * basis_ket(3, 2);
  EXPECT_EQ(out(0), 1.0);
  EXPECT_EQ(out(1), 1.0);
  EXPECT_NEAR(n.channels[0].rate, 1.0 / 2000.0, 1e-18);
}

TEST(Chain, UndrivenCouplingEntry) {
  const double g = mhz(10.0);
  TransmonChainModel chain({{"T1", 0.0, mhz(200), 2}, {"a", 0.0, 0.0, 2}}, {{0, 1, g}});
  const ComplexMatrix h = sc_driven_hamiltonian(chain, 0.0);
  EXPECT_NEAR(std::abs(h(chain.index({1, 0}), chain.index({0, 1}))), g, 1e-12);
}

TEST(Chain, DrivenHamiltonianIsHermitianProperty) {
  const ScSingleQubit sys(ScSingleParams{});
  const auto s = sys.schedule(GateSpec::ry(kPi / 4), PathSpec{0.25 * kPi, 0.0, std::nullopt});
  const TransmonChainModel chain = sys.driven_chain(s);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> t(0.0, s.tau());
  for (int k = 0; k < 100; ++k) EXPECT_TRUE(is_hermitian(sc_driven_hamiltonian(chain, t(rng)), 1e-9));
}

TEST(Chain, DrivenHamiltonianConservesExcitations) {
  const ScSingleQubit sys(ScSingleParams{});
  const auto s = sys.schedule(GateSpec::rx(kPi / 2), PathSpec{0.25 * kPi, 0.0, std::nullopt});
  const TransmonChainModel chain = sys.driven_chain(s);
  const ComplexMatrix n = chain.total_number();
  for (double t : {0.0, 0.013, 0.2 * s.tau(), 0.77 * s.tau()}) {
    const ComplexMatrix h = sc_driven_hamiltonian(chain, t);
    EXPECT_LT(max_abs(h * n - n * h), 1e-9);
  }
}

TEST(Sc, EffectiveRabiFrequency) {
  const ScSingleQubit sys(ScSingleParams{});
  const auto s = sys.schedule(GateSpec::rx(kPi / 2), PathSpec{0.25 * kPi, 0.0, std::nullopt});
  const ComplexMatrix h = sc_effective_hamiltonian(s, mhz(10.0), 1.7, 0.5 * s.tau());
  EXPECT_NEAR(2.0 * std::abs(h(0, 2)), mhz(20.0 * j1_series(1.7)), 1e-9);
  EXPECT_NEAR(2.0 * std::abs(h(0, 2)) / mhz(1.0), 11.556, 1e-3);
  EXPECT_EQ(max_abs(sc_effective_hamiltonian(s, mhz(10.0), 0.0, 0.5 * s.tau())), 0.0);
}

TEST(Sc, EffectiveMatchesLambdaStructure) {
  const ScSingleQubit sys(ScSingleParams{});
  const auto s = sys.schedule(GateSpec::ry(kPi / 4), PathSpec{0.25 * kPi, 0.0, std::nullopt});
  for (double t : {0.1 * s.tau(), 0.6 * s.tau()}) {
    const ComplexMatrix a = sc_effective_hamiltonian(s, mhz(10.0), 1.7, t);
    const ComplexMatrix b = lambda_hamiltonian(LambdaModel{s, 0.0, 0.0}, t);
    EXPECT_LT(max_abs(a - b), 1e-9 * s.omega_max());
  }
}

TEST(Sc, ErrorHamiltonians) {
  const ScSingleQubit sys(ScSingleParams{});
  const auto s = sys.schedule(GateSpec::rx(kPi / 2), PathSpec{0.25 * kPi, 0.0, std::nullopt});
  const double t = 0.3 * s.tau();
  const auto zero = sc_error_hamiltonians(sys, {}, ScConfig::cavity, s, t);
  EXPECT_EQ(max_abs(zero.delta), 0.0);
  EXPECT_EQ(max_abs(zero.epsilon), 0.0);

  ScErrors e;
  e.delta1 = e.delta2 = mhz(2.0);
  const auto cav = sc_error_hamiltonians(sys, e, ScConfig::cavity, s, t);
  EXPECT_LT(max_abs(cav.delta - ComplexMatrix(cav.delta.diagonal().asDiagonal())), 1e-15);
  EXPECT_NEAR(cav.delta(sys.logical0(), sys.logical0()).real(), mhz(2.0), 1e-12);
  EXPECT_NEAR(cav.delta(sys.logical1(), sys.logical1()).real(), mhz(2.0), 1e-12);
  EXPECT_EQ(cav.delta(sys.auxiliary(), sys.auxiliary()), 0.0);

  e.delta1 = e.delta2 = mhz(1.0);
  const auto tt = sc_error_hamiltonians(sys, e, ScConfig::three_transmon, s, t);
  EXPECT_NEAR(tt.delta(sys.auxiliary(), sys.auxiliary()).real(), -mhz(1.0), 1e-12);

  ScErrors eps;
  eps.eps1 = mhz(1.0);
  const auto h = sc_error_hamiltonians(sys, eps, ScConfig::cavity, s, t);
  EXPECT_NEAR(std::abs(h.epsilon(sys.logical0(), sys.auxiliary())), 0.5 * mhz(1.0), 1e-12);
  EXPECT_TRUE(is_hermitian(h.epsilon));
}

TEST(Sc, CollapseOperators) {
  const ScSingleQubit sys(ScSingleParams{});
  const auto cav = sc_collapse_ops(ScConfig::cavity, khz(3.0), &sys, nullptr);
  const auto tt = sc_collapse_ops(ScConfig::three_transmon, khz(3.0), &sys, nullptr);
  const auto& chain = sys.chain();
  const ComplexMatrix aux_z =
      chain.level_projector(kSiteAux, 1) - chain.level_projector(kSiteAux, 0);
  const ComplexMatrix diff = tt.channels[1].op - cav.channels[1].op;
  EXPECT_LT(max_abs(diff - aux_z), 1e-15);
  EXPECT_NEAR(cav.channels[0].rate, mhz(3e-3), 1e-15);

  const TwoQubitSpace space(2);
  const auto two = sc_collapse_ops(ScConfig::two_qubit, khz(3.0), nullptr, &space);
  const ComplexMatrix& lower = two.channels[0].op;
  EXPECT_NEAR(lower(space.index({0, 1, 0, 0}), space.index({0, 2, 0, 0})).real(), std::sqrt(2.0),
              1e-15);
  EXPECT_NEAR(lower(space.index({0, 0, 0, 0}), space.index({0, 1, 0, 0})).real(), 1.0, 1e-15);
}

TEST(Pair, OmegaPrime) {
  const TwoQubitParams p;
  EXPECT_NEAR(p.omega_prime(), 2 * std::sqrt(2.0) * mhz(8.0) * j1_series(2.0), 1e-9);
  EXPECT_NEAR(p.omega_prime() / mhz(1.0), 13.05, 0.01);
  EXPECT_NEAR(p.modulation(), mhz(370.0), 1e-9);
}

TEST(Pair, EffectiveModeSingleTerm) {
  const TwoQubitParams p;
  const ComplexMatrix h = two_qubit_hamiltonian(p, [](double) { return 0.0; }, 0.0123,
                                                TwoQubitMode::effective);
  int nonzero = 0;
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) nonzero += std::abs(h(r, c)) > 0.0;
  EXPECT_EQ(nonzero, 2);
  EXPECT_NEAR(std::abs(h(3 * 1 + 1, 3 * 0 + 2)), std::sqrt(2.0) * p.g23 * j1_series(2.0), 1e-9);
}

TEST(Pair, FullModeWeightsAtZero) {
  const TwoQubitParams p;
  const ComplexMatrix h = two_qubit_hamiltonian(p, {}, 0.0, TwoQubitMode::full);
  const double base = p.g23 * j1_series(p.beta3);
  EXPECT_NEAR(std::abs(h(3, 1)), base, 1e-9);
  EXPECT_NEAR(std::abs(h(4, 2)), std::sqrt(2.0) * base, 1e-9);
  EXPECT_NEAR(std::abs(h(6, 4)), std::sqrt(2.0) * base, 1e-9);
  EXPECT_TRUE(is_hermitian(h));
}

TEST(Pair, HermitianAndConservingProperty) {
  const TwoQubitParams p;
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> t(0.0, 0.1), ph(-kPi, kPi);
  ComplexMatrix n = ComplexMatrix::Zero(9, 9);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) n(3 * a + b, 3 * a + b) = a + b;
  for (auto mode : {TwoQubitMode::full, TwoQubitMode::effective, TwoQubitMode::exact}) {
    for (int k = 0; k < 30; ++k) {
      const double phase = ph(rng);
      const ComplexMatrix h = two_qubit_hamiltonian(p, [phase](double) { return phase; }, t(rng), mode);
      EXPECT_TRUE(is_hermitian(h));
      EXPECT_LT(max_abs(h * n - n * h), 1e-12);
    }
  }
}

TEST(Pair, SpaceDimensions) {
  EXPECT_EQ(TwoQubitSpace(2).dim(), 15);
  EXPECT_EQ(TwoQubitSpace(-1).dim(), 81);
  const TwoQubitSpace s(2);
  EXPECT_EQ(s.labels()[s.index({0, 1, 1, 0})], "|0110⟩");
  EXPECT_THROW(s.index({1, 1, 1, 0}), std::out_of_range);
}

TEST(Pair, EmbedIsIdentityOnSpectators) {
  const TwoQubitSpace s(-1);
  const ComplexMatrix op = two_qubit_hamiltonian(TwoQubitParams{}, {}, 0.01, TwoQubitMode::full);
  const ComplexMatrix big = s.embed_pair(op);
  const ComplexMatrix id3 = ComplexMatrix::Identity(3, 3);
  EXPECT_LT(max_abs(big - kron_all({id3, op, id3})), 1e-15);
}

TEST(Dfs, Encodings) {
  const auto zero = dfs_encode(QuantumState::from_vector(basis_ket(2, 0)), DfsSubspace::S1);
  EXPECT_NEAR(std::norm(zero.vector()(zero.index_of("|100⟩"))), 1.0, 1e-15);
  const auto one = dfs_encode(QuantumState::from_vector(basis_ket(2, 1)), DfsSubspace::S1);
  EXPECT_NEAR(std::norm(one.vector()(one.index_of("|001⟩"))), 1.0, 1e-15);

  const auto eleven = dfs_encode(QuantumState::from_vector(basis_ket(4, 3)), DfsSubspace::S2);
  EXPECT_NEAR(std::norm(eleven.vector()(eleven.index_of("|0110⟩"))), 1.0, 1e-15);

  ComplexVector probe = ComplexVector::Zero(4);
  probe(1) = probe(3) = 1.0 / std::sqrt(2.0);
  const auto in = dfs_encode(QuantumState::from_vector(probe), DfsSubspace::S2);
  EXPECT_NEAR(std::norm(in.vector()(in.index_of("|1010⟩"))), 0.5, 1e-15);
  EXPECT_NEAR(std::norm(in.vector()(in.index_of("|0110⟩"))), 0.5, 1e-15);
}

TEST(Dfs, CpTarget) {
  EXPECT_EQ(max_abs(cp_target(0.0) - ComplexMatrix::Identity(4, 4)), 0.0);
  ComplexMatrix cz = ComplexMatrix::Identity(4, 4);
  cz(3, 3) = -1.0;
  EXPECT_LT(max_abs(cp_target(kPi) - cz), 1e-15);
  EXPECT_LT(std::abs(cp_target(kPi / 4)(3, 3) - std::exp(kI * (kPi / 4))), 1e-15);
}

TEST(Config, JsonRoundTrip) {
  ModelConfig c;
  c.single.beta = 1.6;
  c.pair.delta3 = mhz(650.0);
  c.pair.nu3 = mhz(320.0);
  const ModelConfig back = model_config_from_json(to_json(c));
  EXPECT_NEAR(back.single.beta, 1.6, 1e-15);
  EXPECT_NEAR(back.pair.delta3, mhz(650.0), 1e-9);
  ASSERT_TRUE(back.pair.nu3.has_value());
  EXPECT_NEAR(*back.pair.nu3, mhz(320.0), 1e-9);
}

TEST(Config, RejectsUnknownAndInvalid) {
  EXPECT_THROW(model_config_from_json({{"single", {{"gee", 1.0}}}}), std::invalid_argument);
  EXPECT_THROW(model_config_from_json({{"extra", 1}}), std::invalid_argument);
  EXPECT_THROW(model_config_from_json({{"single", {{"g_mhz", -1.0}}}}), std::invalid_argument);
}
