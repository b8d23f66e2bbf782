#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "layerfid/noise/channels.hpp"
#include "layerfid/noise/noise_model.hpp"

namespace layerfid {
namespace {

TEST(T1T2Step, ZeroDurationIsIdentity) {
  const PTM r = ptm_from_channel(t1t2_step_channel(50e-6, 50e-6, 0.0));
  EXPECT_LT((r.matrix() - RealMatrix::Identity(4, 4)).norm(), 1e-14);
}

TEST(T1T2Step, ExcitedPopulationDecay) {
  ComplexMatrix one = ComplexMatrix::Zero(2, 2);
  one(1, 1) = 1.0;
  const ComplexMatrix out = t1t2_step_channel(50e-6, 50e-6, 50e-9).apply(one);
  EXPECT_NEAR(out(1, 1).real(), std::exp(-0.001), 1e-14);
}

TEST(T1T2Step, ProcessErrorMatchesClosedForm) {
  for (double t2 : {20e-6, 50e-6, 100e-6}) {
    const double dt = 400e-9;
    const double f = process_fidelity(ptm_from_channel(t1t2_step_channel(50e-6, t2, dt)));
    const std::array<double, 1> t1s{50e-6};
    const std::array<double, 1> t2s{t2};
    EXPECT_NEAR(1.0 - f, incoherent_layer_error(t1s, t2s, dt), 1e-10);
  }
}

TEST(T1T2Step, RejectsUnphysicalT2) {
  EXPECT_THROW(t1t2_step_channel(10e-6, 30e-6, 1e-9), std::invalid_argument);
  EXPECT_THROW(t1t2_step_channel(10e-6, 10e-6, -1.0), std::invalid_argument);
  EXPECT_NO_THROW(t1t2_step_channel(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 1e-6));
}

TEST(IncoherentLayerError, Values) {
  const std::array<double, 2> t{50e-6, 50e-6};
  EXPECT_DOUBLE_EQ(incoherent_layer_error(std::span(t).first(1), std::span(t).first(1), 0.0), 0.0);
  EXPECT_NEAR(incoherent_layer_error(std::span(t).first(1), std::span(t).first(1), 400e-9), 5.976e-3, 1e-6);
  EXPECT_NEAR(incoherent_layer_error(t, t, 400e-9), 1.192e-2, 1e-5);
}

TEST(CoherentProcessError, ZRotation) {
  EXPECT_NEAR(coherent_process_error(rz_matrix(0.0), ComplexMatrix::Identity(2, 2)), 0.0, 1e-15);
  EXPECT_NEAR(coherent_process_error(rz_matrix(0.02), ComplexMatrix::Identity(2, 2)), 9.99967e-5, 1e-10);
  EXPECT_NEAR(coherent_process_error(rz_matrix(0.02), ComplexMatrix::Identity(2, 2)), std::pow(std::sin(0.01), 2), 1e-15);
  EXPECT_THROW(coherent_process_error(2.0 * rz_matrix(0.1), ComplexMatrix::Identity(2, 2)), std::invalid_argument);
}

TEST(CoherentProcessError, OverrotatedCxMatchesSliceComposition) {
  // Eight unit slices of a CX with 10% overrotation, composed as the simulator does.
  const CoherentTerm over{CoherentKind::Overrotation2Q, {}, 0.1};
  SliceContext ctx;
  ctx.dt = 50e-9;
  ctx.gates.push_back({0, 1, TwoQubitGateType::CX, 8});
  ComplexMatrix u = ComplexMatrix::Identity(4, 4);
  for (int s = 0; s < 8; ++s) {
    ComplexMatrix h = two_qubit_generator(TwoQubitGateType::CX) / 8.0;
    for (const auto& g : coherent_term_generators(over, ctx, 2)) h += g.h;
    u = hermitian_exp(h) * u;
  }
  const double expected = 1.0 - (10.0 + 6.0 * std::cos(0.1 * std::numbers::pi)) / 16.0;
  EXPECT_NEAR(coherent_process_error(u, two_qubit_gate_matrix(TwoQubitGateType::CX)), expected, 1e-12);
}

TEST(CoherentTerms, ZZPhase) {
  SliceContext ctx;
  ctx.dt = 50e-9;
  const ComplexMatrix u = coherent_term_unitary({CoherentKind::ZZAlwaysOn, {0, 1}, 150e3}, ctx, 2);
  EXPECT_NEAR(-std::arg(u(3, 3)), 2 * std::numbers::pi * 1.5e5 * 5e-8, 1e-12);
  EXPECT_NEAR(-std::arg(u(3, 3)), 0.04712, 1e-5);
  EXPECT_NEAR(std::abs(u(0, 0) - 1.0), 0.0, 1e-15);
  const ComplexMatrix none = coherent_term_unitary({CoherentKind::ZZAlwaysOn, {0, 1}, 0.0}, ctx, 2);
  EXPECT_TRUE(none.isIdentity(1e-15));
}

TEST(CoherentTerms, SimultaneousZZNeedsBothQubitsInGates) {
  const CoherentTerm term{CoherentKind::ZZSimultaneous2Q, {1, 2}, 150e3};
  SliceContext ctx;
  ctx.dt = 50e-9;
  ctx.gates.push_back({0, 1, TwoQubitGateType::CX, 8});
  EXPECT_TRUE(coherent_term_unitary(term, ctx, 4).isIdentity(1e-15));
  ctx.gates.push_back({2, 3, TwoQubitGateType::CX, 8});
  EXPECT_FALSE(coherent_term_unitary(term, ctx, 4).isIdentity(1e-6));
}

TEST(CoherentTerms, DriveCrosstalkOnlyDuringDrivenGate) {
  const CoherentTerm term{CoherentKind::DriveCrosstalk, {0, 1, 1, 2}, 0.1};
  SliceContext ctx;
  ctx.dt = 50e-9;
  ctx.gates.push_back({2, 3, TwoQubitGateType::CX, 8});
  EXPECT_TRUE(coherent_term_generators(term, ctx, 4).empty());
  ctx.gates.push_back({0, 1, TwoQubitGateType::CX, 8});
  const auto gens = coherent_term_generators(term, ctx, 4);
  ASSERT_EQ(gens.size(), 1U);
  EXPECT_EQ(gens[0].qubits, (std::vector<int>{1, 2}));
  const ComplexMatrix expected = (PauliString::from_label("IY").matrix() + PauliString::from_label("ZY").matrix()) * (0.1 * std::numbers::pi / 32.0);
  EXPECT_LT((gens[0].h - expected).norm(), 1e-15);
}

TEST(CoherentTerms, RejectsOutOfRangeQubits) {
  SliceContext ctx;
  EXPECT_THROW(coherent_term_unitary({CoherentKind::ZZAlwaysOn, {0, 5}, 1e5}, ctx, 2), std::invalid_argument);
}

TEST(NoiseModel, JsonRoundTrip) {
  NoiseModel m = scenario_preset('i');
  m.stochastic_terms.push_back({{0, 2}, PauliString::from_label("XZ"), 1e-3});
  m.gate_depolarizing.push_back({0, 1, 0.99});
  m.qubits[3].t1 = std::numeric_limits<double>::infinity();
  m.qubits[3].t2 = std::numeric_limits<double>::infinity();
  const nlohmann::json j = m;
  const NoiseModel back = j.get<NoiseModel>();
  EXPECT_EQ(nlohmann::json(back), j);
  EXPECT_TRUE(std::isinf(back.qubits[3].t1));
}

TEST(NoiseModel, ValidationErrors) {
  NoiseModel m = NoiseModel::uniform_coherence(2, 10e-6, 30e-6);
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = NoiseModel::noiseless(2);
  m.coherent_terms.push_back({CoherentKind::Overrotation2Q, {}, 1.5});
  EXPECT_THROW(m.validate(), std::invalid_argument);
  nlohmann::json j = NoiseModel::noiseless(1);
  j["bogus"] = 1;
  EXPECT_THROW(j.get<NoiseModel>(), std::invalid_argument);
}

TEST(NoiseModel, ScenarioPresetsValidate) {
  for (char s = 'a'; s <= 'i'; ++s) {
    EXPECT_NO_THROW(scenario_preset(s).validate()) << s;
    EXPECT_FALSE(scenario_description(s).empty());
  }
  EXPECT_THROW(scenario_preset('z'), std::invalid_argument);
}

TEST(RandomPauliChannel, RespectsIdentityFloor) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto p = random_pauli_probabilities(2, rng, 0.6);
    EXPECT_GE(p[0], 0.6);
    EXPECT_NO_THROW(QuantumChannel::pauli(2, p, 1e-12));
  }
}

}  // namespace
}  // namespace layerfid
