#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "layerfid/circuits/builders.hpp"
#include "layerfid/noise/channels.hpp"
#include "layerfid/simulator/simulator.hpp"

namespace layerfid {
namespace {

constexpr double kUnit = 50e-9;

Slice idle_slice() { return Slice{1, {}, false}; }

Slice x90_slice(int q) {
  Slice s;
  s.ops.push_back({NativeOp::x90(q), 0, 1});
  return s;
}

// Slow oracle: full-register unitaries and Kraus maps built from the core
// channel types, one slice at a time.
ComplexMatrix oracle_evolve(const ScheduledCircuit& sched, const NoiseModel& noise) {
  const int n = sched.num_qubits;
  const Eigen::Index d = Eigen::Index{1} << n;
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  rho(0, 0) = 1.0;
  for (const auto& slice : sched.slices) {
    std::vector<NativeOp> rz;
    for (const auto& s : slice.ops) {
      if (s.op.kind == NativeOp::Kind::Rz) rz.push_back(s.op);
    }
    ComplexMatrix u = sequence_unitary(rz, n);
    if (slice.duration == 1) {
      ComplexMatrix h = ComplexMatrix::Zero(d, d);
      for (const auto& s : slice.ops) {
        if (s.op.kind == NativeOp::Kind::X90) {
          const int q[] = {s.op.qubits[0]};
          h += embed(PauliString::from_label("X").matrix() * (M_PI / 4.0), q, n);
        } else if (s.op.kind == NativeOp::Kind::TwoQubit) {
          h += embed(two_qubit_generator(s.op.type) / static_cast<double>(s.steps), s.op.qubits, n);
        }
      }
      u = hermitian_exp(h) * u;
    }
    rho = u * rho * u.adjoint();
    if (slice.duration == 0) continue;
    for (const auto& t : noise.stochastic_terms) {
      const ComplexMatrix p = embed(t.pauli.matrix(), t.qubits, n);
      rho = (1.0 - t.probability) * rho + t.probability * p * rho * p.adjoint();
    }
    for (const auto& s : slice.ops) {
      if (s.op.kind != NativeOp::Kind::TwoQubit || s.step != s.steps - 1) continue;
      for (const auto& g : noise.gate_depolarizing) {
        if (!((g.q0 == s.op.qubits[0] && g.q1 == s.op.qubits[1]) || (g.q0 == s.op.qubits[1] && g.q1 == s.op.qubits[0]))) continue;
        ComplexMatrix twirl = ComplexMatrix::Zero(d, d);
        const int qs[] = {g.q0, g.q1};
        for (std::uint64_t i = 0; i < 16; ++i) {
          const ComplexMatrix p = embed(pauli_matrix(2, i), qs, n);
          twirl += p * rho * p.adjoint();
        }
        rho = g.alpha * rho + (1.0 - g.alpha) / 16.0 * twirl;
      }
    }
    for (int q = 0; q < n; ++q) {
      const auto& c = noise.qubits[static_cast<std::size_t>(q)];
      if (!std::isfinite(c.t1) && !std::isfinite(c.t2)) continue;
      const auto kraus = t1t2_step_channel(c.t1, c.t2, sched.unit_time).to_kraus();
      ComplexMatrix next = ComplexMatrix::Zero(d, d);
      const int qs[] = {q};
      for (const auto& k : kraus) {
        const ComplexMatrix kk = embed(k, qs, n);
        next += kk * rho * kk.adjoint();
      }
      rho = next;
    }
  }
  return rho;
}

TEST(Simulator, EmptyScheduleKeepsInitialState) {
  ScheduledCircuit sched;
  sched.num_qubits = 3;
  const auto rho = evolve(sched, NoiseModel::uniform_coherence(3, 50e-6, 50e-6));
  EXPECT_NEAR(rho.population(0), 1.0, 1e-15);
}

TEST(Simulator, AmplitudeDampingOnIdle) {
  const NoiseModel noise = NoiseModel::uniform_coherence(1, 50e-6, 50e-6);
  ScheduledCircuit prep;
  prep.num_qubits = 1;
  prep.unit_time = kUnit;
  prep.slices = {x90_slice(0), x90_slice(0)};
  ScheduledCircuit idle = prep;
  for (int i = 0; i < 8; ++i) idle.slices.push_back(idle_slice());
  const double before = evolve(prep, noise).population(1);
  const double after = evolve(idle, noise).population(1);
  EXPECT_GT(before, 0.99);
  EXPECT_NEAR(after / before, std::exp(-0.008), 1e-12);
}

TEST(Simulator, MatchesKrausOracle) {
  NoiseModel noise = NoiseModel::uniform_coherence(3, 40e-6, 30e-6);
  noise.qubits[2] = {60e-6, 100e-6};
  noise.stochastic_terms.push_back({{0, 2}, PauliString::from_label("XY"), 0.01});
  noise.stochastic_terms.push_back({{1}, PauliString::from_label("Z"), 0.02});
  noise.gate_depolarizing.push_back({1, 2, 0.97});
  RBConfig cfg;
  cfg.depths = {3};
  cfg.randomizations = 1;
  const auto rb = build_direct_rb(LayerSpec::chain(3, TwoQubitGateType::ECR, 3), 1, cfg)[0];
  const auto sched = schedule(rb.circuit, kUnit);
  const auto rho = evolve(sched, noise);
  EXPECT_LT((rho.matrix() - oracle_evolve(sched, noise)).norm(), 1e-10);
}

TEST(Simulator, ProductMatchesDense) {
  Simulator sim(scenario_preset('g'));
  RBConfig cfg;
  cfg.depths = {4};
  cfg.randomizations = 1;
  for (const auto& rb : build_direct_rb(LayerSpec::chain(4), 0, cfg)) {
    const auto sched = schedule(rb.circuit, kUnit);
    const auto dense = sim.evolve(sched);
    const auto product = sim.evolve_product(sched).to_density_matrix();
    EXPECT_LT((dense.matrix() - product.matrix()).norm(), 1e-10);
  }
}

TEST(Simulator, TraceAndHermiticityPreserved) {
  RBConfig cfg;
  cfg.depths = {10};
  cfg.randomizations = 1;
  for (char sc = 'a'; sc <= 'i'; ++sc) {
    Simulator sim(scenario_preset(sc));
    const auto rb = build_simultaneous_rb(LayerSpec::chain(4), 0, cfg)[0];
    const auto rho = sim.evolve(schedule(rb.circuit, kUnit, Alignment::Late));
    EXPECT_NEAR(rho.trace(), 1.0, 1e-9) << sc;
    EXPECT_LT((rho.matrix() - rho.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-10) << sc;
  }
}

TEST(Simulator, NoiselessFamiliesReturnTargets) {
  Simulator sim(NoiseModel::noiseless(4));
  const LayerSpec spec = LayerSpec::from_edge_sets(4, {{{0, 1, TwoQubitGateType::ECR, 5}, {2, 3, TwoQubitGateType::ECR, 8}}, {{1, 2, TwoQubitGateType::ECR, 6}}});
  RBConfig cfg;
  cfg.depths = {2, 6};
  cfg.randomizations = 2;
  std::vector<RBCircuit> all;
  for (int m = 0; m < 2; ++m) {
    for (auto f : {RBFamily::Direct, RBFamily::Simultaneous, RBFamily::Staggered}) {
      cfg.family = f;
      for (auto& c : build_rb(spec, cfg, m)) all.push_back(std::move(c));
    }
  }
  for (auto& c : build_isolated_rb(spec, 0, 1, cfg)) all.push_back(std::move(c));
  for (bool pauli : {true, false}) {
    for (auto& c : build_mirror(spec, cfg, pauli)) all.push_back(std::move(c));
  }
  for (const auto& rb : all) {
    const auto out = simulate(rb, sim, {});
    for (double p : out.survival) EXPECT_NEAR(p, 1.0, 1e-9) << to_string(rb.family);
  }
}

TEST(Simulator, DisjointUnitsStayIndependent) {
  NoiseModel noise = NoiseModel::noiseless(4);
  noise.qubits[0] = {30e-6, 20e-6};
  noise.stochastic_terms.push_back({{0, 1}, PauliString::from_label("XX"), 0.02});
  noise.gate_depolarizing.push_back({0, 1, 0.95});
  Simulator sim(noise);
  RBConfig cfg;
  cfg.depths = {8};
  cfg.randomizations = 2;
  for (const auto& rb : build_direct_rb(LayerSpec::chain(4), 0, cfg)) {
    const auto out = simulate(rb, sim, {});
    EXPECT_LT(out.survival[0], 0.99);
    EXPECT_NEAR(out.survival[1], 1.0, 1e-9);
  }
}

TEST(Simulator, GateDepolarizingComposes) {
  NoiseModel noise = NoiseModel::noiseless(2);
  noise.gate_depolarizing.push_back({0, 1, 0.9});
  Circuit c;
  c.num_qubits = 2;
  c.add(NativeOp::two_qubit(TwoQubitGateType::CX, 0, 1), 4);
  c.add(NativeOp::two_qubit(TwoQubitGateType::CX, 0, 1), 4);
  const auto rho = evolve(schedule(c, kUnit), noise);
  const int both[] = {0, 1};
  EXPECT_NEAR(unit_survival(rho, both, 0), 0.81 + 0.19 / 4.0, 1e-12);
}

TEST(Simulator, ProcessFidelityOfKnownChannels) {
  NoiseModel noise = NoiseModel::noiseless(3);
  noise.gate_depolarizing.push_back({0, 1, 0.9});
  noise.qubits[2] = {20e-6, 10e-6};
  Circuit c;
  c.num_qubits = 3;
  c.add(NativeOp::two_qubit(TwoQubitGateType::CX, 0, 1), 4);
  c.add(NativeOp::x90(2));
  const auto sched = schedule(c, kUnit);
  std::vector<NativeOp> ops;
  for (const auto& ins : c.instructions) ops.push_back(ins.op);
  const ComplexMatrix u = sequence_unitary(ops, 3);
  Simulator sim(noise);
  const double t = 4 * kUnit;
  const double idle = (1.0 + 2.0 * std::exp(-t / 10e-6) + std::exp(-t / 20e-6)) / 4.0;
  EXPECT_NEAR(sim.process_fidelity(sched, u), (1.0 + 15.0 * 0.9) / 16.0 * idle, 1e-12);
  EXPECT_NEAR(Simulator(NoiseModel::noiseless(3)).process_fidelity(sched, u), 1.0, 1e-12);
  EXPECT_THROW(sim.process_fidelity(sched, ComplexMatrix::Identity(4, 4)), std::invalid_argument);
}

TEST(Simulator, Deterministic) {
  Simulator sim(scenario_preset('b'));
  RBConfig cfg;
  cfg.depths = {5};
  cfg.randomizations = 1;
  const auto rb = build_direct_rb(LayerSpec::chain(4), 0, cfg)[0];
  SimOptions opt;
  opt.shots = 1000;
  opt.seed = 17;
  const nlohmann::json a = simulate(rb, sim, opt);
  Simulator fresh(scenario_preset('b'));
  const nlohmann::json b = simulate(rb, fresh, opt);
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_TRUE(a.contains("counts"));
}

TEST(Simulator, Errors) {
  ScheduledCircuit sched;
  sched.num_qubits = 11;
  for (int q = 0; q + 1 < 11; ++q) {
    Slice s;
    s.ops.push_back({NativeOp::two_qubit(TwoQubitGateType::CZ, q, q + 1), 0, 1});
    sched.slices.push_back(s);
  }
  EXPECT_THROW(Simulator(NoiseModel::noiseless(11)).evolve_product(sched), std::invalid_argument);
  EXPECT_THROW(evolve(sched, NoiseModel::noiseless(11)), std::invalid_argument);
  ScheduledCircuit small;
  small.num_qubits = 2;
  EXPECT_THROW(evolve(small, NoiseModel::noiseless(3)), std::invalid_argument);
  small.slices.push_back(Slice{0, {{NativeOp::x90(0), 0, 1}}, false});
  EXPECT_THROW(evolve(small, NoiseModel::noiseless(2)), std::invalid_argument);
}

TEST(Simulator, LargeRegisterFactorizes) {
  // 12 qubits of independent pairs stay within the per-block cap.
  NoiseModel noise = NoiseModel::uniform_coherence(12, 50e-6, 50e-6);
  RBConfig cfg;
  cfg.depths = {2};
  cfg.randomizations = 1;
  Simulator sim(noise);
  const auto out = simulate(build_direct_rb(LayerSpec::chain(12), 0, cfg)[0], sim, {});
  ASSERT_EQ(out.survival.size(), 6U);
  for (double p : out.survival) {
    EXPECT_LT(p, 1.0);
    EXPECT_GT(p, 0.9);
  }
}

TEST(UnitSurvival, Basics) {
  const auto zero = DensityMatrix::zero_state(3);
  const int pair[] = {0, 2};
  EXPECT_DOUBLE_EQ(unit_survival(zero, pair, 0), 1.0);
  EXPECT_DOUBLE_EQ(unit_survival(zero, pair, 1), 0.0);
  const auto mixed = DensityMatrix::from_matrix(ComplexMatrix::Identity(8, 8) / 8.0);
  EXPECT_NEAR(unit_survival(mixed, pair, 2), 0.25, 1e-15);
}

TEST(UnitSurvival, ProductStateMatchesPartialTrace) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  auto random_state = [&](int k) {
    const Eigen::Index d = Eigen::Index{1} << k;
    ComplexMatrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) a(i, j) = {g(rng), g(rng)};
    }
    ComplexMatrix rho = a * a.adjoint();
    return ComplexMatrix(rho / rho.trace());
  };
  ProductState s;
  s.num_qubits = 4;
  s.blocks.push_back({{0, 2}, random_state(2)});
  s.blocks.push_back({{1, 3}, random_state(2)});
  const auto dense = s.to_density_matrix();
  const std::vector<std::vector<int>> units = {{0}, {1, 2}, {3, 0}, {2, 1, 0, 3}};
  for (const auto& u : units) {
    for (std::uint64_t t = 0; t < (1ULL << u.size()); ++t) {
      EXPECT_NEAR(unit_survival(s, u, t), unit_survival(dense, u, t), 1e-12);
    }
  }
}

TEST(Sample, Counts) {
  std::mt19937_64 rng(1);
  const double ps[] = {1.0, 0.5, 0.0};
  const auto counts = sample(ps, 100000, rng);
  EXPECT_EQ(counts[0], 100000U);
  EXPECT_EQ(counts[2], 0U);
  EXPECT_LT(std::abs(static_cast<double>(counts[1]) - 50000.0), 5.0 * std::sqrt(100000 * 0.25));
  std::mt19937_64 again(1);
  EXPECT_EQ(sample(ps, 100000, again), counts);
  EXPECT_TRUE(sample(ps, 0, again).empty());
}

}  // namespace
}  // namespace layerfid
