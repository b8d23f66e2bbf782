#include <gtest/gtest.h>

#include <random>

#include "layerfid/core/clifford.hpp"

namespace layerfid {
namespace {

CliffordTableau random_two_qubit_clifford(std::mt19937_64& rng) {
  // Random words in locals and CX reach the whole group.
  std::uniform_int_distribution<int> local(0, kSingleQubitCliffordCount - 1);
  CompactClifford2 c = CompactClifford2::local(local(rng), local(rng));
  const auto cx = CompactClifford2::from_tableau(CliffordTableau::from_unitary(two_qubit_gate_matrix(TwoQubitGateType::CX)));
  for (int k = 0; k < 6; ++k) c = CompactClifford2::local(local(rng), local(rng)) * cx * c;
  return c.to_tableau();
}

TEST(SingleQubitCliffords, EnumeratesTheGroup) {
  const auto& g = SingleQubitCliffords::instance();
  EXPECT_TRUE(g.tableau(0).is_identity());
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < kSingleQubitCliffordCount; ++i) {
    const auto ops = g.ops(i, 0);
    EXPECT_EQ(CliffordTableau::from_ops(ops, 1), g.tableau(i));
    EXPECT_TRUE(g.tableau(g.multiply(g.inverse(i), i)).is_identity());
    ++counts[g.x90_count(i)];
  }
  EXPECT_EQ(counts[0], 4);
  EXPECT_EQ(counts[1], 16);
  EXPECT_EQ(counts[2], 4);
}

TEST(CliffordTableau, UnitaryRoundTripAndInverse) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const CliffordTableau t = random_two_qubit_clifford(rng);
    EXPECT_TRUE((t * t.inverse()).is_identity());
    EXPECT_TRUE((t.inverse() * t).is_identity());
    const auto ops = TwoQubitSynthesizer::instance(TwoQubitGateType::CX).synthesize(t, 0, 1);
    EXPECT_EQ(CliffordTableau::from_unitary(sequence_unitary(ops, 2)), t);
  }
}

TEST(CliffordTableau, ConjugationMatchesDense) {
  std::mt19937_64 rng(11);
  const CliffordTableau t = random_two_qubit_clifford(rng);
  const auto ops = TwoQubitSynthesizer::instance(TwoQubitGateType::CZ).synthesize(t, 0, 1);
  const ComplexMatrix u = sequence_unitary(ops, 2);
  for (std::uint64_t i = 0; i < 16; ++i) {
    const PauliString p = PauliString::from_index(2, i);
    EXPECT_LT((u * p.matrix() * u.adjoint() - t.conjugate(p).matrix()).norm(), 1e-9);
  }
}

TEST(CliffordTableau, RejectsNonClifford) {
  EXPECT_THROW(CliffordTableau::from_unitary(rz_matrix(0.3)), std::invalid_argument);
  EXPECT_THROW(CliffordTableau::from_images({PauliString::from_label("X"), PauliString::from_label("X")}), std::invalid_argument);
}

TEST(CliffordTableau, TensorActsOnLeadingQubits) {
  const auto& g = SingleQubitCliffords::instance();
  for (int a = 0; a < kSingleQubitCliffordCount; a += 5) {
    for (int b = 0; b < kSingleQubitCliffordCount; b += 7) {
      std::vector<NativeOp> ops = g.ops(a, 0);
      for (const auto& op : g.ops(b, 1)) ops.push_back(op);
      EXPECT_EQ(clifford_tensor(g.tableau(a), g.tableau(b)), CliffordTableau::from_ops(ops, 2));
    }
  }
}

class SynthesisTest : public ::testing::TestWithParam<TwoQubitGateType> {};

TEST_P(SynthesisTest, CoversGroupWithAtMostThreeGates) {
  const auto& synth = TwoQubitSynthesizer::instance(GetParam());
  EXPECT_EQ(synth.size(), static_cast<std::size_t>(kTwoQubitCliffordCount));
  std::mt19937_64 rng(2024);
  int histogram[4] = {0, 0, 0, 0};
  for (int trial = 0; trial < 1000; ++trial) {
    const CliffordTableau t = random_two_qubit_clifford(rng);
    const auto ops = synth.synthesize(t, 0, 1);
    EXPECT_EQ(CliffordTableau::from_unitary(sequence_unitary(ops, 2)), t);
    const int gates = synth.gate_count(CompactClifford2::from_tableau(t));
    ASSERT_LE(gates, 3);
    ++histogram[gates];
  }
  EXPECT_GT(histogram[2], 0);
  EXPECT_GT(histogram[3], 0);
}

TEST_P(SynthesisTest, SynthesisOnArbitraryQubitPair) {
  std::mt19937_64 rng(5);
  const CliffordTableau t = random_two_qubit_clifford(rng);
  const auto ops = TwoQubitSynthesizer::instance(GetParam()).synthesize(t, 2, 0);
  const ComplexMatrix u3 = sequence_unitary(ops, 3);
  const ComplexMatrix u2 = sequence_unitary(TwoQubitSynthesizer::instance(GetParam()).synthesize(t, 0, 1), 2);
  const std::array<int, 2> targets{2, 0};
  EXPECT_TRUE(equal_up_to_phase(u3, embed(u2, targets, 3)));
}

INSTANTIATE_TEST_SUITE_P(NativeGates, SynthesisTest,
                         ::testing::Values(TwoQubitGateType::CX, TwoQubitGateType::CZ, TwoQubitGateType::ECR),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(TwoQubitSynthesizer, LevelSizes) {
  // Counts of Cliffords needing exactly k native gates.
  std::mt19937_64 rng(1);
  const auto& synth = TwoQubitSynthesizer::instance(TwoQubitGateType::CX);
  std::array<int, 4> levels{};
  const auto& g = SingleQubitCliffords::instance();
  (void)g;
  // Enumerate through tableau products to visit every element once.
  std::vector<CompactClifford2> all;
  std::vector<char> seen(std::size_t{1} << 20, 0);
  std::vector<CompactClifford2> stack{CompactClifford2::identity()};
  const auto cx = synth.native_gate();
  std::vector<CompactClifford2> gens{cx, CompactClifford2::local(1, 0), CompactClifford2::local(0, 1)};
  for (int a = 0; a < kSingleQubitCliffordCount; ++a) gens.push_back(CompactClifford2::local(a, 0));
  for (int b = 0; b < kSingleQubitCliffordCount; ++b) gens.push_back(CompactClifford2::local(0, b));
  seen[CompactClifford2::identity().key()] = 1;
  while (!stack.empty()) {
    const auto c = stack.back();
    stack.pop_back();
    ++levels[static_cast<std::size_t>(synth.gate_count(c))];
    for (const auto& gen : gens) {
      const auto next = gen * c;
      if (!seen[next.key()]) {
        seen[next.key()] = 1;
        stack.push_back(next);
      }
    }
  }
  EXPECT_EQ(levels[0], 576);
  EXPECT_EQ(levels[1], 5184);
  EXPECT_EQ(levels[2], 5184);
  EXPECT_EQ(levels[3], 576);
}

TEST(Gates, EcrIsNotSelfInverse) {
  const ComplexMatrix g = two_qubit_gate_matrix(TwoQubitGateType::ECR);
  EXPECT_FALSE(equal_up_to_phase(g * g, ComplexMatrix::Identity(4, 4)));
  EXPECT_TRUE(equal_up_to_phase(g * g, PauliString::from_label("ZX").matrix()));
  EXPECT_TRUE(equal_up_to_phase(two_qubit_gate_matrix(TwoQubitGateType::CX) * two_qubit_gate_matrix(TwoQubitGateType::CX),
                                ComplexMatrix::Identity(4, 4)));
}

TEST(Gates, CxMapsControlOneToFlippedTarget) {
  const ComplexMatrix cx = two_qubit_gate_matrix(TwoQubitGateType::CX);
  // |10> (index 2) -> |11> (index 3) with qubit 0 as control.
  EXPECT_NEAR(std::abs(cx(3, 2)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(cx(0, 0)), 1.0, 1e-12);
}

}  // namespace
}  // namespace layerfid
