#include <gtest/gtest.h>

#include <numbers>

#include "layerfid/circuits/builders.hpp"
#include "layerfid/circuits/schedule.hpp"

namespace layerfid {
namespace {

LayerSpec mixed_durations() {
  return LayerSpec::from_edge_sets(4, {{{0, 1, TwoQubitGateType::CX, 5}, {2, 3, TwoQubitGateType::CX, 8}}});
}

TEST(Schedule, SingleX90) {
  Circuit c;
  c.num_qubits = 1;
  c.add(NativeOp::x90(0));
  const auto s = schedule(c, 50e-9);
  ASSERT_EQ(s.slices.size(), 1U);
  EXPECT_EQ(s.slices[0].duration, 1);
  EXPECT_DOUBLE_EQ(s.wall_time(), 50e-9);
}

TEST(Schedule, RzIsZeroDurationAndMerges) {
  Circuit c;
  c.num_qubits = 2;
  c.add(NativeOp::rz(0, 0.5));
  c.add(NativeOp::rz(0, 0.25));
  c.add(NativeOp::x90(0));
  c.add(NativeOp::rz(1, 1.0));
  const auto s = schedule(c, 1.0);
  ASSERT_EQ(s.slices.size(), 2U);
  EXPECT_EQ(s.slices[0].duration, 0);
  ASSERT_EQ(s.slices[0].ops.size(), 2U);
  EXPECT_DOUBLE_EQ(s.slices[0].ops[0].op.angle, 0.75);
  EXPECT_EQ(s.total_units(), 1);
}

TEST(Schedule, TwoQubitGateSpansItsDuration) {
  Circuit c;
  c.num_qubits = 2;
  c.add(NativeOp::two_qubit(TwoQubitGateType::CX, 0, 1), 8);
  const auto s = schedule(c, 1.0);
  ASSERT_EQ(s.slices.size(), 8U);
  for (int i = 0; i < 8; ++i) {
    ASSERT_EQ(s.slices[static_cast<std::size_t>(i)].ops.size(), 1U);
    EXPECT_EQ(s.slices[static_cast<std::size_t>(i)].ops[0].step, i);
    EXPECT_EQ(s.slices[static_cast<std::size_t>(i)].ops[0].steps, 8);
  }
}

TEST(Schedule, BarrierPadsShortGate) {
  Circuit c;
  c.num_qubits = 4;
  c.add(NativeOp::two_qubit(TwoQubitGateType::CX, 0, 1), 5);
  c.add(NativeOp::two_qubit(TwoQubitGateType::CX, 2, 3), 8);
  c.barrier();
  c.add(NativeOp::x90(0));
  const auto s = schedule(c, 1.0);
  EXPECT_EQ(s.total_units(), 9);
  // The X90 waits for the 8-unit gate.
  bool found = false;
  for (std::size_t i = 0; i < s.slices.size(); ++i) {
    for (const auto& op : s.slices[i].ops) {
      if (op.op.kind == NativeOp::Kind::X90) {
        EXPECT_EQ(i, 8U);
        EXPECT_TRUE(s.slices[i].barrier_before);
        found = true;
      }
    }
  }
  EXPECT_TRUE(found);
}

TEST(Schedule, LateAlignmentPadsAtStart) {
  Circuit c;
  c.num_qubits = 2;
  c.add(NativeOp::x90(0));
  c.add(NativeOp::x90(1));
  c.add(NativeOp::x90(1));
  const auto early = schedule(c, 1.0, Alignment::Early);
  const auto late = schedule(c, 1.0, Alignment::Late);
  ASSERT_EQ(late.slices.size(), 2U);
  EXPECT_EQ(early.slices[0].ops.size(), 2U);
  EXPECT_EQ(late.slices[0].ops.size(), 1U);
  EXPECT_EQ(late.slices[1].ops.size(), 2U);
}

TEST(Schedule, DirectRBAlignsUnequalGates) {
  RBConfig cfg;
  cfg.depths = {6};
  cfg.randomizations = 1;
  const auto rb = build_direct_rb(mixed_durations(), 0, cfg)[0];
  const auto s = schedule(rb.circuit, 1.0);
  // Every 2Q layer occupies 8 units for both pairs.
  int layers_with_short_gate = 0;
  for (const auto& slice : s.slices) {
    for (const auto& op : slice.ops) {
      if (op.op.kind == NativeOp::Kind::TwoQubit && op.steps == 5 && op.step == 0) ++layers_with_short_gate;
    }
  }
  EXPECT_GE(layers_with_short_gate, 6);
  EXPECT_GE(s.total_units(), 6 * 8);
}

TEST(Schedule, SimultaneousShortPairRunsAhead) {
  RBConfig cfg;
  cfg.depths = {20};
  cfg.randomizations = 1;
  const auto direct = schedule(build_direct_rb(mixed_durations(), 0, cfg)[0].circuit, 1.0);
  const auto simul = build_simultaneous_rb(mixed_durations(), 0, cfg)[0];
  EXPECT_TRUE(simul.align_late);
  const auto s = schedule(simul.circuit, 1.0, Alignment::Late);
  EXPECT_LT(s.total_units(), direct.total_units());
  // In the same wall time the 5-unit pair finishes its gates while the
  // 8-unit pair is still running: count slices where only one pair is gated.
  int only_long = 0;
  for (const auto& slice : s.slices) {
    bool short_on = false;
    bool long_on = false;
    for (const auto& op : slice.ops) {
      if (op.op.kind != NativeOp::Kind::TwoQubit) continue;
      (op.steps == 5 ? short_on : long_on) = true;
    }
    if (long_on && !short_on) ++only_long;
  }
  EXPECT_GT(only_long, 20 * 3 / 2);
}

TEST(Schedule, StaggeredGatesNeverOverlap) {
  RBConfig cfg;
  cfg.depths = {5};
  cfg.randomizations = 2;
  const auto spec = LayerSpec::chain(4);
  for (const auto& rb : build_staggered(spec, 0, cfg)) {
    const auto s = schedule(rb.circuit, 1.0);
    for (const auto& slice : s.slices) {
      int gates = 0;
      for (const auto& op : slice.ops) gates += op.op.kind == NativeOp::Kind::TwoQubit ? 1 : 0;
      EXPECT_LE(gates, 1);
    }
  }
}

TEST(Schedule, AverageSingleQubitSlicesPerLayer) {
  // Unit slices between consecutive 2Q layers that carry an X90.
  RBConfig cfg;
  cfg.depths = {100};
  cfg.randomizations = 1;
  cfg.seed = 11;
  const auto rb = build_direct_rb(LayerSpec::chain(4), 0, cfg)[0];
  const auto s = schedule(rb.circuit, 1.0);
  int one_q_slices = 0;
  for (const auto& slice : s.slices) {
    const bool has_2q = std::any_of(slice.ops.begin(), slice.ops.end(), [](const SliceOp& o) { return o.op.kind == NativeOp::Kind::TwoQubit; });
    const bool has_x90 = std::any_of(slice.ops.begin(), slice.ops.end(), [](const SliceOp& o) { return o.op.kind == NativeOp::Kind::X90; });
    if (has_x90 && !has_2q) ++one_q_slices;
  }
  // Drop the inversion tail: at most 3 gates x (2 X90 + 8) units.
  const double per_layer = static_cast<double>(one_q_slices) / 100.0;
  EXPECT_NEAR(per_layer, 1.5, 0.2);
}

TEST(Schedule, Deterministic) {
  RBConfig cfg;
  cfg.depths = {4};
  cfg.randomizations = 1;
  const auto rb = build_direct_rb(LayerSpec::chain(4), 1, cfg)[0];
  EXPECT_EQ(nlohmann::json(schedule(rb.circuit, 1.0)).dump(), nlohmann::json(schedule(rb.circuit, 1.0)).dump());
}

}  // namespace
}  // namespace layerfid
