#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "layerfid/circuits/layer_spec.hpp"
#include "layerfid/core/gates.hpp"

namespace layerfid {

struct Instruction {
  enum class Kind { Op, Barrier };
  Kind kind = Kind::Op;
  NativeOp op;
  int duration_units = 1;  // 2Q ops only; X90 is 1 and Rz 0
  std::vector<int> barrier_qubits;  // empty means every qubit

  static Instruction gate(const NativeOp& op, int duration_units = 1);
  static Instruction barrier(std::vector<int> qubits = {});
  int duration() const;
};

struct Circuit {
  int num_qubits = 0;
  std::vector<Instruction> instructions;

  void add(const NativeOp& op, int duration_units = 1) { instructions.push_back(Instruction::gate(op, duration_units)); }
  void add(const std::vector<NativeOp>& ops) {
    for (const auto& op : ops) add(op);
  }
  void barrier(std::vector<int> qubits = {}) { instructions.push_back(Instruction::barrier(std::move(qubits))); }
  std::size_t count(NativeOp::Kind kind) const;
};

enum class RBFamily { Direct, Simultaneous, Isolated, MirrorPauli, MirrorNoPauli, Staggered };

std::string_view to_string(RBFamily family);
RBFamily parse_rb_family(std::string_view name);
bool is_mirror(RBFamily family);

struct RBConfig {
  std::vector<int> depths;
  int randomizations = 10;
  int shots = 0;  // 0 means exact probabilities
  std::uint64_t seed = 0;
  RBFamily family = RBFamily::Direct;

  void validate() const;
};

void to_json(nlohmann::json& j, const RBConfig& cfg);
void from_json(const nlohmann::json& j, RBConfig& cfg);

/// One random circuit and what its ideal output is.
///
/// For layer-style families each unit is read out separately and should
/// return its `targets` bitstring (qubit order as in `unit.qubits`, first
/// qubit most significant). Mirror circuits have one unit covering every
/// qubit.
struct RBCircuit {
  Circuit circuit;
  RBFamily family = RBFamily::Direct;
  int depth = 0;
  int randomization = 0;
  int sublayer = 0;
  std::vector<RBUnit> units;
  std::vector<std::uint64_t> targets;
  /// Alignment the family expects from the scheduler.
  bool align_late = false;
};

void to_json(nlohmann::json& j, const Instruction& ins);
void to_json(nlohmann::json& j, const Circuit& c);
void to_json(nlohmann::json& j, const RBCircuit& c);

}  // namespace layerfid
