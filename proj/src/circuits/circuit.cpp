#include "layerfid/circuits/circuit.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace layerfid {
namespace {

struct FamilyName {
  RBFamily family;
  std::string_view name;
};

constexpr FamilyName kFamilyNames[] = {
    {RBFamily::Direct, "direct"},
    {RBFamily::Simultaneous, "simultaneous"},
    {RBFamily::Isolated, "isolated"},
    {RBFamily::MirrorPauli, "mirror_pauli"},
    {RBFamily::MirrorNoPauli, "mirror_no_pauli"},
    {RBFamily::Staggered, "staggered"},
};

}  // namespace

Instruction Instruction::gate(const NativeOp& op, int duration_units) {
  Instruction ins;
  ins.op = op;
  ins.duration_units = op.kind == NativeOp::Kind::TwoQubit ? duration_units : (op.kind == NativeOp::Kind::X90 ? 1 : 0);
  if (op.kind == NativeOp::Kind::TwoQubit && duration_units < 1) throw std::invalid_argument("2Q instruction needs a positive duration");
  return ins;
}

Instruction Instruction::barrier(std::vector<int> qubits) {
  Instruction ins;
  ins.kind = Kind::Barrier;
  ins.barrier_qubits = std::move(qubits);
  return ins;
}

int Instruction::duration() const { return kind == Kind::Barrier ? 0 : duration_units; }

std::size_t Circuit::count(NativeOp::Kind kind) const {
  return static_cast<std::size_t>(std::count_if(instructions.begin(), instructions.end(), [kind](const Instruction& i) {
    return i.kind == Instruction::Kind::Op && i.op.kind == kind;
  }));
}

std::string_view to_string(RBFamily family) {
  for (const auto& [f, name] : kFamilyNames) {
    if (f == family) return name;
  }
  return "?";
}

RBFamily parse_rb_family(std::string_view name) {
  for (const auto& [f, n] : kFamilyNames) {
    if (n == name) return f;
  }
  throw std::invalid_argument("unknown RB family '" + std::string(name) + "'");
}

bool is_mirror(RBFamily family) { return family == RBFamily::MirrorPauli || family == RBFamily::MirrorNoPauli; }

void RBConfig::validate() const {
  if (depths.empty()) throw std::invalid_argument("RB config: empty depth list");
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] < 0) throw std::invalid_argument("RB config: negative depth");
    if (i > 0 && depths[i] <= depths[i - 1]) throw std::invalid_argument("RB config: depths must be strictly increasing");
    if (is_mirror(family) && depths[i] % 2 != 0) throw std::invalid_argument("RB config: mirror depths must be even");
  }
  if (randomizations < 1) throw std::invalid_argument("RB config: need at least one randomization");
  if (shots < 0) throw std::invalid_argument("RB config: shots must be non-negative");
}

void to_json(nlohmann::json& j, const RBConfig& cfg) {
  j = {{"depths", cfg.depths}, {"randomizations", cfg.randomizations}, {"shots", cfg.shots}, {"seed", cfg.seed}, {"family", std::string(to_string(cfg.family))}};
}

void from_json(const nlohmann::json& j, RBConfig& cfg) {
  for (const auto& [key, value] : j.items()) {
    if (key != "depths" && key != "randomizations" && key != "shots" && key != "seed" && key != "family") {
      throw std::invalid_argument("RB config: unknown field '" + key + "'");
    }
  }
  cfg.depths = j.at("depths").get<std::vector<int>>();
  cfg.randomizations = j.value("randomizations", 10);
  cfg.shots = j.value("shots", 0);
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.family = parse_rb_family(j.value("family", std::string("direct")));
  cfg.validate();
}

void to_json(nlohmann::json& j, const Instruction& ins) {
  if (ins.kind == Instruction::Kind::Barrier) {
    j = {{"barrier", ins.barrier_qubits}};
    return;
  }
  switch (ins.op.kind) {
    case NativeOp::Kind::X90:
      j = {{"gate", "x90"}, {"qubits", {ins.op.qubits[0]}}};
      break;
    case NativeOp::Kind::Rz:
      j = {{"gate", "rz"}, {"qubits", {ins.op.qubits[0]}}, {"angle", ins.op.angle}};
      break;
    case NativeOp::Kind::TwoQubit:
      j = {{"gate", std::string(to_string(ins.op.type))}, {"qubits", {ins.op.qubits[0], ins.op.qubits[1]}}, {"duration_units", ins.duration_units}};
      break;
  }
}

void to_json(nlohmann::json& j, const Circuit& c) { j = {{"num_qubits", c.num_qubits}, {"instructions", c.instructions}}; }

void to_json(nlohmann::json& j, const RBCircuit& c) {
  nlohmann::json units = nlohmann::json::array();
  for (std::size_t u = 0; u < c.units.size(); ++u) {
    units.push_back({{"qubits", c.units[u].qubits}, {"sublayer", c.units[u].sublayer}, {"element", c.units[u].element}, {"target", c.targets[u]}});
  }
  j = {{"family", std::string(to_string(c.family))},
       {"depth", c.depth},
       {"randomization", c.randomization},
       {"sublayer", c.sublayer},
       {"units", units},
       {"circuit", c.circuit}};
}

}  // namespace layerfid
