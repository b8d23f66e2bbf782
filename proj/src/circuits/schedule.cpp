#include "layerfid/circuits/schedule.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace layerfid {
namespace {

struct Placed {
  const Instruction* ins;
  int start;
};

std::vector<int> op_qubits(const NativeOp& op) {
  if (op.kind == NativeOp::Kind::TwoQubit) return {op.qubits[0], op.qubits[1]};
  return {op.qubits[0]};
}

// ASAP placement of `order` (pointers into the circuit, in processing order).
int place_early(const std::vector<const Instruction*>& order, int n, std::vector<Placed>& placed, std::set<int>& barriers) {
  std::vector<int> free_at(static_cast<std::size_t>(n), 0);
  for (const Instruction* ins : order) {
    if (ins->kind == Instruction::Kind::Barrier) {
      std::vector<int> qs = ins->barrier_qubits;
      if (qs.empty()) {
        for (int q = 0; q < n; ++q) qs.push_back(q);
      }
      int t = 0;
      for (int q : qs) t = std::max(t, free_at.at(static_cast<std::size_t>(q)));
      for (int q : qs) free_at[static_cast<std::size_t>(q)] = t;
      barriers.insert(t);
      continue;
    }
    const auto qs = op_qubits(ins->op);
    int start = 0;
    for (int q : qs) {
      if (q < 0 || q >= n) throw std::invalid_argument("schedule: op on qubit outside the register");
      start = std::max(start, free_at[static_cast<std::size_t>(q)]);
    }
    for (int q : qs) free_at[static_cast<std::size_t>(q)] = start + ins->duration();
    placed.push_back({ins, start});
  }
  return *std::max_element(free_at.begin(), free_at.end());
}

}  // namespace

int ScheduledCircuit::total_units() const {
  int total = 0;
  for (const auto& s : slices) total += s.duration;
  return total;
}

ScheduledCircuit schedule(const Circuit& circuit, double unit_time, Alignment alignment) {
  if (circuit.num_qubits < 1) throw std::invalid_argument("schedule: empty register");
  if (!(unit_time > 0.0)) throw std::invalid_argument("schedule: unit time must be positive");
  const int n = circuit.num_qubits;
  std::vector<const Instruction*> order;
  for (const auto& ins : circuit.instructions) order.push_back(&ins);
  if (alignment == Alignment::Late) std::reverse(order.begin(), order.end());

  std::vector<Placed> placed;
  std::set<int> barriers;
  const int total = n > 0 && !order.empty() ? place_early(order, n, placed, barriers) : 0;
  if (alignment == Alignment::Late) {
    for (auto& p : placed) p.start = total - p.start - p.ins->duration();
    std::reverse(placed.begin(), placed.end());
    std::set<int> mirrored;
    for (int b : barriers) mirrored.insert(total - b);
    barriers = std::move(mirrored);
  }

  // Bucket by start time; program order is kept within a bucket.
  std::map<int, std::vector<const Placed*>> zero_at;
  std::map<int, std::vector<const Placed*>> unit_at;
  for (const auto& p : placed) {
    if (p.ins->duration() == 0) {
      zero_at[p.start].push_back(&p);
    } else {
      for (int s = 0; s < p.ins->duration(); ++s) unit_at[p.start + s].push_back(&p);
    }
  }

  ScheduledCircuit out;
  out.num_qubits = n;
  out.unit_time = unit_time;
  for (int t = 0; t <= total; ++t) {
    const bool barrier_here = barriers.count(t) > 0;
    bool marked = false;
    if (auto it = zero_at.find(t); it != zero_at.end()) {
      std::map<int, double> angle;
      for (const Placed* p : it->second) angle[p->ins->op.qubits[0]] += p->ins->op.angle;
      Slice slice;
      slice.duration = 0;
      for (const auto& [q, a] : angle) {
        if (a != 0.0) slice.ops.push_back({NativeOp::rz(q, a), 0, 1});
      }
      if (!slice.ops.empty()) {
        slice.barrier_before = barrier_here;
        marked = barrier_here;
        out.slices.push_back(std::move(slice));
      }
    }
    if (t == total) break;
    Slice slice;
    slice.duration = 1;
    slice.barrier_before = barrier_here && !marked;
    if (auto it = unit_at.find(t); it != unit_at.end()) {
      for (const Placed* p : it->second) slice.ops.push_back({p->ins->op, t - p->start, p->ins->duration()});
    }
    out.slices.push_back(std::move(slice));
  }
  return out;
}

void to_json(nlohmann::json& j, const ScheduledCircuit& s) {
  nlohmann::json slices = nlohmann::json::array();
  for (const auto& slice : s.slices) {
    nlohmann::json ops = nlohmann::json::array();
    for (const auto& so : slice.ops) {
      Instruction ins = Instruction::gate(so.op, so.steps);
      nlohmann::json o = ins;
      if (so.op.kind == NativeOp::Kind::TwoQubit) o["step"] = so.step;
      ops.push_back(std::move(o));
    }
    slices.push_back({{"duration", slice.duration}, {"barrier_before", slice.barrier_before}, {"ops", ops}});
  }
  j = {{"num_qubits", s.num_qubits}, {"unit_time", s.unit_time}, {"total_units", s.total_units()}, {"slices", slices}};
}

}  // namespace layerfid
