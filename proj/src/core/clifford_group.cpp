#include <algorithm>
#include <numbers>
#include <stdexcept>

#include "layerfid/core/clifford.hpp"

namespace layerfid {
namespace {

constexpr double kQuarterTurns[] = {0.0, std::numbers::pi / 2, std::numbers::pi, -std::numbers::pi / 2};

std::vector<NativeOp> euler_ops(const std::vector<double>& angles, int qubit) {
  std::vector<NativeOp> ops;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (i > 0) ops.push_back(NativeOp::x90(qubit));
    if (angles[i] != 0.0) ops.push_back(NativeOp::rz(qubit, angles[i]));
  }
  return ops;
}

int nonzero_count(const std::vector<double>& angles) {
  return static_cast<int>(std::count_if(angles.begin(), angles.end(), [](double a) { return a != 0.0; }));
}

}  // namespace

// --- single-qubit group -----------------------------------------------------

const SingleQubitCliffords& SingleQubitCliffords::instance() {
  static const SingleQubitCliffords group;
  return group;
}

SingleQubitCliffords::SingleQubitCliffords() {
  // Candidates Rz(a0) [X90 Rz(a1) [X90 Rz(a2)]] ordered by X90 count, then by
  // number of nonzero Rz, then by enumeration order.
  struct Candidate {
    std::vector<double> angles;
  };
  std::vector<Candidate> candidates;
  for (int k = 0; k <= 2; ++k) {
    const int slots = k + 1;
    int combos = 1;
    for (int s = 0; s < slots; ++s) combos *= 4;
    for (int c = 0; c < combos; ++c) {
      std::vector<double> angles;
      int code = c;
      for (int s = 0; s < slots; ++s) {
        angles.push_back(kQuarterTurns[code % 4]);
        code /= 4;
      }
      candidates.push_back({angles});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.angles.size() != b.angles.size()) return a.angles.size() < b.angles.size();
    return nonzero_count(a.angles) < nonzero_count(b.angles);
  });
  for (const Candidate& cand : candidates) {
    const auto ops = euler_ops(cand.angles, 0);
    const CliffordTableau t = CliffordTableau::from_ops(ops, 1);
    if (std::find(tableaux_.begin(), tableaux_.end(), t) != tableaux_.end()) continue;
    tableaux_.push_back(t);
    rz_angles_.push_back(cand.angles);
    x90_counts_.push_back(static_cast<int>(cand.angles.size()) - 1);
  }
  if (tableaux_.size() != kSingleQubitCliffordCount) throw std::logic_error("single-qubit Clifford enumeration incomplete");
  for (int a = 0; a < kSingleQubitCliffordCount; ++a) {
    for (int b = 0; b < kSingleQubitCliffordCount; ++b) {
      table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = index_of(tableau(a) * tableau(b));
    }
  }
  for (int a = 0; a < kSingleQubitCliffordCount; ++a) inverses_[static_cast<std::size_t>(a)] = index_of(tableau(a).inverse());
}

std::vector<NativeOp> SingleQubitCliffords::ops(int index, int qubit) const {
  return euler_ops(rz_angles_.at(static_cast<std::size_t>(index)), qubit);
}

int SingleQubitCliffords::index_of(const CliffordTableau& t) const {
  const auto it = std::find(tableaux_.begin(), tableaux_.end(), t);
  if (it == tableaux_.end()) throw std::invalid_argument("index_of: not a single-qubit Clifford tableau");
  return static_cast<int>(it - tableaux_.begin());
}

// --- compact two-qubit Cliffords -----------------------------------------------

CompactClifford2 CompactClifford2::identity() {
  CompactClifford2 c;
  for (std::uint8_t i = 0; i < 16; ++i) c.image[i] = i;
  return c;
}

CompactClifford2 CompactClifford2::from_tableau(const CliffordTableau& t) {
  if (t.num_qubits() != 2) throw std::invalid_argument("CompactClifford2: tableau must act on 2 qubits");
  CompactClifford2 c;
  for (std::uint64_t i = 0; i < 16; ++i) {
    const PauliString img = t.conjugate(PauliString::from_index(2, i));
    c.image[i] = static_cast<std::uint8_t>(img.index() | (img.sign() < 0 ? 16U : 0U));
  }
  return c;
}

CompactClifford2 CompactClifford2::local(int clifford_on_q0, int clifford_on_q1) {
  const auto& group = SingleQubitCliffords::instance();
  return from_tableau(clifford_tensor(group.tableau(clifford_on_q0), group.tableau(clifford_on_q1)));
}

CliffordTableau CompactClifford2::to_tableau() const {
  auto img = [this](std::uint64_t idx) {
    PauliString p = PauliString::from_index(2, image[idx] & 15U);
    return (image[idx] & 16U) ? -p : p;
  };
  // Generators XI(4), IX(1), ZI(12), IZ(3).
  return CliffordTableau::from_images({img(4), img(1), img(12), img(3)});
}

std::uint32_t CompactClifford2::key() const {
  return static_cast<std::uint32_t>(image[4]) | (static_cast<std::uint32_t>(image[1]) << 5) |
         (static_cast<std::uint32_t>(image[12]) << 10) | (static_cast<std::uint32_t>(image[3]) << 15);
}

CompactClifford2 operator*(const CompactClifford2& a, const CompactClifford2& b) {
  CompactClifford2 out;
  for (std::size_t i = 0; i < 16; ++i) {
    const std::uint8_t bi = b.image[i];
    const std::uint8_t ai = a.image[bi & 15U];
    out.image[i] = static_cast<std::uint8_t>((ai & 15U) | ((ai ^ bi) & 16U));
  }
  return out;
}

// --- synthesis table ---------------------------------------------------------

const TwoQubitSynthesizer& TwoQubitSynthesizer::instance(TwoQubitGateType type) {
  switch (type) {
    case TwoQubitGateType::CX: {
      static const TwoQubitSynthesizer cx(TwoQubitGateType::CX);
      return cx;
    }
    case TwoQubitGateType::CZ: {
      static const TwoQubitSynthesizer cz(TwoQubitGateType::CZ);
      return cz;
    }
    case TwoQubitGateType::ECR: {
      static const TwoQubitSynthesizer ecr(TwoQubitGateType::ECR);
      return ecr;
    }
  }
  throw std::logic_error("TwoQubitSynthesizer: unreachable");
}

TwoQubitSynthesizer::TwoQubitSynthesizer(TwoQubitGateType type)
    : type_(type),
      gate_(CompactClifford2::from_tableau(CliffordTableau::from_unitary(two_qubit_gate_matrix(type)))),
      slot_by_key_(std::size_t{1} << 20, -1) {
  const auto& group = SingleQubitCliffords::instance();
  constexpr int kLocals = kSingleQubitCliffordCount * kSingleQubitCliffordCount;
  std::vector<CompactClifford2> locals;
  std::vector<int> local_cost;
  locals.reserve(kLocals);
  for (int a = 0; a < kSingleQubitCliffordCount; ++a) {
    for (int b = 0; b < kSingleQubitCliffordCount; ++b) {
      locals.push_back(CompactClifford2::local(a, b));
      local_cost.push_back(group.x90_count(a) + group.x90_count(b));
    }
  }

  auto add = [this](const CompactClifford2& c, int level, int cost, int parent, int local) {
    auto& slot = slot_by_key_[c.key()];
    if (slot >= 0) {
      const auto s = static_cast<std::size_t>(slot);
      if (level_[s] == level && cost < cost_[s]) {
        cost_[s] = static_cast<std::int16_t>(cost);
        parent_[s] = parent;
        local_[s] = static_cast<std::int16_t>(local);
      }
      return false;
    }
    slot = static_cast<std::int32_t>(elements_.size());
    elements_.push_back(c);
    level_.push_back(static_cast<std::int8_t>(level));
    cost_.push_back(static_cast<std::int16_t>(cost));
    parent_.push_back(parent);
    local_.push_back(static_cast<std::int16_t>(local));
    return true;
  };

  std::vector<std::int32_t> frontier;
  for (int l = 0; l < kLocals; ++l) {
    if (add(locals[static_cast<std::size_t>(l)], 0, local_cost[static_cast<std::size_t>(l)], -1, l)) {
      frontier.push_back(slot_by_key_[locals[static_cast<std::size_t>(l)].key()]);
    }
  }
  for (int level = 1; level <= 3 && elements_.size() < kTwoQubitCliffordCount; ++level) {
    std::vector<std::int32_t> next;
    for (std::int32_t s : frontier) {
      const CompactClifford2 with_gate = gate_ * elements_[static_cast<std::size_t>(s)];
      const int base_cost = cost_[static_cast<std::size_t>(s)];
      for (int l = 0; l < kLocals; ++l) {
        const CompactClifford2 c = locals[static_cast<std::size_t>(l)] * with_gate;
        if (add(c, level, base_cost + local_cost[static_cast<std::size_t>(l)], s, l)) next.push_back(slot_by_key_[c.key()]);
      }
    }
    frontier = std::move(next);
  }
  reached_ = elements_.size();
  if (reached_ != kTwoQubitCliffordCount) throw std::logic_error("two-qubit synthesis table incomplete");
}

int TwoQubitSynthesizer::slot_of(const CompactClifford2& c) const {
  const std::int32_t slot = slot_by_key_[c.key()];
  if (slot < 0 || !(elements_[static_cast<std::size_t>(slot)] == c)) throw std::invalid_argument("synthesize: not a two-qubit Clifford");
  return slot;
}

int TwoQubitSynthesizer::gate_count(const CompactClifford2& c) const { return level_[static_cast<std::size_t>(slot_of(c))]; }

int TwoQubitSynthesizer::x90_count(const CompactClifford2& c) const { return cost_[static_cast<std::size_t>(slot_of(c))]; }

std::vector<NativeOp> TwoQubitSynthesizer::synthesize(const CompactClifford2& c, int q0, int q1) const {
  std::vector<int> chain;  // local layers, latest first
  for (std::int32_t s = slot_of(c); s >= 0; s = parent_[static_cast<std::size_t>(s)]) chain.push_back(local_[static_cast<std::size_t>(s)]);
  std::reverse(chain.begin(), chain.end());
  const auto& group = SingleQubitCliffords::instance();
  std::vector<NativeOp> ops;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i > 0) ops.push_back(NativeOp::two_qubit(type_, q0, q1));
    const int a = chain[i] / kSingleQubitCliffordCount;
    const int b = chain[i] % kSingleQubitCliffordCount;
    for (const NativeOp& op : group.ops(a, q0)) ops.push_back(op);
    for (const NativeOp& op : group.ops(b, q1)) ops.push_back(op);
  }
  return ops;
}

}  // namespace layerfid
