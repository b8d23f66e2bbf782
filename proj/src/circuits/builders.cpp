#include "layerfid/circuits/builders.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace layerfid {
namespace {

constexpr int kCount1Q = kSingleQubitCliffordCount;

int random_clifford(std::mt19937_64& rng) { return std::uniform_int_distribution<int>(0, kCount1Q - 1)(rng); }

CompactClifford2 compact_inverse(const CompactClifford2& c) { return CompactClifford2::from_tableau(c.to_tableau().inverse()); }

const CliffordTableau& x90_tableau() {
  static const CliffordTableau t = CliffordTableau::from_unitary(x90_matrix());
  return t;
}

const CliffordTableau& rz_tableau(int quarter_turns) {
  static const std::array<CliffordTableau, 4> t = [] {
    std::array<CliffordTableau, 4> out;
    for (int k = 0; k < 4; ++k) out[static_cast<std::size_t>(k)] = CliffordTableau::from_unitary(rz_matrix(k * std::numbers::pi / 2));
    return out;
  }();
  return t[static_cast<std::size_t>(quarter_turns)];
}

const CliffordTableau& gate_tableau(TwoQubitGateType type) {
  static const std::array<CliffordTableau, 3> t = {CliffordTableau::from_unitary(two_qubit_gate_matrix(TwoQubitGateType::CX)),
                                                   CliffordTableau::from_unitary(two_qubit_gate_matrix(TwoQubitGateType::CZ)),
                                                   CliffordTableau::from_unitary(two_qubit_gate_matrix(TwoQubitGateType::ECR))};
  return t[static_cast<std::size_t>(type)];
}

int quarter_turns(double angle) {
  const double k = angle / (std::numbers::pi / 2);
  const double r = std::round(k);
  if (std::abs(k - r) > 1e-9) throw std::invalid_argument("conjugate_by: Rz angle is not a multiple of pi/2");
  return ((static_cast<int>(r) % 4) + 4) % 4;
}

/// Index of the single-qubit Pauli label as a Clifford.
int pauli_clifford_index(char label) {
  static const std::array<int, 4> idx = [] {
    const auto& g = SingleQubitCliffords::instance();
    std::array<int, 4> out{};
    const char labels[] = {'I', 'X', 'Y', 'Z'};
    for (int i = 0; i < 4; ++i) {
      const PauliString p = PauliString::from_label(std::string(1, labels[i]));
      out[static_cast<std::size_t>(i)] = g.index_of(CliffordTableau::from_unitary(p.matrix()));
    }
    return out;
  }();
  switch (label) {
    case 'I': return idx[0];
    case 'X': return idx[1];
    case 'Y': return idx[2];
    case 'Z': return idx[3];
    default: throw std::invalid_argument("pauli_clifford_index: bad label");
  }
}

/// The Pauli left over after G . G on the gate's own qubits (up to phase).
/// Applying G then this Pauli inverts G.
std::pair<char, char> inverse_correction(TwoQubitGateType type) {
  if (type == TwoQubitGateType::ECR) return {'Z', 'X'};
  return {'I', 'I'};
}

void add_random_1q_layer(Circuit& c, const std::vector<int>& qubits, std::vector<int>& drawn, std::mt19937_64& rng) {
  const auto& group = SingleQubitCliffords::instance();
  for (int q : qubits) {
    const int idx = random_clifford(rng);
    drawn[static_cast<std::size_t>(q)] = idx;
    c.add(group.ops(idx, q));
  }
}

void add_gate(Circuit& c, const LayerEdge& e) { c.add(NativeOp::two_qubit(e.type, e.a, e.b), e.duration_units); }

enum class LayerStyle { Barriered, Free, Staggered };

std::vector<RBCircuit> build_layer_family(const LayerSpec& spec, int sublayer, const RBConfig& cfg, RBFamily family, LayerStyle style,
                                          const std::vector<RBUnit>& units) {
  spec.validate();
  cfg.validate();
  if (sublayer < 0 || sublayer >= static_cast<int>(spec.sublayers.size())) throw std::invalid_argument("RB builder: sublayer out of range");
  const auto& group = SingleQubitCliffords::instance();
  const auto& sub = spec.sublayers[static_cast<std::size_t>(sublayer)];

  std::vector<int> active;
  std::vector<const LayerEdge*> edges;
  std::vector<const LayerEdge*> unit_edge(units.size(), nullptr);
  for (std::size_t u = 0; u < units.size(); ++u) {
    for (int q : units[u].qubits) active.push_back(q);
    if (!units[u].is_pair()) continue;
    for (const auto& e : sub.edges) {
      if (e.touches(units[u].qubits[0]) && e.touches(units[u].qubits[1])) unit_edge[u] = &e;
    }
    if (unit_edge[u] == nullptr) throw std::invalid_argument("RB builder: pair unit has no edge in the sublayer");
    edges.push_back(unit_edge[u]);
  }
  std::sort(active.begin(), active.end());

  std::vector<RBCircuit> out;
  for (int r = 0; r < cfg.randomizations; ++r) {
    for (int depth : cfg.depths) {
      auto rng = circuit_rng(cfg.seed, family, sublayer, depth, r);
      RBCircuit rb;
      rb.family = family;
      rb.depth = depth;
      rb.randomization = r;
      rb.sublayer = sublayer;
      rb.units = units;
      rb.targets.assign(units.size(), 0);
      rb.align_late = style == LayerStyle::Free;
      rb.circuit.num_qubits = spec.num_qubits();

      std::vector<CompactClifford2> pair_state(units.size(), CompactClifford2::identity());
      std::vector<int> idle_state(units.size(), 0);
      std::vector<int> drawn(static_cast<std::size_t>(spec.num_qubits()), 0);
      for (int i = 0; i < depth; ++i) {
        add_random_1q_layer(rb.circuit, active, drawn, rng);
        if (style != LayerStyle::Free) rb.circuit.barrier();
        for (const LayerEdge* e : edges) {
          add_gate(rb.circuit, *e);
          if (style == LayerStyle::Staggered) rb.circuit.barrier();
        }
        if (style == LayerStyle::Barriered) rb.circuit.barrier();
        for (std::size_t u = 0; u < units.size(); ++u) {
          if (const LayerEdge* e = unit_edge[u]) {
            const auto local = CompactClifford2::local(drawn[static_cast<std::size_t>(e->a)], drawn[static_cast<std::size_t>(e->b)]);
            pair_state[u] = TwoQubitSynthesizer::instance(e->type).native_gate() * local * pair_state[u];
          } else {
            const int q = units[u].qubits[0];
            idle_state[u] = group.multiply(drawn[static_cast<std::size_t>(q)], idle_state[u]);
          }
        }
      }
      for (std::size_t u = 0; u < units.size(); ++u) {
        if (const LayerEdge* e = unit_edge[u]) {
          rb.circuit.add(TwoQubitSynthesizer::instance(e->type).synthesize(compact_inverse(pair_state[u]), e->a, e->b));
          if (style == LayerStyle::Staggered) rb.circuit.barrier();
        } else {
          rb.circuit.add(group.ops(group.inverse(idle_state[u]), units[u].qubits[0]));
        }
      }
      out.push_back(std::move(rb));
    }
  }
  return out;
}

}  // namespace

std::mt19937_64 circuit_rng(std::uint64_t seed, RBFamily family, int sublayer, int depth, int randomization) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(family),
                    static_cast<std::uint32_t>(sublayer), static_cast<std::uint32_t>(depth), static_cast<std::uint32_t>(randomization)};
  return std::mt19937_64(seq);
}

std::vector<RBCircuit> build_direct_rb(const LayerSpec& spec, int sublayer, const RBConfig& cfg) {
  return build_layer_family(spec, sublayer, cfg, RBFamily::Direct, LayerStyle::Barriered, units_of(spec, sublayer));
}

std::vector<RBCircuit> build_simultaneous_rb(const LayerSpec& spec, int sublayer, const RBConfig& cfg) {
  return build_layer_family(spec, sublayer, cfg, RBFamily::Simultaneous, LayerStyle::Free, units_of(spec, sublayer));
}

std::vector<RBCircuit> build_staggered(const LayerSpec& spec, int sublayer, const RBConfig& cfg) {
  return build_layer_family(spec, sublayer, cfg, RBFamily::Staggered, LayerStyle::Staggered, units_of(spec, sublayer));
}

std::vector<RBCircuit> build_isolated_rb(const LayerSpec& spec, int sublayer, int edge, const RBConfig& cfg) {
  const auto units = units_of(spec, sublayer);
  if (edge < 0 || edge >= static_cast<int>(spec.sublayers.at(static_cast<std::size_t>(sublayer)).edges.size())) {
    throw std::invalid_argument("isolated RB: edge index out of range");
  }
  return build_layer_family(spec, sublayer, cfg, RBFamily::Isolated, LayerStyle::Barriered, {units[static_cast<std::size_t>(edge)]});
}

std::vector<RBCircuit> build_mirror(const LayerSpec& spec, const RBConfig& cfg, bool pauli_layer) {
  spec.validate();
  cfg.validate();
  const auto& group = SingleQubitCliffords::instance();
  const int n = spec.num_qubits();
  const RBFamily family = pauli_layer ? RBFamily::MirrorPauli : RBFamily::MirrorNoPauli;
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  RBUnit unit{all, -1, 0};

  std::vector<RBCircuit> out;
  for (int r = 0; r < cfg.randomizations; ++r) {
    for (int depth : cfg.depths) {
      if (depth % 2 != 0) throw std::invalid_argument("mirror RB: depth must be even");
      auto rng = circuit_rng(cfg.seed, family, 0, depth, r);
      RBCircuit rb;
      rb.family = family;
      rb.depth = depth;
      rb.randomization = r;
      rb.sublayer = -1;
      rb.units = {unit};
      rb.circuit.num_qubits = n;

      struct Block {
        std::vector<int> cliffords;
        int sublayer;
      };
      std::vector<Block> blocks;
      std::vector<int> drawn(static_cast<std::size_t>(n), 0);
      for (int k = 0; k < depth / 2; ++k) {
        for (int m = 0; m < static_cast<int>(spec.sublayers.size()); ++m) {
          add_random_1q_layer(rb.circuit, all, drawn, rng);
          rb.circuit.barrier();
          for (const auto& e : spec.sublayers[static_cast<std::size_t>(m)].edges) add_gate(rb.circuit, e);
          rb.circuit.barrier();
          blocks.push_back({drawn, m});
        }
      }

      PauliString central(n);
      if (pauli_layer) {
        std::uniform_int_distribution<int> label(0, 3);
        for (int q = 0; q < n; ++q) central.set(q, "IXYZ"[label(rng)]);
      }

      // Reverse half, first without the Pauli so the output target can be
      // read off by propagating it.
      Circuit reverse;
      reverse.num_qubits = n;
      PauliString pending = central;
      bool first = true;
      std::vector<std::vector<int>> reverse_layers;
      for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
        const auto& edges = spec.sublayers[static_cast<std::size_t>(it->sublayer)].edges;
        std::vector<char> correction(static_cast<std::size_t>(n), 'I');
        for (const auto& e : edges) {
          add_gate(reverse, e);
          const auto [ca, cb] = inverse_correction(e.type);
          correction[static_cast<std::size_t>(e.a)] = ca;
          correction[static_cast<std::size_t>(e.b)] = cb;
        }
        reverse.barrier();
        std::vector<int> layer(static_cast<std::size_t>(n));
        for (int q = 0; q < n; ++q) {
          const auto qs = static_cast<std::size_t>(q);
          layer[qs] = group.multiply(group.inverse(it->cliffords[qs]), pauli_clifford_index(correction[qs]));
        }
        reverse_layers.push_back(layer);
        if (first && pauli_layer) {
          // P before the inverse gates equals G^-1 P G after them.
          for (const auto& e : edges) {
            PauliString conj = pending;
            conj = conjugate_by(NativeOp::two_qubit(e.type, e.a, e.b), conj);
            const auto [ca, cb] = inverse_correction(e.type);
            if (ca != 'I') conj = conjugate_by(NativeOp::rz(e.a, std::numbers::pi), conj);
            if (cb != 'I') conj = conjugate_by(NativeOp::x90(e.b), conjugate_by(NativeOp::x90(e.b), conj));
            pending = conj;
          }
        }
        for (int q = 0; q < n; ++q) reverse.add(group.ops(layer[static_cast<std::size_t>(q)], q));
        reverse.barrier();
        first = false;
      }

      if (pauli_layer) {
        const PauliString out_pauli = propagate_pauli(reverse, central);
        std::uint64_t bits = 0;
        for (int q = 0; q < n; ++q) {
          if (out_pauli.x(q)) bits |= std::uint64_t{1} << (n - 1 - q);
        }
        rb.targets = {bits};
        // Fold the (conjugated) Pauli into the first reverse 1Q layer.
        if (!blocks.empty()) {
          auto& layer = reverse_layers.front();
          for (int q = 0; q < n; ++q) {
            const auto qs = static_cast<std::size_t>(q);
            layer[qs] = group.multiply(layer[qs], pauli_clifford_index(pending.label(q)));
          }
        }
        reverse.instructions.clear();
        std::size_t b = 0;
        for (auto it = blocks.rbegin(); it != blocks.rend(); ++it, ++b) {
          for (const auto& e : spec.sublayers[static_cast<std::size_t>(it->sublayer)].edges) add_gate(reverse, e);
          reverse.barrier();
          for (int q = 0; q < n; ++q) reverse.add(group.ops(reverse_layers[b][static_cast<std::size_t>(q)], q));
          reverse.barrier();
        }
      } else {
        rb.targets = {0};
      }
      for (auto& ins : reverse.instructions) rb.circuit.instructions.push_back(std::move(ins));
      out.push_back(std::move(rb));
    }
  }
  return out;
}

std::vector<RBCircuit> build_rb(const LayerSpec& spec, const RBConfig& cfg, int sublayer, int edge) {
  switch (cfg.family) {
    case RBFamily::Direct: return build_direct_rb(spec, sublayer, cfg);
    case RBFamily::Simultaneous: return build_simultaneous_rb(spec, sublayer, cfg);
    case RBFamily::Isolated: return build_isolated_rb(spec, sublayer, edge, cfg);
    case RBFamily::Staggered: return build_staggered(spec, sublayer, cfg);
    case RBFamily::MirrorPauli: return build_mirror(spec, cfg, true);
    case RBFamily::MirrorNoPauli: return build_mirror(spec, cfg, false);
  }
  throw std::logic_error("build_rb: unreachable");
}

PauliString conjugate_by(const NativeOp& op, const PauliString& p) {
  const CliffordTableau* t = nullptr;
  std::vector<int> qubits;
  switch (op.kind) {
    case NativeOp::Kind::X90:
      t = &x90_tableau();
      qubits = {op.qubits[0]};
      break;
    case NativeOp::Kind::Rz:
      t = &rz_tableau(quarter_turns(op.angle));
      qubits = {op.qubits[0]};
      break;
    case NativeOp::Kind::TwoQubit:
      t = &gate_tableau(op.type);
      qubits = {op.qubits[0], op.qubits[1]};
      break;
  }
  for (int q : qubits) {
    if (q < 0 || q >= p.num_qubits()) throw std::invalid_argument("conjugate_by: op outside the Pauli's register");
  }
  const PauliString local = p.restricted(qubits);
  const PauliString image = t->conjugate(local);
  PauliString out = p;
  for (std::size_t i = 0; i < qubits.size(); ++i) out.set(qubits[i], image.label(static_cast<int>(i)));
  out.set_phase(p.phase() + image.phase());
  return out;
}

PauliString propagate_pauli(const Circuit& circuit, const PauliString& p) {
  PauliString out = p;
  for (const auto& ins : circuit.instructions) {
    if (ins.kind == Instruction::Kind::Op) out = conjugate_by(ins.op, out);
  }
  return out;
}

CliffordTableau circuit_clifford(const Circuit& circuit) {
  const int n = circuit.num_qubits;
  std::vector<PauliString> images;
  for (int q = 0; q < n; ++q) images.push_back(propagate_pauli(circuit, PauliString::single(n, q, 'X')));
  for (int q = 0; q < n; ++q) images.push_back(propagate_pauli(circuit, PauliString::single(n, q, 'Z')));
  return CliffordTableau::from_images(std::move(images));
}

}  // namespace layerfid
