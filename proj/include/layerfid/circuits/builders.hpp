#pragma once

#include <random>
#include <vector>

#include "layerfid/circuits/circuit.hpp"
#include "layerfid/core/clifford.hpp"

namespace layerfid {

/// Independent stream for one (seed, family, sublayer, depth, randomization).
std::mt19937_64 circuit_rng(std::uint64_t seed, RBFamily family, int sublayer, int depth, int randomization);

/// Sublayer m repeated l times behind random 1Q Cliffords, with barriers
/// around each 2Q layer, then one inverse per disjoint unit.
std::vector<RBCircuit> build_direct_rb(const LayerSpec& spec, int sublayer, const RBConfig& cfg);
/// As direct RB but without barriers; each unit runs its own sequence.
std::vector<RBCircuit> build_simultaneous_rb(const LayerSpec& spec, int sublayer, const RBConfig& cfg);
/// Only `edge` of `sublayer` is driven; every other qubit carries no gates.
std::vector<RBCircuit> build_isolated_rb(const LayerSpec& spec, int sublayer, int edge, const RBConfig& cfg);
/// Direct RB with the sublayer's 2Q gates run one after another.
std::vector<RBCircuit> build_staggered(const LayerSpec& spec, int sublayer, const RBConfig& cfg);
/// l/2 full layers (every sublayer, each behind a random 1Q layer), an
/// optional random Pauli, then the inverse. Depth l must be even.
std::vector<RBCircuit> build_mirror(const LayerSpec& spec, const RBConfig& cfg, bool pauli_layer);

/// Dispatches on cfg.family. Layer families use `sublayer`; isolated RB also `edge`.
std::vector<RBCircuit> build_rb(const LayerSpec& spec, const RBConfig& cfg, int sublayer, int edge = 0);

/// U P U^dag for one native op; Rz angles must be multiples of pi/2.
PauliString conjugate_by(const NativeOp& op, const PauliString& p);
/// Heisenberg-picture propagation of P through the circuit (time order).
PauliString propagate_pauli(const Circuit& circuit, const PauliString& p);
/// Clifford of the whole circuit; n <= 4 via the dense unitary.
CliffordTableau circuit_clifford(const Circuit& circuit);

}  // namespace layerfid
