#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "layerfid/core/pauli.hpp"

namespace layerfid {

enum class TwoQubitGateType { CX, CZ, ECR };

std::string_view to_string(TwoQubitGateType type);
TwoQubitGateType parse_two_qubit_gate_type(std::string_view name);

/// A native operation over {X90, Rz(theta), 2Q gate}. For two-qubit gates,
/// qubits[0] is the control (or the Z side of ECR).
struct NativeOp {
  enum class Kind { X90, Rz, TwoQubit };

  Kind kind = Kind::X90;
  std::array<int, 2> qubits{0, -1};
  double angle = 0.0;
  TwoQubitGateType type = TwoQubitGateType::CX;

  static NativeOp x90(int q) { return {Kind::X90, {q, -1}, 0.0, TwoQubitGateType::CX}; }
  static NativeOp rz(int q, double theta) { return {Kind::Rz, {q, -1}, theta, TwoQubitGateType::CX}; }
  static NativeOp two_qubit(TwoQubitGateType t, int a, int b) { return {Kind::TwoQubit, {a, b}, 0.0, t}; }
};

/// exp(-i scale * pi/4 * X); scale = 1 is the ideal X90.
ComplexMatrix x90_matrix(double scale = 1.0);
/// exp(-i theta Z / 2).
ComplexMatrix rz_matrix(double theta);
/// Hermitian generator H with gate = exp(-i H) on (qubits[0], qubits[1]).
ComplexMatrix two_qubit_generator(TwoQubitGateType type);
ComplexMatrix two_qubit_gate_matrix(TwoQubitGateType type);

/// exp(-i t H) for Hermitian H.
ComplexMatrix hermitian_exp(const ComplexMatrix& hamiltonian, double t = 1.0);

/// Lifts an operator on `targets` (listed in the operator's own qubit order)
/// into an n-qubit register. Qubit 0 is the most significant basis bit.
ComplexMatrix embed(const ComplexMatrix& op, std::span<const int> targets, int num_qubits);

/// Dense unitary of a time-ordered native sequence on n qubits.
ComplexMatrix sequence_unitary(std::span<const NativeOp> ops, int num_qubits);

/// |Tr(U^dag V)|^2 / d^2.
double unitary_overlap_fidelity(const ComplexMatrix& u, const ComplexMatrix& v);
/// True when U and V agree up to a global phase: |Tr(U^dag V)| / d = 1 within tol.
bool equal_up_to_phase(const ComplexMatrix& u, const ComplexMatrix& v, double tol = 1e-9);

}  // namespace layerfid
