#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace layerfid {

using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Maximum number of qubits a PauliString can hold (bitmask storage).
inline constexpr int kMaxPauliQubits = 64;

/// Tensor product of single-qubit Paulis with a phase i^k.
///
/// Stored symplectically: qubit q carries X^{x_q} Z^{z_q}, and (x, z) = (1, 1)
/// is read as Y (not XZ), so phase 0 always denotes a Hermitian operator.
/// Qubit 0 is the leftmost tensor factor and the most significant bit of a
/// computational-basis index.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int num_qubits);

  /// Parses labels such as "XIZ", "-Y", "+iZZ", "-iXX".
  static PauliString from_label(std::string_view label);
  /// Lexicographic index over {I,X,Y,Z}^n with qubit 0 as the most
  /// significant base-4 digit.
  static PauliString from_index(int num_qubits, std::uint64_t index);
  /// Single-qubit Pauli ('I','X','Y','Z') on `qubit` of an n-qubit register.
  static PauliString single(int num_qubits, int qubit, char label);

  int num_qubits() const { return n_; }
  std::uint64_t x_bits() const { return x_; }
  std::uint64_t z_bits() const { return z_; }
  bool x(int q) const { return (x_ >> q) & 1U; }
  bool z(int q) const { return (z_ >> q) & 1U; }
  char label(int q) const;
  void set(int q, char label);

  /// Exponent k of the overall phase i^k, in [0, 4).
  int phase() const { return phase_; }
  void set_phase(int k) { phase_ = ((k % 4) + 4) % 4; }
  PauliString without_phase() const;
  /// True when the phase is +1 or -1.
  bool is_hermitian() const { return phase_ % 2 == 0; }
  /// +1 or -1 for Hermitian strings.
  int sign() const;

  std::uint64_t index() const;
  int weight() const;
  bool is_identity() const { return x_ == 0 && z_ == 0; }

  bool commutes_with(const PauliString& other) const;
  /// Symplectic form <a, b> in {0, 1}; zero exactly when the strings commute.
  int symplectic_product(const PauliString& other) const;

  PauliString operator*(const PauliString& rhs) const;
  PauliString operator-() const;
  bool operator==(const PauliString& rhs) const = default;

  /// Restriction to a subset of qubits (in the given order), phase dropped.
  PauliString restricted(const std::vector<int>& qubits) const;

  ComplexMatrix matrix() const;
  std::string to_string() const;

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int phase_ = 0;
};

/// Dense matrix of the Pauli with lexicographic `index` on n qubits.
ComplexMatrix pauli_matrix(int num_qubits, std::uint64_t index);

/// Number of Pauli strings on n qubits, 4^n.
constexpr std::uint64_t pauli_count(int num_qubits) { return std::uint64_t{1} << (2 * num_qubits); }

}  // namespace layerfid
