#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "layerfid/core/gates.hpp"
#include "layerfid/core/pauli.hpp"

namespace layerfid {

/// Clifford unitary (up to global phase) stored as the conjugation images
/// U X_q U^dag and U Z_q U^dag of the single-qubit generators.
class CliffordTableau {
 public:
  explicit CliffordTableau(int num_qubits = 1);

  /// Reads the tableau off a dense unitary; throws if U is not Clifford.
  static CliffordTableau from_unitary(const ComplexMatrix& u, double tol = 1e-8);
  static CliffordTableau from_ops(std::span<const NativeOp> ops, int num_qubits);
  /// Images ordered X_0..X_{n-1}, Z_0..Z_{n-1}; commutation relations are checked.
  static CliffordTableau from_images(std::vector<PauliString> images);

  int num_qubits() const { return n_; }
  const PauliString& x_image(int q) const { return images_[static_cast<std::size_t>(q)]; }
  const PauliString& z_image(int q) const { return images_[static_cast<std::size_t>(n_ + q)]; }

  /// U P U^dag.
  PauliString conjugate(const PauliString& p) const;
  CliffordTableau inverse() const;
  bool is_identity() const;

  bool operator==(const CliffordTableau& rhs) const = default;

  /// Unitary product: (a * b) applies b first.
  friend CliffordTableau operator*(const CliffordTableau& a, const CliffordTableau& b);

 private:
  int n_;
  std::vector<PauliString> images_;
};

/// a * b as a named operation.
inline CliffordTableau clifford_compose(const CliffordTableau& a, const CliffordTableau& b) { return a * b; }
inline CliffordTableau clifford_inverse(const CliffordTableau& c) { return c.inverse(); }

/// Tensor product; `a` acts on the leading qubits.
CliffordTableau clifford_tensor(const CliffordTableau& a, const CliffordTableau& b);

// --- single-qubit group -----------------------------------------------------

inline constexpr int kSingleQubitCliffordCount = 24;

/// The 24 single-qubit Cliffords, indexed by a fixed enumeration with index 0
/// the identity. Each carries a minimal {X90, Rz} decomposition (fewest X90,
/// then fewest Rz).
class SingleQubitCliffords {
 public:
  static const SingleQubitCliffords& instance();

  const CliffordTableau& tableau(int index) const { return tableaux_[static_cast<std::size_t>(index)]; }
  /// Time-ordered native ops on `qubit`.
  std::vector<NativeOp> ops(int index, int qubit) const;
  int x90_count(int index) const { return x90_counts_[static_cast<std::size_t>(index)]; }
  int index_of(const CliffordTableau& t) const;
  /// Index of the unitary product a * b (b applied first).
  int multiply(int a, int b) const { return table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
  int inverse(int a) const { return inverses_[static_cast<std::size_t>(a)]; }

 private:
  SingleQubitCliffords();

  std::vector<CliffordTableau> tableaux_;
  std::vector<std::vector<double>> rz_angles_;  // Rz angles interleaved with X90s (k+1 entries)
  std::vector<int> x90_counts_;
  std::array<std::array<int, kSingleQubitCliffordCount>, kSingleQubitCliffordCount> table_{};
  std::array<int, kSingleQubitCliffordCount> inverses_{};
};

// --- two-qubit synthesis ----------------------------------------------------

/// Two-qubit Clifford as a signed permutation of the 16 Hermitian Paulis.
/// Cheap to compose; used for tracking and for building synthesis tables.
struct CompactClifford2 {
  // Low 4 bits: image Pauli index; bit 4: sign (set means -1).
  std::array<std::uint8_t, 16> image{};

  static CompactClifford2 identity();
  static CompactClifford2 from_tableau(const CliffordTableau& t);
  static CompactClifford2 local(int clifford_on_q0, int clifford_on_q1);
  CliffordTableau to_tableau() const;
  /// 20-bit key from the images of XI, IX, ZI, IZ.
  std::uint32_t key() const;

  friend CompactClifford2 operator*(const CompactClifford2& a, const CompactClifford2& b);
  bool operator==(const CompactClifford2&) const = default;
};

inline constexpr int kTwoQubitCliffordCount = 11520;

/// Minimal native-gate synthesis of every two-qubit Clifford for one native
/// gate type: L_k G L_{k-1} ... G L_0 with the fewest G, then the fewest X90.
class TwoQubitSynthesizer {
 public:
  static const TwoQubitSynthesizer& instance(TwoQubitGateType type);

  /// Native ops realizing `c` on (q0, q1); the native gate is oriented q0 -> q1.
  std::vector<NativeOp> synthesize(const CompactClifford2& c, int q0, int q1) const;
  std::vector<NativeOp> synthesize(const CliffordTableau& c, int q0, int q1) const {
    return synthesize(CompactClifford2::from_tableau(c), q0, q1);
  }
  int gate_count(const CompactClifford2& c) const;
  int x90_count(const CompactClifford2& c) const;
  std::size_t size() const { return reached_; }
  TwoQubitGateType gate_type() const { return type_; }
  const CompactClifford2& native_gate() const { return gate_; }

 private:
  explicit TwoQubitSynthesizer(TwoQubitGateType type);
  int slot_of(const CompactClifford2& c) const;

  TwoQubitGateType type_;
  CompactClifford2 gate_;
  std::vector<std::int32_t> slot_by_key_;
  std::vector<CompactClifford2> elements_;
  std::vector<std::int8_t> level_;
  std::vector<std::int16_t> cost_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int16_t> local_;
  std::size_t reached_ = 0;
};

}  // namespace layerfid
