#pragma once

#include <span>
#include <variant>
#include <vector>

#include "layerfid/core/pauli.hpp"

namespace layerfid {

/// Largest system for which dense PTMs are built.
inline constexpr int kMaxDensePtmQubits = 4;

/// Validated n-qubit density matrix.
class DensityMatrix {
 public:
  static DensityMatrix zero_state(int num_qubits);
  /// Checks Hermiticity, unit trace and positivity within `tol`.
  static DensityMatrix from_matrix(ComplexMatrix rho, double tol = 1e-9);

  int num_qubits() const { return n_; }
  const ComplexMatrix& matrix() const { return rho_; }
  double trace() const { return rho_.trace().real(); }
  /// Probability of a computational basis state (qubit 0 most significant).
  double population(std::size_t basis_index) const;

  static bool is_valid(const ComplexMatrix& rho, double tol = 1e-9);

 private:
  DensityMatrix(int n, ComplexMatrix rho) : n_(n), rho_(std::move(rho)) {}
  int n_;
  ComplexMatrix rho_;
};

/// Real Pauli transfer matrix R_ij = Tr(P_i L[P_j]) / d, indices in
/// lexicographic {I,X,Y,Z}^n order with qubit 0 leftmost.
class PauliTransferMatrix {
 public:
  PauliTransferMatrix(int num_qubits, RealMatrix r);
  static PauliTransferMatrix identity(int num_qubits);
  static PauliTransferMatrix diagonal(int num_qubits, std::span<const double> pauli_fidelities);

  int num_qubits() const { return n_; }
  double dimension() const { return static_cast<double>(std::size_t{1} << n_); }
  const RealMatrix& matrix() const { return r_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return r_(i, j); }

  bool is_diagonal(double tol = 1e-9) const;
  /// Diagonal entries; for Pauli channels these are the Pauli fidelities.
  RealVector pauli_fidelities() const { return r_.diagonal(); }

  /// Channel composition: `first` acts before `*this`.
  PauliTransferMatrix after(const PauliTransferMatrix& first) const;

 private:
  int n_;
  RealMatrix r_;
};

using PTM = PauliTransferMatrix;

/// Tensor product; `a` acts on the leading qubits.
PTM ptm_tensor(const PTM& a, const PTM& b);

/// CPTP map in one of three representations.
class QuantumChannel {
 public:
  using KrausList = std::vector<ComplexMatrix>;
  /// Probabilities p_b of the Pauli Kraus form, lexicographic Pauli order.
  struct PauliProbabilities {
    std::vector<double> p;
  };
  enum class Representation { Kraus, Pauli, Transfer };

  static QuantumChannel identity(int num_qubits);
  static QuantumChannel kraus(int num_qubits, KrausList ops, double tol = 1e-10);
  static QuantumChannel unitary(const ComplexMatrix& u);
  static QuantumChannel pauli(int num_qubits, std::vector<double> probabilities, double tol = 1e-10);
  static QuantumChannel from_ptm(PTM ptm, double tol = 1e-9);
  /// rho -> alpha rho + (1 - alpha) Tr(rho) I / d.
  static QuantumChannel depolarizing(int num_qubits, double alpha);

  int num_qubits() const { return n_; }
  Representation representation() const;

  ComplexMatrix apply(const ComplexMatrix& rho) const;
  KrausList to_kraus() const;
  /// Pauli Kraus probabilities; throws unless the channel is Pauli-diagonal.
  std::vector<double> to_pauli_probabilities(double tol = 1e-9) const;

  /// `*this` followed by `next`.
  QuantumChannel then(const QuantumChannel& next) const;
  QuantumChannel tensor(const QuantumChannel& other) const;

 private:
  QuantumChannel(int n, std::variant<KrausList, PauliProbabilities, PTM> rep) : n_(n), rep_(std::move(rep)) {}
  int n_;
  std::variant<KrausList, PauliProbabilities, PTM> rep_;
};

PTM ptm_from_channel(const QuantumChannel& channel);

/// Tr(R_ideal^-1 R_exp) / d^2.
double process_fidelity(const PTM& experimental, const PTM& ideal);
/// Process fidelity against the identity map: Tr(R) / d^2.
double process_fidelity(const PTM& experimental);

/// Pauli fidelities f_a = sum_b (-1)^<a,b> p_b.
std::vector<double> pauli_fidelities_from_probabilities(int num_qubits, std::span<const double> probabilities);
/// Inverse transform p_b = 4^-n sum_a (-1)^<a,b> f_a.
std::vector<double> probabilities_from_pauli_fidelities(int num_qubits, std::span<const double> fidelities);

struct FidelityConversions {
  double process_fidelity;
  double gate_fidelity;
  double process_error;
  double gate_error;
};

/// F_g = (d F_p + 1) / (d + 1); errors are the complements.
FidelityConversions fidelity_conversions(double process_fidelity, int dimension);
/// eps_p = (d + 1) / d * eps_g.
double process_error_from_gate_error(double gate_error, int dimension);

/// Product of process fidelities of disjoint subsystems. Exact for a tensor
/// product; across sequential layers it is only a small-error approximation.
double fidelity_product_disjoint(std::span<const double> fidelities);

}  // namespace layerfid
