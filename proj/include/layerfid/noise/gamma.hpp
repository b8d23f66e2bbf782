#pragma once

#include <utility>
#include <vector>

#include "layerfid/core/channel.hpp"

namespace layerfid {

/// Pauli-twirled noise exp(L) with L(rho) = sum_k lambda_k (P_k rho P_k - rho).
struct PauliLindbladModel {
  int num_qubits = 0;
  std::vector<std::pair<PauliString, double>> generators;

  void validate() const;
};

/// e^{2 sum lambda_k}.
double gamma_from_lindblad(const PauliLindbladModel& model);
/// f_a = exp(-2 sum over generators anticommuting with a of lambda_k); n <= 4.
std::vector<double> lindblad_pauli_fidelities(const PauliLindbladModel& model);
/// The model as a Pauli channel (product of single-generator flips).
QuantumChannel lindblad_channel(const PauliLindbladModel& model);

/// det(R)^{-2/d^2} for a diagonal PTM with positive entries.
double gamma_from_det(const PTM& ptm);

struct GammaBounds {
  double lower;
  double upper;
};

/// Bounds on gamma^{-1/2} of a Pauli channel with process fidelity F in (1/2, 1].
GammaBounds gamma_bounds(double process_fidelity);

struct LemmaGap {
  double numeric_max;
  double analytic_bound;
  double lambda0;
};

/// Largest gap between arithmetic and geometric means over [c, d_hi]^N,
/// found by enumerating the extreme points, against the closed-form bound.
LemmaGap lemma_gap(double c, double d_hi, int n);

// --- channel families with closed forms --------------------------------------

struct FamilyPoint {
  double process_fidelity;
  double gamma_inv_sqrt;
};

/// Global depolarizing on n qubits.
FamilyPoint global_depolarizing_point(int num_qubits, double alpha);
/// Tensor product of n/2 two-qubit depolarizing channels.
FamilyPoint pair_depolarizing_point(int num_qubits, double alpha);
/// rho -> p rho + (1 - p) P rho P.
FamilyPoint single_pauli_point(double p);

// --- weight-2 crosstalk oracle -------------------------------------------------

enum class CrosstalkFlavor { Coherent, Stochastic };

struct CrosstalkOracleResult {
  double f_true;
  double f_subspace_k;
  double f_subspace_j;
  double f_layer_estimate;
};

/// exp(-i alpha P) (coherent) or (1 - alpha^2) rho + alpha^2 P rho P
/// (stochastic) on n_k + n_j <= 4 qubits. P must act on both subspaces.
/// Subspace fidelities come from the channel twirled over that subspace's
/// Pauli group with the other subspace traced out.
CrosstalkOracleResult crosstalk_bound_oracle(double alpha, int n_k, int n_j, const PauliString& p, CrosstalkFlavor flavor);

}  // namespace layerfid
