#pragma once

#include <random>
#include <span>

#include "layerfid/core/channel.hpp"

namespace layerfid {

/// Amplitude damping 1 - e^{-dt/T1} followed by pure dephasing so that
/// coherences decay by e^{-dt/T2}. Infinite times disable the component.
QuantumChannel t1t2_step_channel(double t1, double t2, double dt);

/// 1 - prod_i (1/4 + e^{-t/T2_i}/2 + e^{-t/T1_i}/4).
double incoherent_layer_error(std::span<const double> t1s, std::span<const double> t2s, double duration);

/// 1 - |Tr(U_ideal^dag U)|^2 / d^2. Throws if either input is not unitary.
double coherent_process_error(const ComplexMatrix& u, const ComplexMatrix& u_ideal);

/// Pauli channel with p_I uniform in [min_identity, 1] and the remaining
/// weight split Dirichlet-uniformly over the non-identity Paulis.
std::vector<double> random_pauli_probabilities(int num_qubits, std::mt19937_64& rng, double min_identity = 0.5);

}  // namespace layerfid
