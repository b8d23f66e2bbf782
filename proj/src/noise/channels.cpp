#include "layerfid/noise/channels.hpp"

#include <cmath>
#include <stdexcept>

#include "layerfid/core/gates.hpp"

namespace layerfid {

QuantumChannel t1t2_step_channel(double t1, double t2, double dt) {
  if (dt < 0.0) throw std::invalid_argument("t1t2_step_channel: dt must be non-negative");
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw std::invalid_argument("t1t2_step_channel: T1 and T2 must be positive");
  if (t2 > 2.0 * t1 * (1.0 + 1e-12)) throw std::invalid_argument("t1t2_step_channel: T2 > 2 T1 is unphysical");
  const double gamma = -std::expm1(-dt / t1);
  const double transverse = std::exp(-dt / t2);
  const double from_damping = std::exp(-dt / (2.0 * t1));
  const double p = 0.5 * (1.0 - std::min(1.0, transverse / from_damping));

  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  const ComplexMatrix z = PauliString::from_label("Z").matrix();
  QuantumChannel::KrausList ops;
  for (const ComplexMatrix* k : {&k0, &k1}) {
    if (k->cwiseAbs().maxCoeff() == 0.0) continue;
    ops.push_back(std::sqrt(1.0 - p) * *k);
    if (p > 0.0) ops.push_back(std::sqrt(p) * z * *k);
  }
  return QuantumChannel::kraus(1, std::move(ops));
}

double incoherent_layer_error(std::span<const double> t1s, std::span<const double> t2s, double duration) {
  if (t1s.size() != t2s.size()) throw std::invalid_argument("incoherent_layer_error: T1 and T2 lists differ in length");
  if (duration < 0.0) throw std::invalid_argument("incoherent_layer_error: duration must be non-negative");
  double fidelity = 1.0;
  for (std::size_t i = 0; i < t1s.size(); ++i) {
    fidelity *= 0.25 + 0.5 * std::exp(-duration / t2s[i]) + 0.25 * std::exp(-duration / t1s[i]);
  }
  return 1.0 - fidelity;
}

double coherent_process_error(const ComplexMatrix& u, const ComplexMatrix& u_ideal) {
  if (u.rows() != u_ideal.rows() || u.cols() != u_ideal.cols() || u.rows() != u.cols()) {
    throw std::invalid_argument("coherent_process_error: dimension mismatch");
  }
  const auto id = ComplexMatrix::Identity(u.rows(), u.cols());
  if ((u.adjoint() * u - id).norm() > 1e-8 || (u_ideal.adjoint() * u_ideal - id).norm() > 1e-8) {
    throw std::invalid_argument("coherent_process_error: input is not unitary");
  }
  return 1.0 - unitary_overlap_fidelity(u_ideal, u);
}

std::vector<double> random_pauli_probabilities(int num_qubits, std::mt19937_64& rng, double min_identity) {
  if (min_identity < 0.0 || min_identity > 1.0) throw std::invalid_argument("random_pauli_probabilities: min_identity outside [0, 1]");
  const auto count = static_cast<std::size_t>(pauli_count(num_qubits));
  std::uniform_real_distribution<double> uniform(min_identity, 1.0);
  std::exponential_distribution<double> exponential(1.0);
  std::vector<double> p(count);
  p[0] = uniform(rng);
  double total = 0.0;
  for (std::size_t i = 1; i < count; ++i) total += (p[i] = exponential(rng));
  for (std::size_t i = 1; i < count; ++i) p[i] *= (1.0 - p[0]) / total;
  return p;
}

}  // namespace layerfid
