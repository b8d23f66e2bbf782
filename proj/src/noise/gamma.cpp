#include "layerfid/noise/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "layerfid/core/gates.hpp"

namespace layerfid {

void PauliLindbladModel::validate() const {
  for (const auto& [p, rate] : generators) {
    if (p.num_qubits() != num_qubits) throw std::invalid_argument("Pauli-Lindblad model: generator size mismatch");
    if (p.is_identity()) throw std::invalid_argument("Pauli-Lindblad model: identity generator");
    if (!(rate >= 0.0)) throw std::invalid_argument("Pauli-Lindblad model: rates must be non-negative");
  }
}

double gamma_from_lindblad(const PauliLindbladModel& model) {
  model.validate();
  double total = 0.0;
  for (const auto& [p, rate] : model.generators) total += rate;
  return std::exp(2.0 * total);
}

std::vector<double> lindblad_pauli_fidelities(const PauliLindbladModel& model) {
  model.validate();
  if (model.num_qubits > kMaxDensePtmQubits) throw std::invalid_argument("lindblad_pauli_fidelities: capped at 4 qubits");
  const std::uint64_t count = pauli_count(model.num_qubits);
  std::vector<double> f(count);
  for (std::uint64_t a = 0; a < count; ++a) {
    const PauliString pa = PauliString::from_index(model.num_qubits, a);
    double exponent = 0.0;
    for (const auto& [p, rate] : model.generators) {
      if (!pa.commutes_with(p)) exponent += rate;
    }
    f[a] = std::exp(-2.0 * exponent);
  }
  return f;
}

QuantumChannel lindblad_channel(const PauliLindbladModel& model) {
  const auto f = lindblad_pauli_fidelities(model);
  auto p = probabilities_from_pauli_fidelities(model.num_qubits, f);
  for (double& v : p) v = std::max(v, 0.0);
  return QuantumChannel::pauli(model.num_qubits, std::move(p), 1e-9);
}

double gamma_from_det(const PTM& ptm) {
  if (!ptm.is_diagonal(1e-9)) throw std::invalid_argument("gamma_from_det: PTM is not diagonal (not a Pauli channel)");
  const RealVector f = ptm.pauli_fidelities();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (!(f(i) > 0.0)) throw std::invalid_argument("gamma_from_det: non-positive Pauli fidelity");
    log_det += std::log(f(i));
  }
  return std::exp(-2.0 * log_det / static_cast<double>(f.size()));
}

GammaBounds gamma_bounds(double fp) {
  if (!(fp > 0.5) || fp > 1.0 + 1e-12) throw std::invalid_argument("gamma_bounds: process fidelity must lie in (1/2, 1]");
  fp = std::min(fp, 1.0);
  if (fp > 1.0 - 1e-6) return {fp, fp};
  const double c = 2.0 * fp - 1.0;
  const double lc = std::log(c);
  const double lambda0 = (std::log(2.0 - 2.0 * fp) - std::log(-lc)) / lc;
  const double lower = fp - 1.0 + 2.0 * lambda0 * (1.0 - fp) + std::pow(c, lambda0);
  return {lower, fp};
}

LemmaGap lemma_gap(double c, double d_hi, int n) {
  if (!(c > 0.0) || !(d_hi > c)) throw std::invalid_argument("lemma_gap: need 0 < c < d_hi");
  if (n < 1) throw std::invalid_argument("lemma_gap: N must be at least 1");
  double numeric = 0.0;
  for (int m = 0; m <= n; ++m) {
    const double w = static_cast<double>(m) / n;
    numeric = std::max(numeric, w * c + (1.0 - w) * d_hi - std::pow(c, w) * std::pow(d_hi, 1.0 - w));
  }
  const double r = std::log(d_hi / c);
  const double lambda0 = std::clamp((std::log(r) - std::log((d_hi - c) / d_hi)) / r, 0.0, 1.0);
  const double analytic = lambda0 * c + (1.0 - lambda0) * d_hi - std::pow(c, lambda0) * std::pow(d_hi, 1.0 - lambda0);
  return {numeric, analytic, lambda0};
}

FamilyPoint global_depolarizing_point(int num_qubits, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) throw std::invalid_argument("global_depolarizing_point: alpha must lie in (0, 1]");
  const double d2 = std::pow(4.0, num_qubits);
  return {(1.0 + (d2 - 1.0) * alpha) / d2, std::pow(alpha, (d2 - 1.0) / d2)};
}

FamilyPoint pair_depolarizing_point(int num_qubits, double alpha) {
  if (num_qubits % 2 != 0) throw std::invalid_argument("pair_depolarizing_point: qubit count must be even");
  if (!(alpha > 0.0) || alpha > 1.0) throw std::invalid_argument("pair_depolarizing_point: alpha must lie in (0, 1]");
  const double pairs = num_qubits / 2;
  return {std::pow((1.0 + 15.0 * alpha) / 16.0, pairs), std::pow(alpha, 15.0 * num_qubits / 32.0)};
}

FamilyPoint single_pauli_point(double p) {
  if (!(p > 0.5) || p > 1.0) throw std::invalid_argument("single_pauli_point: p must lie in (1/2, 1]");
  return {p, std::sqrt(2.0 * p - 1.0)};
}

CrosstalkOracleResult crosstalk_bound_oracle(double alpha, int n_k, int n_j, const PauliString& p, CrosstalkFlavor flavor) {
  if (n_k < 1 || n_j < 1 || n_k + n_j > kMaxDensePtmQubits) throw std::invalid_argument("crosstalk oracle: need n_k, n_j >= 1 and n_k + n_j <= 4");
  const int n = n_k + n_j;
  if (p.num_qubits() != n) throw std::invalid_argument("crosstalk oracle: Pauli size must equal n_k + n_j");
  std::vector<int> in_k, in_j;
  for (int q = 0; q < n_k; ++q) in_k.push_back(q);
  for (int q = n_k; q < n; ++q) in_j.push_back(q);
  if (p.weight() != 2 || p.restricted(in_k).weight() != 1 || p.restricted(in_j).weight() != 1) {
    throw std::invalid_argument("crosstalk oracle: P must be weight 2 with one factor in each subspace");
  }
  const PauliString herm = p.without_phase();
  QuantumChannel channel = QuantumChannel::identity(n);
  if (flavor == CrosstalkFlavor::Coherent) {
    channel = QuantumChannel::unitary(hermitian_exp(herm.matrix(), alpha));
  } else {
    std::vector<double> probs(pauli_count(n), 0.0);
    probs[0] = 1.0 - alpha * alpha;
    probs[herm.index()] += alpha * alpha;
    channel = QuantumChannel::pauli(n, std::move(probs));
  }
  const PTM r = ptm_from_channel(channel);
  const double f_true = process_fidelity(r);

  // Pauli fidelities of a (x) I and I (x) b on the twirled, reduced channel.
  const std::uint64_t count_k = pauli_count(n_k);
  const std::uint64_t count_j = pauli_count(n_j);
  double sum_k = 0.0;
  for (std::uint64_t a = 0; a < count_k; ++a) sum_k += r(static_cast<Eigen::Index>(a * count_j), static_cast<Eigen::Index>(a * count_j));
  double sum_j = 0.0;
  for (std::uint64_t b = 0; b < count_j; ++b) sum_j += r(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b));
  const double f_k = sum_k / static_cast<double>(count_k);
  const double f_j = sum_j / static_cast<double>(count_j);
  return {f_true, f_k, f_j, f_k * f_j};
}

}  // namespace layerfid
