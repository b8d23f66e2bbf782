#include "layerfid/core/channel.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace layerfid {
namespace {

using Complex = std::complex<double>;

// P |c> = phase[c] |c ^ flip>.
struct PauliMonomial {
  std::size_t flip = 0;
  std::vector<Complex> phase;
};

PauliMonomial monomial(int n, std::uint64_t index) {
  const PauliString p = PauliString::from_index(n, index);
  const std::size_t dim = std::size_t{1} << n;
  PauliMonomial m;
  m.phase.resize(dim);
  static const Complex kPhases[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int q = 0; q < n; ++q) {
    if (p.x(q)) m.flip |= std::size_t{1} << (n - 1 - q);
  }
  for (std::size_t c = 0; c < dim; ++c) {
    int k = 0;
    for (int q = 0; q < n; ++q) {
      const bool bit = (c >> (n - 1 - q)) & 1U;
      if (p.x(q) && p.z(q)) k += bit ? 3 : 1;
      else if (p.z(q) && bit) k += 2;
    }
    m.phase[c] = kPhases[k % 4];
  }
  return m;
}

const std::vector<PauliMonomial>& monomials(int n) {
  static const std::vector<std::vector<PauliMonomial>> cache = [] {
    std::vector<std::vector<PauliMonomial>> all(kMaxDensePtmQubits + 1);
    for (int k = 0; k <= kMaxDensePtmQubits; ++k) {
      for (std::uint64_t i = 0; i < pauli_count(k); ++i) all[static_cast<std::size_t>(k)].push_back(monomial(k, i));
    }
    return all;
  }();
  if (n < 0 || n > kMaxDensePtmQubits) throw std::invalid_argument("dense Pauli basis capped at " + std::to_string(kMaxDensePtmQubits) + " qubits");
  return cache[static_cast<std::size_t>(n)];
}

// Tr(P M)
Complex pauli_trace(const PauliMonomial& p, const ComplexMatrix& m) {
  Complex acc = 0.0;
  for (std::size_t c = 0; c < p.phase.size(); ++c) acc += p.phase[c] * m(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c ^ p.flip));
  return acc;
}

// P rho P^dag
ComplexMatrix pauli_conjugate(const PauliMonomial& p, const ComplexMatrix& rho) {
  const Eigen::Index dim = rho.rows();
  ComplexMatrix out(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    const auto cs = static_cast<std::size_t>(c) ^ p.flip;
    for (Eigen::Index r = 0; r < dim; ++r) {
      const auto rs = static_cast<std::size_t>(r) ^ p.flip;
      out(r, c) = p.phase[rs] * rho(static_cast<Eigen::Index>(rs), static_cast<Eigen::Index>(cs)) * std::conj(p.phase[cs]);
    }
  }
  return out;
}

int qubits_for_dimension(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) throw std::invalid_argument("matrix dimension is not a power of two");
  return n;
}

ComplexMatrix choi_from_ptm(const PTM& ptm) {
  const int n = ptm.num_qubits();
  const auto& basis = monomials(n);
  const std::size_t d = std::size_t{1} << n;
  // L(P_j) = sum_i R_ij P_i
  std::vector<ComplexMatrix> images;
  images.reserve(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    ComplexMatrix img = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const double rij = ptm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (rij == 0.0) continue;
      for (std::size_t c = 0; c < d; ++c) img(static_cast<Eigen::Index>(c ^ basis[i].flip), static_cast<Eigen::Index>(c)) += rij * basis[i].phase[c];
    }
    images.push_back(std::move(img));
  }
  const auto dd = static_cast<Eigen::Index>(d * d);
  ComplexMatrix choi = ComplexMatrix::Zero(dd, dd);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      // |a><b| = (1/d) sum_{j: flip_j = a^b} <b|P_j|a> P_j
      ComplexMatrix block = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if (basis[j].flip != (a ^ b)) continue;
        block += (basis[j].phase[a] / static_cast<double>(d)) * images[j];
      }
      choi.block(static_cast<Eigen::Index>(a * d), static_cast<Eigen::Index>(b * d), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) = block;
    }
  }
  return choi;
}

void check_probability_vector(int n, const std::vector<double>& p, double tol) {
  if (p.size() != pauli_count(n)) throw std::invalid_argument("Pauli channel: need 4^n probabilities");
  double total = 0.0;
  for (double v : p) {
    if (v < -tol) throw std::invalid_argument("Pauli channel: negative probability");
    total += v;
  }
  if (std::abs(total - 1.0) > tol) throw std::invalid_argument("Pauli channel: probabilities do not sum to 1");
}

}  // namespace

// --- DensityMatrix -------------------------------------------------------------

DensityMatrix DensityMatrix::zero_state(int num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  rho(0, 0) = 1.0;
  return DensityMatrix(num_qubits, std::move(rho));
}

bool DensityMatrix::is_valid(const ComplexMatrix& rho, double tol) {
  if (rho.rows() != rho.cols()) return false;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > std::max(tol, 1e-10)) return false;
  if (std::abs(rho.trace().real() - 1.0) > std::max(tol, 1e-10)) return false;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tol;
}

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix rho, double tol) {
  const int n = qubits_for_dimension(rho.rows());
  if (!is_valid(rho, tol)) throw std::invalid_argument("DensityMatrix: matrix is not a valid density matrix");
  return DensityMatrix(n, std::move(rho));
}

double DensityMatrix::population(std::size_t basis_index) const {
  return rho_(static_cast<Eigen::Index>(basis_index), static_cast<Eigen::Index>(basis_index)).real();
}

// --- PTM ---------------------------------------------------------------------

PauliTransferMatrix::PauliTransferMatrix(int num_qubits, RealMatrix r) : n_(num_qubits), r_(std::move(r)) {
  const auto size = static_cast<Eigen::Index>(pauli_count(num_qubits));
  if (r_.rows() != size || r_.cols() != size) throw std::invalid_argument("PTM: matrix must be 4^n x 4^n");
}

PauliTransferMatrix PauliTransferMatrix::identity(int num_qubits) {
  const auto size = static_cast<Eigen::Index>(pauli_count(num_qubits));
  return PauliTransferMatrix(num_qubits, RealMatrix::Identity(size, size));
}

PauliTransferMatrix PauliTransferMatrix::diagonal(int num_qubits, std::span<const double> pauli_fidelities) {
  if (pauli_fidelities.size() != pauli_count(num_qubits)) throw std::invalid_argument("PTM::diagonal: need 4^n entries");
  RealVector diag(static_cast<Eigen::Index>(pauli_fidelities.size()));
  for (std::size_t i = 0; i < pauli_fidelities.size(); ++i) diag(static_cast<Eigen::Index>(i)) = pauli_fidelities[i];
  return PauliTransferMatrix(num_qubits, diag.asDiagonal());
}

bool PauliTransferMatrix::is_diagonal(double tol) const {
  RealMatrix off = r_;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff() <= tol;
}

PauliTransferMatrix PauliTransferMatrix::after(const PauliTransferMatrix& first) const {
  if (first.n_ != n_) throw std::invalid_argument("PTM compose: size mismatch");
  return PauliTransferMatrix(n_, r_ * first.r_);
}

PTM ptm_tensor(const PTM& a, const PTM& b) {
  const RealMatrix& ra = a.matrix();
  const RealMatrix& rb = b.matrix();
  RealMatrix out(ra.rows() * rb.rows(), ra.cols() * rb.cols());
  for (Eigen::Index i = 0; i < ra.rows(); ++i) {
    for (Eigen::Index j = 0; j < ra.cols(); ++j) out.block(i * rb.rows(), j * rb.cols(), rb.rows(), rb.cols()) = ra(i, j) * rb;
  }
  return PTM(a.num_qubits() + b.num_qubits(), std::move(out));
}

// --- QuantumChannel ----------------------------------------------------------

QuantumChannel QuantumChannel::identity(int num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  return QuantumChannel(num_qubits, KrausList{ComplexMatrix::Identity(dim, dim)});
}

QuantumChannel QuantumChannel::kraus(int num_qubits, KrausList ops, double tol) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  if (ops.empty()) throw std::invalid_argument("Kraus channel: empty operator list");
  ComplexMatrix completeness = ComplexMatrix::Zero(dim, dim);
  for (const auto& k : ops) {
    if (k.rows() != dim || k.cols() != dim) throw std::invalid_argument("Kraus channel: operator size mismatch");
    completeness += k.adjoint() * k;
  }
  if ((completeness - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("Kraus channel: not trace preserving");
  }
  return QuantumChannel(num_qubits, std::move(ops));
}

QuantumChannel QuantumChannel::unitary(const ComplexMatrix& u) {
  const int n = qubits_for_dimension(u.rows());
  return kraus(n, KrausList{u}, 1e-8);
}

QuantumChannel QuantumChannel::pauli(int num_qubits, std::vector<double> probabilities, double tol) {
  check_probability_vector(num_qubits, probabilities, tol);
  return QuantumChannel(num_qubits, PauliProbabilities{std::move(probabilities)});
}

QuantumChannel QuantumChannel::from_ptm(PTM ptm, double tol) {
  const RealMatrix& r = ptm.matrix();
  if (std::abs(r(0, 0) - 1.0) > tol || r.row(0).tail(r.cols() - 1).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("PTM channel: not trace preserving (first row must be (1, 0, ..., 0))");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(choi_from_ptm(ptm), Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol) throw std::invalid_argument("PTM channel: not completely positive");
  const int n = ptm.num_qubits();
  return QuantumChannel(n, std::move(ptm));
}

QuantumChannel QuantumChannel::depolarizing(int num_qubits, double alpha) {
  const double count = static_cast<double>(pauli_count(num_qubits));
  std::vector<double> p(pauli_count(num_qubits), (1.0 - alpha) / count);
  p[0] = (1.0 + (count - 1.0) * alpha) / count;
  return pauli(num_qubits, std::move(p));
}

QuantumChannel::Representation QuantumChannel::representation() const {
  if (std::holds_alternative<KrausList>(rep_)) return Representation::Kraus;
  if (std::holds_alternative<PauliProbabilities>(rep_)) return Representation::Pauli;
  return Representation::Transfer;
}

ComplexMatrix QuantumChannel::apply(const ComplexMatrix& rho) const {
  if (const auto* ks = std::get_if<KrausList>(&rep_)) {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& k : *ks) out += k * rho * k.adjoint();
    return out;
  }
  const auto& basis = monomials(n_);
  if (const auto* pp = std::get_if<PauliProbabilities>(&rep_)) {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (std::size_t b = 0; b < pp->p.size(); ++b) {
      if (pp->p[b] != 0.0) out += pp->p[b] * pauli_conjugate(basis[b], rho);
    }
    return out;
  }
  const PTM& ptm = std::get<PTM>(rep_);
  const double d = ptm.dimension();
  RealVector coeffs(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) coeffs(static_cast<Eigen::Index>(j)) = pauli_trace(basis[j], rho).real();
  const RealVector out_coeffs = ptm.matrix() * coeffs;
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double c = out_coeffs(static_cast<Eigen::Index>(i)) / d;
    if (c == 0.0) continue;
    for (std::size_t col = 0; col < basis[i].phase.size(); ++col) {
      out(static_cast<Eigen::Index>(col ^ basis[i].flip), static_cast<Eigen::Index>(col)) += c * basis[i].phase[col];
    }
  }
  return out;
}

QuantumChannel::KrausList QuantumChannel::to_kraus() const {
  if (const auto* ks = std::get_if<KrausList>(&rep_)) return *ks;
  if (const auto* pp = std::get_if<PauliProbabilities>(&rep_)) {
    KrausList out;
    for (std::size_t b = 0; b < pp->p.size(); ++b) {
      if (pp->p[b] > 0.0) out.push_back(std::sqrt(pp->p[b]) * pauli_matrix(n_, b));
    }
    return out;
  }
  const PTM& ptm = std::get<PTM>(rep_);
  const std::size_t d = std::size_t{1} << n_;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(choi_from_ptm(ptm));
  KrausList out;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double lambda = solver.eigenvalues()(k);
    if (lambda <= 1e-14) continue;
    ComplexMatrix op(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t r = 0; r < d; ++r) op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(a)) = std::sqrt(lambda) * solver.eigenvectors()(static_cast<Eigen::Index>(a * d + r), k);
    }
    out.push_back(std::move(op));
  }
  return out;
}

std::vector<double> QuantumChannel::to_pauli_probabilities(double tol) const {
  if (const auto* pp = std::get_if<PauliProbabilities>(&rep_)) return pp->p;
  const PTM ptm = ptm_from_channel(*this);
  if (!ptm.is_diagonal(tol)) throw std::invalid_argument("to_pauli_probabilities: channel is not Pauli-diagonal");
  const RealVector f = ptm.pauli_fidelities();
  return probabilities_from_pauli_fidelities(n_, std::span<const double>(f.data(), static_cast<std::size_t>(f.size())));
}

QuantumChannel QuantumChannel::then(const QuantumChannel& next) const {
  if (next.n_ != n_) throw std::invalid_argument("channel compose: size mismatch");
  const auto* p1 = std::get_if<PauliProbabilities>(&rep_);
  const auto* p2 = std::get_if<PauliProbabilities>(&next.rep_);
  if (p1 && p2) {
    const auto f1 = pauli_fidelities_from_probabilities(n_, p1->p);
    const auto f2 = pauli_fidelities_from_probabilities(n_, p2->p);
    std::vector<double> f(f1.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = f1[i] * f2[i];
    auto p = probabilities_from_pauli_fidelities(n_, f);
    for (double& v : p) v = std::max(v, 0.0);
    return pauli(n_, std::move(p), 1e-9);
  }
  if (std::holds_alternative<PTM>(rep_) || std::holds_alternative<PTM>(next.rep_)) {
    return QuantumChannel(n_, ptm_from_channel(next).after(ptm_from_channel(*this)));
  }
  KrausList out;
  for (const auto& b : next.to_kraus()) {
    for (const auto& a : to_kraus()) out.push_back(b * a);
  }
  return QuantumChannel(n_, std::move(out));
}

QuantumChannel QuantumChannel::tensor(const QuantumChannel& other) const {
  KrausList out;
  for (const auto& a : to_kraus()) {
    for (const auto& b : other.to_kraus()) out.push_back(Eigen::kroneckerProduct(a, b).eval());
  }
  return QuantumChannel(n_ + other.n_, std::move(out));
}

PTM ptm_from_channel(const QuantumChannel& channel) {
  const int n = channel.num_qubits();
  if (n > kMaxDensePtmQubits) throw std::invalid_argument("ptm_from_channel: dense PTM capped at 4 qubits");
  if (channel.representation() == QuantumChannel::Representation::Pauli) {
    const auto p = channel.to_pauli_probabilities();
    const auto f = pauli_fidelities_from_probabilities(n, p);
    return PTM::diagonal(n, f);
  }
  const auto& basis = monomials(n);
  const auto size = static_cast<Eigen::Index>(basis.size());
  const double d = static_cast<double>(std::size_t{1} << n);
  RealMatrix r(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    const ComplexMatrix image = channel.apply(pauli_matrix(n, static_cast<std::uint64_t>(j)));
    for (Eigen::Index i = 0; i < size; ++i) r(i, j) = pauli_trace(basis[static_cast<std::size_t>(i)], image).real() / d;
  }
  return PTM(n, std::move(r));
}

double process_fidelity(const PTM& experimental, const PTM& ideal) {
  if (experimental.num_qubits() != ideal.num_qubits()) throw std::invalid_argument("process_fidelity: dimension mismatch");
  Eigen::FullPivLU<RealMatrix> lu(ideal.matrix());
  if (!lu.isInvertible()) throw std::invalid_argument("process_fidelity: ideal PTM is singular");
  const double d = experimental.dimension();
  return lu.solve(experimental.matrix()).trace() / (d * d);
}

double process_fidelity(const PTM& experimental) {
  const double d = experimental.dimension();
  return experimental.matrix().trace() / (d * d);
}

std::vector<double> pauli_fidelities_from_probabilities(int num_qubits, std::span<const double> probabilities) {
  const std::uint64_t count = pauli_count(num_qubits);
  if (probabilities.size() != count) throw std::invalid_argument("pauli fidelities: need 4^n probabilities");
  std::vector<PauliString> paulis;
  for (std::uint64_t i = 0; i < count; ++i) paulis.push_back(PauliString::from_index(num_qubits, i));
  std::vector<double> f(count, 0.0);
  for (std::uint64_t a = 0; a < count; ++a) {
    for (std::uint64_t b = 0; b < count; ++b) f[a] += (paulis[a].commutes_with(paulis[b]) ? 1.0 : -1.0) * probabilities[b];
  }
  return f;
}

std::vector<double> probabilities_from_pauli_fidelities(int num_qubits, std::span<const double> fidelities) {
  const std::uint64_t count = pauli_count(num_qubits);
  if (fidelities.size() != count) throw std::invalid_argument("pauli probabilities: need 4^n fidelities");
  std::vector<PauliString> paulis;
  for (std::uint64_t i = 0; i < count; ++i) paulis.push_back(PauliString::from_index(num_qubits, i));
  std::vector<double> p(count, 0.0);
  for (std::uint64_t b = 0; b < count; ++b) {
    for (std::uint64_t a = 0; a < count; ++a) p[b] += (paulis[a].commutes_with(paulis[b]) ? 1.0 : -1.0) * fidelities[a];
    p[b] /= static_cast<double>(count);
  }
  return p;
}

FidelityConversions fidelity_conversions(double process_fidelity, int dimension) {
  if (dimension < 2) throw std::invalid_argument("fidelity_conversions: dimension must be >= 2");
  const double d = dimension;
  const double lower = -1.0 / (d * d - 1.0);
  if (process_fidelity < lower - 1e-12 || process_fidelity > 1.0 + 1e-12) {
    throw std::invalid_argument("fidelity_conversions: process fidelity outside the physical range");
  }
  const double gate = (d * process_fidelity + 1.0) / (d + 1.0);
  return {process_fidelity, gate, 1.0 - process_fidelity, 1.0 - gate};
}

double process_error_from_gate_error(double gate_error, int dimension) {
  const double d = dimension;
  return (d + 1.0) / d * gate_error;
}

double fidelity_product_disjoint(std::span<const double> fidelities) {
  double product = 1.0;
  for (double f : fidelities) {
    if (f < 0.0 || f > 1.0) throw std::invalid_argument("fidelity_product_disjoint: fidelity outside [0, 1]");
    product *= f;
  }
  return product;
}

}  // namespace layerfid
