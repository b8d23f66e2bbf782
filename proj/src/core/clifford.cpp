#include "layerfid/core/clifford.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace layerfid {
namespace {

// Symplectic vector packing: bits [0, n) are x, bits [n, 2n) are z.
std::uint64_t symplectic_vector(const PauliString& p) {
  const int n = p.num_qubits();
  return p.x_bits() | (p.z_bits() << n);
}

PauliString hermitian_from_vector(int n, std::uint64_t v) {
  PauliString p(n);
  for (int q = 0; q < n; ++q) {
    const bool x = (v >> q) & 1U;
    const bool z = (v >> (n + q)) & 1U;
    p.set(q, x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I'));
  }
  return p;
}

}  // namespace

CliffordTableau::CliffordTableau(int num_qubits) : n_(num_qubits) {
  if (num_qubits < 1 || num_qubits > 16) throw std::invalid_argument("CliffordTableau: unsupported qubit count");
  images_.reserve(static_cast<std::size_t>(2 * n_));
  for (int q = 0; q < n_; ++q) images_.push_back(PauliString::single(n_, q, 'X'));
  for (int q = 0; q < n_; ++q) images_.push_back(PauliString::single(n_, q, 'Z'));
}

CliffordTableau CliffordTableau::from_unitary(const ComplexMatrix& u, double tol) {
  const Eigen::Index dim = u.rows();
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim || u.cols() != dim) throw std::invalid_argument("from_unitary: not a qubit unitary");
  if (n > 4) throw std::invalid_argument("from_unitary: dense readout capped at 4 qubits");
  CliffordTableau t(n);
  const double d = static_cast<double>(dim);
  std::vector<ComplexMatrix> paulis;
  for (std::uint64_t i = 0; i < pauli_count(n); ++i) paulis.push_back(pauli_matrix(n, i));
  for (int g = 0; g < 2 * n; ++g) {
    const PauliString gen = g < n ? PauliString::single(n, g, 'X') : PauliString::single(n, g - n, 'Z');
    const ComplexMatrix m = u * gen.matrix() * u.adjoint();
    bool found = false;
    for (std::uint64_t i = 0; i < paulis.size() && !found; ++i) {
      const std::complex<double> c = (paulis[i] * m).trace() / d;
      if (std::abs(std::abs(c) - 1.0) < tol) {
        if (std::abs(c.imag()) > tol) throw std::invalid_argument("from_unitary: non-Hermitian image");
        PauliString img = PauliString::from_index(n, i);
        if (c.real() < 0) img = -img;
        t.images_[static_cast<std::size_t>(g)] = img;
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("from_unitary: unitary is not Clifford");
  }
  return t;
}

CliffordTableau CliffordTableau::from_ops(std::span<const NativeOp> ops, int num_qubits) {
  return from_unitary(sequence_unitary(ops, num_qubits));
}

PauliString CliffordTableau::conjugate(const PauliString& p) const {
  if (p.num_qubits() != n_) throw std::invalid_argument("conjugate: size mismatch");
  PauliString out(n_);
  int phase = p.phase();
  for (int q = 0; q < n_; ++q) {
    // Y = i X Z
    if (p.x(q) && p.z(q)) phase += 1;
    if (p.x(q)) out = out * x_image(q);
    if (p.z(q)) out = out * z_image(q);
  }
  out.set_phase(out.phase() + phase);
  return out;
}

CliffordTableau operator*(const CliffordTableau& a, const CliffordTableau& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("clifford compose: size mismatch");
  CliffordTableau out(a.n_);
  for (std::size_t g = 0; g < out.images_.size(); ++g) out.images_[g] = a.conjugate(b.images_[g]);
  return out;
}

CliffordTableau CliffordTableau::inverse() const {
  const int m = 2 * n_;
  // Solve S y = e_i over GF(2); column j of S is the symplectic image of generator j.
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(m), 0);  // row r: bits [0,m) = S row, bits [m,2m) = identity
  for (int r = 0; r < m; ++r) {
    std::uint64_t row = 0;
    for (int j = 0; j < m; ++j) {
      if ((symplectic_vector(images_[static_cast<std::size_t>(j)]) >> r) & 1U) row |= std::uint64_t{1} << j;
    }
    rows[static_cast<std::size_t>(r)] = row | (std::uint64_t{1} << (m + r));
  }
  for (int col = 0; col < m; ++col) {
    int pivot = -1;
    for (int r = col; r < m; ++r) {
      if ((rows[static_cast<std::size_t>(r)] >> col) & 1U) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw std::logic_error("CliffordTableau::inverse: singular symplectic matrix");
    std::swap(rows[static_cast<std::size_t>(col)], rows[static_cast<std::size_t>(pivot)]);
    for (int r = 0; r < m; ++r) {
      if (r != col && ((rows[static_cast<std::size_t>(r)] >> col) & 1U)) rows[static_cast<std::size_t>(r)] ^= rows[static_cast<std::size_t>(col)];
    }
  }
  // rows now hold [I | S^-1]; column i of S^-1 is the preimage of generator i.
  CliffordTableau inv(n_);
  for (int i = 0; i < m; ++i) {
    std::uint64_t y = 0;
    for (int r = 0; r < m; ++r) {
      if ((rows[static_cast<std::size_t>(r)] >> (m + i)) & 1U) y |= std::uint64_t{1} << r;
    }
    PauliString candidate = hermitian_from_vector(n_, y);
    const PauliString gen = i < n_ ? PauliString::single(n_, i, 'X') : PauliString::single(n_, i - n_, 'Z');
    const PauliString back = conjugate(candidate);
    if (back.without_phase() != gen) throw std::logic_error("CliffordTableau::inverse: preimage mismatch");
    if (back.phase() == 2) candidate = -candidate;
    inv.images_[static_cast<std::size_t>(i)] = candidate;
  }
  return inv;
}

bool CliffordTableau::is_identity() const { return *this == CliffordTableau(n_); }

CliffordTableau clifford_tensor(const CliffordTableau& a, const CliffordTableau& b) {
  const int na = a.num_qubits();
  const int n = na + b.num_qubits();
  auto lift = [n](const PauliString& p, int offset) {
    PauliString out(n);
    for (int q = 0; q < p.num_qubits(); ++q) out.set(q + offset, p.label(q));
    out.set_phase(p.phase());
    return out;
  };
  std::vector<PauliString> images;
  for (int q = 0; q < na; ++q) images.push_back(lift(a.x_image(q), 0));
  for (int q = 0; q < b.num_qubits(); ++q) images.push_back(lift(b.x_image(q), na));
  for (int q = 0; q < na; ++q) images.push_back(lift(a.z_image(q), 0));
  for (int q = 0; q < b.num_qubits(); ++q) images.push_back(lift(b.z_image(q), na));
  return CliffordTableau::from_images(std::move(images));
}

CliffordTableau CliffordTableau::from_images(std::vector<PauliString> images) {
  const auto m = images.size();
  if (m == 0 || m % 2 != 0) throw std::invalid_argument("from_images: need 2n images");
  const int n = static_cast<int>(m / 2);
  for (std::size_t i = 0; i < m; ++i) {
    if (images[i].num_qubits() != n || !images[i].is_hermitian() || images[i].is_identity()) {
      throw std::invalid_argument("from_images: images must be non-identity Hermitian Paulis on n qubits");
    }
    for (std::size_t j = i + 1; j < m; ++j) {
      // X_q and Z_q anticommute; every other generator pair commutes.
      const bool should_anticommute = (j == i + static_cast<std::size_t>(n)) && i < static_cast<std::size_t>(n);
      if (images[i].commutes_with(images[j]) == should_anticommute) {
        throw std::invalid_argument("from_images: images violate the Pauli commutation relations");
      }
    }
  }
  CliffordTableau t(n);
  t.images_ = std::move(images);
  return t;
}

}  // namespace layerfid
