#include "layerfid/core/pauli.hpp"

#include <bit>
#include <complex>
#include <stdexcept>

namespace layerfid {
namespace {

int code_of(bool x, bool z) {
  if (!x && !z) return 0;
  if (x && !z) return 1;
  if (x && z) return 2;
  return 3;
}

// Exponent g with sigma(x1,z1) sigma(x2,z2) = i^g sigma(x1^x2, z1^z2).
int product_exponent(int x1, int z1, int x2, int z2) {
  if (x1 == 0 && z1 == 0) return 0;
  if (x1 == 1 && z1 == 1) return z2 - x2;
  if (x1 == 1 && z1 == 0) return z2 * (2 * x2 - 1);
  return x2 * (1 - 2 * z2);
}

void check_qubit_count(int n) {
  if (n < 0 || n > kMaxPauliQubits) {
    throw std::invalid_argument("PauliString: qubit count out of range: " + std::to_string(n));
  }
}

}  // namespace

PauliString::PauliString(int num_qubits) : n_(num_qubits) { check_qubit_count(num_qubits); }

PauliString PauliString::from_label(std::string_view label) {
  int phase = 0;
  if (!label.empty() && (label.front() == '+' || label.front() == '-')) {
    if (label.front() == '-') phase += 2;
    label.remove_prefix(1);
  }
  if (!label.empty() && label.front() == 'i') {
    phase += 1;
    label.remove_prefix(1);
  }
  PauliString p(static_cast<int>(label.size()));
  for (int q = 0; q < p.n_; ++q) p.set(q, label[static_cast<std::size_t>(q)]);
  p.set_phase(phase);
  return p;
}

PauliString PauliString::from_index(int num_qubits, std::uint64_t index) {
  PauliString p(num_qubits);
  static constexpr char kLabels[] = {'I', 'X', 'Y', 'Z'};
  for (int q = num_qubits - 1; q >= 0; --q) {
    p.set(q, kLabels[index & 3U]);
    index >>= 2;
  }
  if (index != 0) throw std::invalid_argument("PauliString::from_index: index out of range");
  return p;
}

PauliString PauliString::single(int num_qubits, int qubit, char label) {
  PauliString p(num_qubits);
  p.set(qubit, label);
  return p;
}

char PauliString::label(int q) const {
  static constexpr char kLabels[] = {'I', 'X', 'Y', 'Z'};
  return kLabels[code_of(x(q), z(q))];
}

void PauliString::set(int q, char label) {
  if (q < 0 || q >= n_) throw std::out_of_range("PauliString::set: qubit out of range");
  const std::uint64_t bit = std::uint64_t{1} << q;
  x_ &= ~bit;
  z_ &= ~bit;
  switch (label) {
    case 'I': break;
    case 'X': x_ |= bit; break;
    case 'Y': x_ |= bit; z_ |= bit; break;
    case 'Z': z_ |= bit; break;
    default: throw std::invalid_argument(std::string("PauliString: bad label '") + label + "'");
  }
}

PauliString PauliString::without_phase() const {
  PauliString p = *this;
  p.phase_ = 0;
  return p;
}

int PauliString::sign() const {
  if (!is_hermitian()) throw std::logic_error("PauliString::sign: non-Hermitian phase");
  return phase_ == 0 ? 1 : -1;
}

std::uint64_t PauliString::index() const {
  std::uint64_t idx = 0;
  for (int q = 0; q < n_; ++q) idx = (idx << 2) | static_cast<std::uint64_t>(code_of(x(q), z(q)));
  return idx;
}

int PauliString::weight() const { return std::popcount(x_ | z_); }

bool PauliString::commutes_with(const PauliString& other) const { return symplectic_product(other) == 0; }

int PauliString::symplectic_product(const PauliString& other) const {
  if (n_ != other.n_) throw std::invalid_argument("PauliString: size mismatch");
  return (std::popcount(x_ & other.z_) + std::popcount(z_ & other.x_)) & 1;
}

PauliString PauliString::operator*(const PauliString& rhs) const {
  if (n_ != rhs.n_) throw std::invalid_argument("PauliString: size mismatch");
  PauliString out(n_);
  int g = phase_ + rhs.phase_;
  for (int q = 0; q < n_; ++q) g += product_exponent(x(q), z(q), rhs.x(q), rhs.z(q));
  out.x_ = x_ ^ rhs.x_;
  out.z_ = z_ ^ rhs.z_;
  out.set_phase(g);
  return out;
}

PauliString PauliString::operator-() const {
  PauliString p = *this;
  p.set_phase(phase_ + 2);
  return p;
}

PauliString PauliString::restricted(const std::vector<int>& qubits) const {
  PauliString p(static_cast<int>(qubits.size()));
  for (std::size_t i = 0; i < qubits.size(); ++i) p.set(static_cast<int>(i), label(qubits[i]));
  return p;
}

ComplexMatrix PauliString::matrix() const {
  const std::size_t dim = std::size_t{1} << n_;
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  static const std::complex<double> kPhases[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::size_t flip = 0;
  for (int q = 0; q < n_; ++q) {
    if (x(q)) flip |= std::size_t{1} << (n_ - 1 - q);
  }
  for (std::size_t col = 0; col < dim; ++col) {
    int k = phase_;
    for (int q = 0; q < n_; ++q) {
      const bool bit = (col >> (n_ - 1 - q)) & 1U;
      if (x(q) && z(q)) k += bit ? 3 : 1;  // Y|b> = i(-1)^b |1-b>
      else if (z(q) && bit) k += 2;
    }
    m(static_cast<Eigen::Index>(col ^ flip), static_cast<Eigen::Index>(col)) = kPhases[k % 4];
  }
  return m;
}

std::string PauliString::to_string() const {
  static const char* kPrefix[] = {"+", "+i", "-", "-i"};
  std::string s = kPrefix[phase_];
  for (int q = 0; q < n_; ++q) s.push_back(label(q));
  return s;
}

ComplexMatrix pauli_matrix(int num_qubits, std::uint64_t index) {
  return PauliString::from_index(num_qubits, index).matrix();
}

}  // namespace layerfid
