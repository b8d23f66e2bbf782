#include "layerfid/core/gates.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace layerfid {

using namespace std::complex_literals;

std::string_view to_string(TwoQubitGateType type) {
  switch (type) {
    case TwoQubitGateType::CX: return "CX";
    case TwoQubitGateType::CZ: return "CZ";
    case TwoQubitGateType::ECR: return "ECR";
  }
  return "?";
}

TwoQubitGateType parse_two_qubit_gate_type(std::string_view name) {
  if (name == "CX" || name == "cx" || name == "CNOT") return TwoQubitGateType::CX;
  if (name == "CZ" || name == "cz") return TwoQubitGateType::CZ;
  if (name == "ECR" || name == "ecr") return TwoQubitGateType::ECR;
  throw std::invalid_argument("unknown two-qubit gate type '" + std::string(name) + "'");
}

ComplexMatrix x90_matrix(double scale) {
  const double half = scale * std::numbers::pi / 4.0;
  ComplexMatrix m(2, 2);
  m << std::cos(half), -1i * std::sin(half), -1i * std::sin(half), std::cos(half);
  return m;
}

ComplexMatrix rz_matrix(double theta) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = std::exp(-0.5i * theta);
  m(1, 1) = std::exp(0.5i * theta);
  return m;
}

ComplexMatrix two_qubit_generator(TwoQubitGateType type) {
  const double quarter = std::numbers::pi / 4.0;
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  switch (type) {
    case TwoQubitGateType::CX: {
      // pi |1><1| (x) |-><-|  =  pi/4 (I - Z)(I - X)
      const ComplexMatrix z0 = PauliString::from_label("ZI").matrix();
      const ComplexMatrix x1 = PauliString::from_label("IX").matrix();
      return quarter * (id - z0) * (id - x1);
    }
    case TwoQubitGateType::CZ: {
      ComplexMatrix h = ComplexMatrix::Zero(4, 4);
      h(3, 3) = std::numbers::pi;
      return h;
    }
    case TwoQubitGateType::ECR:
      return quarter * PauliString::from_label("ZX").matrix();
  }
  throw std::logic_error("two_qubit_generator: unreachable");
}

ComplexMatrix two_qubit_gate_matrix(TwoQubitGateType type) { return hermitian_exp(two_qubit_generator(type)); }

ComplexMatrix hermitian_exp(const ComplexMatrix& hamiltonian, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hamiltonian);
  const Eigen::VectorXcd phases = (-1i * t * solver.eigenvalues().cast<std::complex<double>>()).array().exp();
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

ComplexMatrix embed(const ComplexMatrix& op, std::span<const int> targets, int num_qubits) {
  const int k = static_cast<int>(targets.size());
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  const Eigen::Index local_dim = Eigen::Index{1} << k;
  if (op.rows() != local_dim || op.cols() != local_dim) throw std::invalid_argument("embed: operator size mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  auto local_index = [&](Eigen::Index full) {
    Eigen::Index idx = 0;
    for (int t = 0; t < k; ++t) idx = (idx << 1) | ((full >> (num_qubits - 1 - targets[t])) & 1);
    return idx;
  };
  Eigen::Index target_mask = 0;
  for (int t : targets) target_mask |= Eigen::Index{1} << (num_qubits - 1 - t);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Eigen::Index lc = local_index(col);
    const Eigen::Index rest = col & ~target_mask;
    for (Eigen::Index lr = 0; lr < local_dim; ++lr) {
      const std::complex<double> v = op(lr, lc);
      if (v == 0.0) continue;
      Eigen::Index row = rest;
      for (int t = 0; t < k; ++t) {
        if ((lr >> (k - 1 - t)) & 1) row |= Eigen::Index{1} << (num_qubits - 1 - targets[t]);
      }
      out(row, col) = v;
    }
  }
  return out;
}

ComplexMatrix sequence_unitary(std::span<const NativeOp> ops, int num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (const NativeOp& op : ops) {
    switch (op.kind) {
      case NativeOp::Kind::X90: {
        const int q[] = {op.qubits[0]};
        u = embed(x90_matrix(), q, num_qubits) * u;
        break;
      }
      case NativeOp::Kind::Rz: {
        const int q[] = {op.qubits[0]};
        u = embed(rz_matrix(op.angle), q, num_qubits) * u;
        break;
      }
      case NativeOp::Kind::TwoQubit:
        u = embed(two_qubit_gate_matrix(op.type), op.qubits, num_qubits) * u;
        break;
    }
  }
  return u;
}

double unitary_overlap_fidelity(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw std::invalid_argument("unitary_overlap_fidelity: size mismatch");
  const double d = static_cast<double>(u.rows());
  return std::norm((u.adjoint() * v).trace()) / (d * d);
}

bool equal_up_to_phase(const ComplexMatrix& u, const ComplexMatrix& v, double tol) {
  if (u.rows() != v.rows()) return false;
  const double d = static_cast<double>(u.rows());
  return std::abs(std::abs((u.adjoint() * v).trace()) / d - 1.0) <= tol;
}

}  // namespace layerfid
