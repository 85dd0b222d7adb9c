#include "varqite/statevector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace varqite {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};

void check_qubit(int qubit, const StateVector& s) {
  if (qubit < 1 || qubit > s.n_qubits) {
    throw std::invalid_argument("qubit index " + std::to_string(qubit) +
                                " out of range [1, " + std::to_string(s.n_qubits) + "]");
  }
}
}  // namespace

StateVector zero_state(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 12) {
    throw std::invalid_argument("n_qubits must lie in [1, 12], got " +
                                std::to_string(n_qubits));
  }
  StateVector s;
  s.n_qubits = n_qubits;
  s.amps = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
  s.amps[0] = 1.0;
  return s;
}

StateVector basis_state(int n_qubits, Eigen::Index index) {
  StateVector s = zero_state(n_qubits);
  if (index < 0 || index >= s.dim()) {
    throw std::invalid_argument("basis index out of range");
  }
  s.amps[0] = 0.0;
  s.amps[index] = 1.0;
  return s;
}

Eigen::Matrix2cd gate_i() { return Eigen::Matrix2cd::Identity(); }

Eigen::Matrix2cd gate_x() {
  Eigen::Matrix2cd g;
  g << 0, 1, 1, 0;
  return g;
}

Eigen::Matrix2cd gate_y() {
  Eigen::Matrix2cd g;
  g << 0, -kI, kI, 0;
  return g;
}

Eigen::Matrix2cd gate_h() {
  Eigen::Matrix2cd g;
  const double s = 1.0 / std::sqrt(2.0);
  g << s, s, s, -s;
  return g;
}

Eigen::Matrix2cd gate_ry(double theta) {
  Eigen::Matrix2cd g;
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  g << c, -s, s, c;
  return g;
}

Eigen::Matrix4cd gate_cry(double theta) {
  Eigen::Matrix4cd g = Eigen::Matrix4cd::Identity();
  g.block<2, 2>(2, 2) = gate_ry(theta);
  return g;
}

StateVector apply_single(const Eigen::Matrix2cd& g, int qubit, const StateVector& s) {
  check_qubit(qubit, s);
  const Eigen::Index stride = Eigen::Index{1} << (s.n_qubits - qubit);
  StateVector out = s;
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    if (i & stride) continue;
    const auto a0 = s.amps[i];
    const auto a1 = s.amps[i | stride];
    out.amps[i] = g(0, 0) * a0 + g(0, 1) * a1;
    out.amps[i | stride] = g(1, 0) * a0 + g(1, 1) * a1;
  }
  return out;
}

StateVector apply_controlled(const Eigen::Matrix2cd& g, int control, int target,
                             const StateVector& s) {
  check_qubit(control, s);
  check_qubit(target, s);
  if (control == target) {
    throw std::invalid_argument("control and target must differ");
  }
  const Eigen::Index cbit = Eigen::Index{1} << (s.n_qubits - control);
  const Eigen::Index tbit = Eigen::Index{1} << (s.n_qubits - target);
  StateVector out = s;
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    if (!(i & cbit) || (i & tbit)) continue;
    const auto a0 = s.amps[i];
    const auto a1 = s.amps[i | tbit];
    out.amps[i] = g(0, 0) * a0 + g(0, 1) * a1;
    out.amps[i | tbit] = g(1, 0) * a0 + g(1, 1) * a1;
  }
  return out;
}

StateVector apply_dense(const Eigen::MatrixXcd& m, const StateVector& s) {
  if (m.rows() != s.dim() || m.cols() != s.dim()) {
    throw std::invalid_argument("operator dimension does not match state");
  }
  StateVector out;
  out.n_qubits = s.n_qubits;
  out.amps = m * s.amps;
  return out;
}

std::complex<double> inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("inner_product: dimension mismatch");
  }
  return a.amps.dot(b.amps);
}

}  // namespace varqite
