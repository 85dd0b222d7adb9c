#pragma once

#include <Eigen/Dense>
#include <complex>

namespace varqite {

/// Dense n-qubit state. Qubit 1 is the most significant bit of the basis
/// label, so basis index 0 is |00...0> and index 2^n-1 is |11...1>.
struct StateVector {
  int n_qubits = 0;
  Eigen::VectorXcd amps;

  Eigen::Index dim() const { return amps.size(); }
  double norm() const { return amps.norm(); }
};

/// |00...0>. n_qubits must lie in [1, 12].
StateVector zero_state(int n_qubits);

/// Unit amplitude on one basis index.
StateVector basis_state(int n_qubits, Eigen::Index index);

// Gate matrices. Ry(theta) = exp(-i*theta/2 * Y); the controlled variant is
// block-diagonal [I, 0; 0, Ry(theta)] with the control as the more
// significant qubit of the pair.
Eigen::Matrix2cd gate_i();
Eigen::Matrix2cd gate_x();
Eigen::Matrix2cd gate_y();
Eigen::Matrix2cd gate_h();
Eigen::Matrix2cd gate_ry(double theta);
Eigen::Matrix4cd gate_cry(double theta);

/// Apply a one-qubit operator at position `qubit` (1-based, qubit 1 = MSB).
/// Equivalent to (I x ... x g x ... x I) * s. `g` need not be unitary.
StateVector apply_single(const Eigen::Matrix2cd& g, int qubit, const StateVector& s);

/// Apply `g` to `target` on the subspace where `control` is |1>, identity
/// elsewhere. control != target.
StateVector apply_controlled(const Eigen::Matrix2cd& g, int control, int target,
                             const StateVector& s);

/// result = m * s. No unitarity requirement.
StateVector apply_dense(const Eigen::MatrixXcd& m, const StateVector& s);

/// <a|b>, conjugate-linear in a.
std::complex<double> inner_product(const StateVector& a, const StateVector& b);

}  // namespace varqite
