#pragma once

// Shared test helpers: dense Kronecker builders used as the independent
// route against the in-place gate application, and random-state utilities.

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "varqite/ansatz.hpp"
#include "varqite/statevector.hpp"

namespace test_support {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// (I x ... x g x ... x I) with g at 1-based position `qubit` of n factors.
inline Eigen::MatrixXcd embed_single(const Eigen::Matrix2cd& g, int qubit, int n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Ones(1, 1);
  for (int q = 1; q <= n; ++q) {
    out = kron(out, q == qubit ? Eigen::MatrixXcd(g)
                               : Eigen::MatrixXcd(Eigen::Matrix2cd::Identity()));
  }
  return out;
}

// Dense matrix of a controlled gate at arbitrary (control, target):
// g on the target over the control=|1> subspace.
inline Eigen::MatrixXcd embed_controlled(const Eigen::Matrix2cd& g, int control, int target,
                                         int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::Index cbit = Eigen::Index{1} << (n - control);
  const Eigen::Index tbit = Eigen::Index{1} << (n - target);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (!(i & cbit)) continue;
    const Eigen::Index base = i & ~tbit;
    const int trow = (i & tbit) ? 1 : 0;
    out(i, base) = g(trow, 0);
    out(i, base | tbit) = g(trow, 1);
  }
  return out;
}

// Full circuit as one dense matrix (temporal order = right-to-left product).
inline Eigen::MatrixXcd circuit_matrix(const varqite::AnsatzCircuit& c,
                                       const varqite::ParameterVector& theta) {
  const Eigen::Index dim = Eigen::Index{1} << c.n_qubits;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(dim, dim);
  for (const varqite::Gate& g : c.gates) {
    Eigen::MatrixXcd e;
    switch (g.kind) {
      case varqite::GateKind::H:
        e = embed_single(varqite::gate_h(), g.qubit, c.n_qubits);
        break;
      case varqite::GateKind::X:
        e = embed_single(varqite::gate_x(), g.qubit, c.n_qubits);
        break;
      case varqite::GateKind::Ry:
        e = embed_single(varqite::gate_ry(theta[g.param - 1]), g.qubit, c.n_qubits);
        break;
      case varqite::GateKind::CRy:
        e = embed_controlled(varqite::gate_ry(theta[g.param - 1]), g.control, g.qubit,
                             c.n_qubits);
        break;
    }
    out = e * out;
  }
  return out;
}

inline varqite::StateVector random_state(int n_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  varqite::StateVector s;
  s.n_qubits = n_qubits;
  s.amps = Eigen::VectorXcd(Eigen::Index{1} << n_qubits);
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    s.amps[i] = std::complex<double>(gauss(rng), gauss(rng));
  }
  s.amps /= s.amps.norm();
  return s;
}

inline varqite::ParameterVector random_theta(int n, std::mt19937_64& rng, double lo,
                                             double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  varqite::ParameterVector theta(n);
  for (int i = 0; i < n; ++i) theta[i] = u(rng);
  return theta;
}

}  // namespace test_support
