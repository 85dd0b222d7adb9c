#pragma once

#include <complex>
#include <string>
#include <vector>

#include "varqite/statevector.hpp"

namespace varqite {

enum class GateKind { H, X, Ry, CRy };

/// One circuit element. `qubit` is the target (1-based, qubit 1 = MSB),
/// `control` is set for CRy only, `param` is the 1-based angle index
/// (0 for the parameterless entry gates).
struct Gate {
  GateKind kind;
  int qubit = 0;
  int control = 0;
  int param = 0;
};

/// Fixed-structure circuit: an entry layer of H then X on every qubit, a
/// rotation layer, then `n_cells` unit cells of a descending controlled-Ry
/// ladder followed by a rotation layer. Gates are stored in temporal order.
struct AnsatzCircuit {
  int n_qubits = 0;
  int n_cells = 0;
  int n_params = 0;
  std::vector<Gate> gates;
};

using ParameterVector = Eigen::VectorXd;

/// n_qubits >= 2, n_cells >= 1. Parameter count is
/// n_qubits + n_cells * (2*n_qubits - 1); 4 qubits with 3 cells give 25.
AnsatzCircuit build_ansatz(int n_qubits, int n_cells);

/// |phi(theta)> from |0...0>. Unit norm; amplitudes are real for this
/// Ry-only gate set.
StateVector prepare_state(const AnsatzCircuit& c, const ParameterVector& theta);

/// Exact d|phi>/d(theta_k) by inserting the gate generator at gate k's
/// position: -(i/2) Y on the target for Ry, -(i/2) |1><1| (x) Y for CRy.
/// k is 1-based. The result is unnormalized.
StateVector derivative_state(const AnsatzCircuit& c, const ParameterVector& theta, int k);

/// Central finite difference (|phi(theta + h e_k)> - |phi(theta - h e_k)>) / 2h.
StateVector derivative_state_fd(const AnsatzCircuit& c, const ParameterVector& theta,
                                int k, double h);

/// Pauli-sum expansion of the generator of parameter k, as n-qubit strings
/// over {I,X,Y,Z} with scalar coefficients: f*sigma per Assumption-style
/// singleton products. Ry gives one term, CRy two.
struct GeneratorTerm {
  std::string paulis;
  std::complex<double> coeff;
};
std::vector<GeneratorTerm> generator_terms(const AnsatzCircuit& c, int k);

/// Index into c.gates of the gate carrying parameter k.
std::size_t gate_index_of_param(const AnsatzCircuit& c, int k);

// Line-oriented text form, one `GATE kind qubit[,control] param` per line.
std::string serialize_circuit(const AnsatzCircuit& c);
AnsatzCircuit parse_circuit(const std::string& text);

}  // namespace varqite
