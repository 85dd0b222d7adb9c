#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "varqite/ansatz.hpp"
#include "varqite/hamiltonian.hpp"

namespace varqite {

/// Deterministic stream splitting: every consumer derives its own engine
/// from (seed, stream) so runs are bit-reproducible regardless of how many
/// entries get sampled.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);
std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream);

enum class MeasurementMode { Exact, Shots };

struct EvolutionConfig {
  double tau_final = 0.04;
  int n_steps = 500;
  double cutoff_ratio = 1e-8;
  MeasurementMode mode = MeasurementMode::Exact;
  long shots = 0;
  std::uint64_t rng_seed = 0;
  bool use_pauli_path = false;          // C via the Pauli-term sum instead of the dense matvec
  bool global_phase_correction = false; // subtract Re<d_i phi|phi> <phi|H|phi> from C

  double dtau() const { return tau_final / n_steps; }
};

struct McLachlanSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd c;
  Eigen::VectorXd singular_values;
};

/// A_ij = Re <d_i phi | d_j phi>, the Gram matrix of the generator-inserted
/// derivative states. Symmetric positive semidefinite.
Eigen::MatrixXd assemble_a(const AnsatzCircuit& c, const ParameterVector& theta);

/// C_i = Re <d_i phi | H | phi> via the dense matrix-vector product.
Eigen::VectorXd assemble_c(const AnsatzCircuit& c, const ParameterVector& theta,
                           const Eigen::MatrixXd& h);

/// Same quantity through the Pauli-term sum sum_j lambda_j <d_i phi|h_j|phi>.
Eigen::VectorXd assemble_c_pauli(const AnsatzCircuit& c, const ParameterVector& theta,
                                 const PauliDecomposition& h);

// Ancilla-based indirect measurement. One extra qubit is prepared with H,
// the generator insertions are applied controlled (X-conjugated for the
// bra-side branch), and the ancilla expectation gives the overlap. Exact
// mode evaluates the expectation from the statevector; Shots mode draws a
// binomial sample of the +/-1 outcome with the exact probability.
double hadamard_test_a_entry(const AnsatzCircuit& c, const ParameterVector& theta,
                             int i, int j, const EvolutionConfig& cfg,
                             std::mt19937_64& rng);
double hadamard_test_c_entry(const AnsatzCircuit& c, const ParameterVector& theta,
                             int i, const PauliDecomposition& h,
                             const EvolutionConfig& cfg, std::mt19937_64& rng);
Eigen::MatrixXd assemble_a_hadamard(const AnsatzCircuit& c, const ParameterVector& theta,
                                    const EvolutionConfig& cfg, std::mt19937_64& rng);
Eigen::VectorXd assemble_c_hadamard(const AnsatzCircuit& c, const ParameterVector& theta,
                                    const PauliDecomposition& h, const EvolutionConfig& cfg,
                                    std::mt19937_64& rng);

struct SolveResult {
  Eigen::VectorXd theta_dot;
  Eigen::VectorXd singular_values;
  int truncated_modes = 0;
  bool all_truncated = false;
  double residual = 0.0;  // ||A theta_dot - C||
};

/// Minimum-norm least squares with singular values below
/// cutoff_ratio * sigma_max zeroed out.
SolveResult solve_thetadot(const Eigen::MatrixXd& a, const Eigen::VectorXd& c,
                           double cutoff_ratio);

struct StepRecord {
  double tau = 0.0;
  Eigen::VectorXd theta;
  double theta_dot_norm = 0.0;
  double residual = 0.0;
  double oracle_distance = std::numeric_limits<double>::quiet_NaN();
  double min_eigenvalue = 0.0;
  double symmetry_gap = 0.0;
  int truncated_modes = 0;
  double wall_seconds = 0.0;
};

struct EvolutionTrace {
  std::vector<StepRecord> steps;  // n_steps + 1 records including tau = 0
  bool diverged = false;
  int diverged_step = -1;
};

/// Euler march of A(tau) theta_dot = C(tau). Time-dependent Hamiltonians are
/// frozen at the left endpoint of each interval; in Pauli mode the
/// decomposition is refreshed alongside. Aborts (diverged flag) when
/// ||theta_dot|| exceeds 1e6. Reference states, when given, must hold
/// n_steps + 1 unit vectors and are used for the tracked distance.
EvolutionTrace evolve(const AnsatzCircuit& c, const ParameterVector& theta0,
                      const HamiltonianSpec& h, const EvolutionConfig& cfg,
                      const std::vector<StateVector>* reference_states = nullptr);

}  // namespace varqite
