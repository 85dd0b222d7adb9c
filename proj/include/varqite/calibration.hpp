#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varqite/ansatz.hpp"
#include "varqite/hamiltonian.hpp"

namespace varqite {

/// Normalized payoff encoding. `raw_norm` is the 2-norm of the payoff
/// vector before normalization, needed to undo the encoding.
struct TargetState {
  StateVector state;
  double raw_norm = 0.0;
  std::string label;
};

/// Entries e^{-a x_i} max(e^{x_i} - K, 0), normalized. Rejects grids where
/// the payoff vanishes everywhere.
TargetState payoff_state_european(const SpaceGrid& x_grid, double strike,
                                  const TransformConstants& consts);

/// Entries max(y_i, 0), normalized.
TargetState payoff_state_asian(const SpaceGrid& y_grid);

struct OptimizerConfig {
  int population_factor = 15;       // population = factor * n_params
  double differential_weight = 0.8; // F
  double crossover_rate = 0.9;      // CR
  int max_generations = 2000;
  double target_epsilon = 0.05;
  double lower_bound = -3.14159265358979323846;
  double upper_bound = 3.0 * 3.14159265358979323846;
  std::uint64_t seed = 0;
  int polish_iterations = 100;
};

struct FitResult {
  ParameterVector theta0;
  double epsilon = 0.0;  // || |phi(theta0)> - |psi(0)> ||
  int n_cells = 0;
  bool converged = false;
  int generations = 0;
  long evaluations = 0;
};

/// Differential evolution (rand/1/bin) over the box, followed by a
/// Levenberg-Marquardt polish on the residual vector using the exact
/// generator-insertion Jacobian. `warm_starts` are injected into the
/// initial population.
FitResult fit_theta0(const AnsatzCircuit& c, const TargetState& target,
                     const OptimizerConfig& cfg,
                     const std::vector<ParameterVector>& warm_starts = {});

struct DepthSearchResult {
  AnsatzCircuit circuit;
  FitResult fit;
  bool converged = false;
};

/// Escalating-depth loop: fit, escalate the cell count while the residual
/// exceeds eps_max, warm-starting each escalation with the zero-padded
/// previous optimum. Reports non-convergence when the cell budget runs out.
DepthSearchResult ansatz_depth_search(const TargetState& target, double eps_max,
                                      int n_cells_start, int n_cells_max, int n_qubits,
                                      const OptimizerConfig& cfg);

}  // namespace varqite
