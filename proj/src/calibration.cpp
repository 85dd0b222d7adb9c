#include "varqite/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "varqite/mclachlan.hpp"

namespace varqite {

namespace {

TargetState normalize_payoff(Eigen::VectorXd payoff, int n_qubits, std::string label) {
  const double nrm = payoff.norm();
  if (!(nrm > 0.0)) {
    throw std::runtime_error("payoff vanishes on the whole grid; nothing to encode");
  }
  TargetState t;
  t.state.n_qubits = n_qubits;
  t.state.amps = (payoff / nrm).cast<std::complex<double>>();
  t.raw_norm = nrm;
  t.label = std::move(label);
  return t;
}

int qubits_for(int n_points) {
  int n = 0;
  while ((1 << n) < n_points) ++n;
  if ((1 << n) != n_points) {
    throw std::invalid_argument("grid size must be a power of two");
  }
  return n;
}

double residual_norm(const AnsatzCircuit& c, const ParameterVector& theta,
                     const TargetState& target) {
  return (prepare_state(c, theta).amps - target.state.amps).norm();
}

// Levenberg-Marquardt on r(theta) = phi(theta) - target with the exact
// Jacobian from generator insertion.
void lm_polish(const AnsatzCircuit& c, const TargetState& target, ParameterVector& theta,
               double& eps, int max_iterations, long& evaluations) {
  const int n = c.n_params;
  double mu = 1e-3;
  for (int it = 0; it < max_iterations; ++it) {
    const StateVector phi = prepare_state(c, theta);
    const Eigen::VectorXd r = (phi.amps - target.state.amps).real();
    Eigen::MatrixXd jac(r.size(), n);
    for (int k = 1; k <= n; ++k) {
      jac.col(k - 1) = derivative_state(c, theta, k).amps.real();
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    if (jtr.norm() < 1e-14) break;
    bool improved = false;
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal().array() += mu;
      const ParameterVector step = lhs.ldlt().solve(-jtr);
      const ParameterVector trial = theta + step;
      const double trial_eps = residual_norm(c, trial, target);
      ++evaluations;
      if (trial_eps < eps) {
        theta = trial;
        eps = trial_eps;
        mu = std::max(mu * 0.3, 1e-12);
        improved = true;
        break;
      }
      mu *= 10.0;
    }
    if (!improved) break;
  }
}

}  // namespace

TargetState payoff_state_european(const SpaceGrid& x_grid, double strike,
                                  const TransformConstants& consts) {
  Eigen::VectorXd payoff(x_grid.n_points);
  for (int i = 0; i < x_grid.n_points; ++i) {
    const double x = x_grid.values[i];
    payoff[i] = std::exp(-consts.a() * x) * std::max(std::exp(x) - strike, 0.0);
  }
  return normalize_payoff(std::move(payoff), qubits_for(x_grid.n_points), "european");
}

TargetState payoff_state_asian(const SpaceGrid& y_grid) {
  Eigen::VectorXd payoff = y_grid.values.cwiseMax(0.0);
  return normalize_payoff(std::move(payoff), qubits_for(y_grid.n_points), "asian");
}

FitResult fit_theta0(const AnsatzCircuit& c, const TargetState& target,
                     const OptimizerConfig& cfg,
                     const std::vector<ParameterVector>& warm_starts) {
  if (target.state.dim() != (Eigen::Index{1} << c.n_qubits)) {
    throw std::invalid_argument("target dimension does not match circuit");
  }
  const int n = c.n_params;
  const int pop_size = std::max(cfg.population_factor * n, 8);
  auto rng = make_engine(cfg.seed, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, pop_size - 1);
  std::uniform_int_distribution<int> pick_dim(0, n - 1);
  const double span = cfg.upper_bound - cfg.lower_bound;

  FitResult result;
  result.n_cells = c.n_cells;

  std::vector<ParameterVector> pop(static_cast<std::size_t>(pop_size));
  Eigen::VectorXd fitness(pop_size);
  for (int i = 0; i < pop_size; ++i) {
    ParameterVector candidate(n);
    if (i < static_cast<int>(warm_starts.size()) &&
        warm_starts[static_cast<std::size_t>(i)].size() == n) {
      candidate = warm_starts[static_cast<std::size_t>(i)];
    } else {
      for (int d = 0; d < n; ++d) candidate[d] = cfg.lower_bound + span * unit(rng);
    }
    pop[static_cast<std::size_t>(i)] = candidate;
    fitness[i] = residual_norm(c, candidate, target);
    ++result.evaluations;
  }

  int best = 0;
  fitness.minCoeff(&best);

  for (int gen = 0; gen < cfg.max_generations; ++gen) {
    result.generations = gen + 1;
    for (int i = 0; i < pop_size; ++i) {
      int r1 = pick(rng), r2 = pick(rng), r3 = pick(rng);
      while (r1 == i) r1 = pick(rng);
      while (r2 == i || r2 == r1) r2 = pick(rng);
      while (r3 == i || r3 == r1 || r3 == r2) r3 = pick(rng);
      const int jrand = pick_dim(rng);
      ParameterVector trial = pop[static_cast<std::size_t>(i)];
      for (int d = 0; d < n; ++d) {
        if (d == jrand || unit(rng) < cfg.crossover_rate) {
          double v = pop[static_cast<std::size_t>(r1)][d] +
                     cfg.differential_weight * (pop[static_cast<std::size_t>(r2)][d] -
                                                pop[static_cast<std::size_t>(r3)][d]);
          trial[d] = std::clamp(v, cfg.lower_bound, cfg.upper_bound);
        }
      }
      const double trial_fitness = residual_norm(c, trial, target);
      ++result.evaluations;
      if (trial_fitness <= fitness[i]) {
        pop[static_cast<std::size_t>(i)] = std::move(trial);
        fitness[i] = trial_fitness;
        if (trial_fitness < fitness[best]) best = i;
      }
    }
    if (fitness[best] <= 0.5 * cfg.target_epsilon) break;
  }

  result.theta0 = pop[static_cast<std::size_t>(best)];
  result.epsilon = fitness[best];
  lm_polish(c, target, result.theta0, result.epsilon, cfg.polish_iterations,
            result.evaluations);
  result.converged = result.epsilon <= cfg.target_epsilon;
  return result;
}

DepthSearchResult ansatz_depth_search(const TargetState& target, double eps_max,
                                      int n_cells_start, int n_cells_max, int n_qubits,
                                      const OptimizerConfig& cfg) {
  if (!(eps_max > 0.0)) throw std::invalid_argument("eps_max must be positive");
  if (n_cells_max < 1) throw std::invalid_argument("n_cells_max must be >= 1");
  DepthSearchResult out;
  out.converged = false;
  int n_cells = n_cells_start;
  std::vector<ParameterVector> warm;
  bool have_attempt = false;
  while (n_cells < n_cells_max) {
    const AnsatzCircuit c = build_ansatz(n_qubits, n_cells);
    OptimizerConfig local = cfg;
    local.target_epsilon = eps_max;
    const FitResult fit = fit_theta0(c, target, local, warm);
    if (!have_attempt || fit.epsilon < out.fit.epsilon) {
      out.circuit = c;
      out.fit = fit;
      have_attempt = true;
    }
    if (fit.epsilon > eps_max) {
      ++n_cells;
      // the escalated circuit contains this one: appended cell at zero is
      // the identity
      ParameterVector padded = ParameterVector::Zero(c.n_params + 2 * n_qubits - 1);
      padded.head(c.n_params) = fit.theta0;
      warm = {padded};
    } else {
      out.converged = true;
      return out;
    }
  }
  if (!have_attempt) {
    out.circuit = build_ansatz(n_qubits, std::max(n_cells_start, 1));
    out.fit.n_cells = out.circuit.n_cells;
    out.fit.epsilon = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace varqite
