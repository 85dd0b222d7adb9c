#pragma once

#include <functional>
#include <vector>

#include "varqite/hamiltonian.hpp"
#include "varqite/statevector.hpp"

namespace varqite {

/// exp(m) via symmetric eigendecomposition when m is symmetric, else
/// scaling-and-squaring.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m);

struct ImagEvolution {
  StateVector state;     // unit norm
  double log_norm = 0.0; // log || exp(H tau) psi0 ||

  double gamma() const { return std::exp(-log_norm); }
};

/// Normalized imaginary-time propagation exp(H tau) psi0 / ||.||. Large
/// tau*||H|| is handled by evaluating in increments and renormalizing, with
/// the norm factor accumulated in log scale.
ImagEvolution exact_imaginary_evolution(const Eigen::MatrixXd& h, const StateVector& psi0,
                                        double tau);

struct ReferenceTrajectory {
  std::vector<double> taus;
  std::vector<StateVector> states;          // unit norm
  std::vector<double> log_norms;            // cumulative log growth vs psi0
  std::vector<Eigen::VectorXd> unnormalized; // u(tau, .) when u0_norm given
};

/// Product of frozen-Hamiltonian propagators expm(H(tau_k) dtau), matching
/// the left-endpoint discretization of the variational march so trajectory
/// comparisons isolate ansatz error. `u0_norm` scales the unnormalized
/// solution track (pass the raw payoff norm to recover u / Q).
ReferenceTrajectory exact_imaginary_evolution_td(
    const std::function<Eigen::MatrixXd(double)>& h_of_tau, const StateVector& psi0,
    const std::vector<double>& tau_grid, double u0_norm = 1.0);

/// Unnormalized explicit-Euler track u_{k+1} = (I + dtau H(tau_k)) u_k.
std::vector<Eigen::VectorXd> euler_unnormalized_path(
    const std::function<Eigen::MatrixXd(double)>& h_of_tau, const Eigen::VectorXd& u0,
    const std::vector<double>& tau_grid);

double black_scholes_call(double spot, double strike, double sigma, double rate,
                          double maturity);

/// Prices on the S-grid from a unit state. Anchors the scale at the top
/// boundary where V(t, S_max) = S_max - K e^{-r(T-t)} is known, with
/// t = T - tau/sigma^2; prices are e^{a x_i} times the rescaled amplitudes.
Eigen::VectorXd rescale_to_price_european(const StateVector& phi, double tau,
                                          const SpaceGrid& x_grid,
                                          const TransformConstants& consts, double strike);

struct AsianRescale {
  Eigen::VectorXd q_values;       // Q on the y-grid
  double y0 = 0.0;                // (q(0) S0 - K e^{-rT}) / S0
  double inception_price = 0.0;   // S0 * Q(tau, y0), the option price when tau = sigma^2 T
};

/// Anchors Q at the frozen top boundary Q(tau, y_max) = max(y_max, 0) and
/// interpolates linearly at y0.
AsianRescale rescale_to_price_asian(const StateVector& phi, double tau,
                                    const SpaceGrid& y_grid, double s0, double strike,
                                    double rate, double maturity);

}  // namespace varqite
