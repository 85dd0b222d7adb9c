#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "varqite/statevector.hpp"

namespace varqite {

/// Equidistant grid of 2^n coordinates (log-price x for the European
/// problem, the averaged-price reduction variable y for the Asian one).
struct SpaceGrid {
  double v_min = 0.0;
  double v_max = 0.0;
  int n_points = 0;
  double delta = 0.0;
  Eigen::VectorXd values;

  static SpaceGrid linear(double v_min, double v_max, int n_points);
};

/// Change-of-variable constants of the pricing-PDE-to-heat-equation map.
/// b is implemented exactly as the source reduction states it; all r=0
/// experiments only see it on the boundary rows.
struct TransformConstants {
  double sigma = 0.2;
  double rate = 0.0;
  double maturity = 1.0;

  double a() const { return 0.5 - rate / (sigma * sigma); }
  double b() const {
    const double s2 = sigma * sigma;
    return (0.5 - 4.0 * rate / (2.0 * s2) - s2 - 2.0 * rate) / (4.0 * s2);
  }
  double tau_final() const { return sigma * sigma * maturity; }
};

struct HamiltonianSpec {
  Eigen::MatrixXd matrix;
  bool time_dependent = false;
  std::function<Eigen::MatrixXd(double)> evaluator;  // tau -> matrix

  Eigen::MatrixXd at(double tau) const {
    return time_dependent ? evaluator(tau) : matrix;
  }
};

/// q(t) = (1 - e^{-r(T-t)}) / (rT) for r != 0, 1 - t/T for r = 0.
/// t must lie in [0, T].
double q_of_t(double t, double rate, double maturity);

/// Inception-time map between the reduction variable and spot, y = 1 - K/S.
double spot_of_y(double y, double strike);

/// Second-order finite-difference discretization of (1/2) d^2/dx^2 with
/// single -b entries on the boundary rows.
HamiltonianSpec european_hamiltonian(const SpaceGrid& grid, const TransformConstants& consts);

/// Time-dependent coefficient (q(tau) - y)^2 / 2 on the interior, null
/// boundary rows. q is evaluated at calendar time t = T - tau/sigma^2.
HamiltonianSpec asian_hamiltonian(const SpaceGrid& grid, double tau,
                                  const TransformConstants& consts);

/// Sum over {I,X,Y,Z}^n strings; coefficients are Tr(P M) / 2^n. Strings
/// with an odd number of Y factors carry imaginary coefficients for real
/// non-symmetric M, so both parts are kept and reconstruction is exact.
struct PauliTerm {
  std::string ops;  // length n, ops[0] acts on qubit 1 (MSB)
  std::complex<double> coeff;
};
struct PauliDecomposition {
  int n_qubits = 0;
  std::vector<PauliTerm> terms;
};

PauliDecomposition pauli_decompose(const Eigen::MatrixXd& m, bool symmetrize = false,
                                   double drop_tol = 1e-12);
Eigen::MatrixXcd pauli_reconstruct(const PauliDecomposition& d);

/// P|s> for a single Pauli string via its basis-index action.
StateVector apply_pauli_string(const std::string& ops, const StateVector& s);

std::string export_matrix_csv(const Eigen::MatrixXd& m);
std::string export_pauli_terms(const PauliDecomposition& d);

}  // namespace varqite
