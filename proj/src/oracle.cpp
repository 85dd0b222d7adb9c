#include "varqite/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace varqite {

namespace {
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

bool nearly_symmetric(const Eigen::MatrixXd& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff() <=
         1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
}
}  // namespace

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_exponential: not square");
  if (nearly_symmetric(m)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    return es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
           es.eigenvectors().transpose();
  }
  return m.exp();
}

ImagEvolution exact_imaginary_evolution(const Eigen::MatrixXd& h, const StateVector& psi0,
                                        double tau) {
  if (h.rows() != psi0.dim()) {
    throw std::invalid_argument("Hamiltonian dimension does not match state");
  }
  if (tau < 0.0) throw std::invalid_argument("tau must be non-negative");
  // keep each increment's exp(H dt) comfortably inside double range
  const double scale = h.cwiseAbs().rowwise().sum().maxCoeff();
  const int chunks = std::max(1, static_cast<int>(std::ceil(scale * tau / 200.0)));
  const Eigen::MatrixXd step = matrix_exponential(h * (tau / chunks));
  ImagEvolution out;
  out.state = psi0;
  for (int k = 0; k < chunks; ++k) {
    out.state.amps = step * out.state.amps;
    const double nrm = out.state.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
      throw std::runtime_error("imaginary-time propagation under/overflowed");
    }
    out.log_norm += std::log(nrm);
    out.state.amps /= nrm;
  }
  return out;
}

ReferenceTrajectory exact_imaginary_evolution_td(
    const std::function<Eigen::MatrixXd(double)>& h_of_tau, const StateVector& psi0,
    const std::vector<double>& tau_grid, double u0_norm) {
  if (tau_grid.empty() || tau_grid.front() != 0.0) {
    throw std::invalid_argument("tau grid must start at 0");
  }
  for (std::size_t k = 1; k < tau_grid.size(); ++k) {
    if (!(tau_grid[k] > tau_grid[k - 1])) {
      throw std::invalid_argument("tau grid must be increasing");
    }
  }
  ReferenceTrajectory traj;
  traj.taus = tau_grid;
  traj.states.push_back(psi0);
  traj.log_norms.push_back(0.0);
  for (std::size_t k = 1; k < tau_grid.size(); ++k) {
    const double dtau = tau_grid[k] - tau_grid[k - 1];
    const Eigen::MatrixXd h = h_of_tau(tau_grid[k - 1]);
    ImagEvolution step = exact_imaginary_evolution(h, traj.states.back(), dtau);
    traj.log_norms.push_back(traj.log_norms.back() + step.log_norm);
    traj.states.push_back(std::move(step.state));
  }
  if (u0_norm > 0.0) {
    traj.unnormalized.reserve(traj.states.size());
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      traj.unnormalized.push_back(u0_norm * std::exp(traj.log_norms[k]) *
                                  traj.states[k].amps.real());
    }
  }
  return traj;
}

std::vector<Eigen::VectorXd> euler_unnormalized_path(
    const std::function<Eigen::MatrixXd(double)>& h_of_tau, const Eigen::VectorXd& u0,
    const std::vector<double>& tau_grid) {
  std::vector<Eigen::VectorXd> path;
  path.push_back(u0);
  for (std::size_t k = 1; k < tau_grid.size(); ++k) {
    const double dtau = tau_grid[k] - tau_grid[k - 1];
    path.push_back(path.back() + dtau * (h_of_tau(tau_grid[k - 1]) * path.back()));
  }
  return path;
}

double black_scholes_call(double spot, double strike, double sigma, double rate,
                          double maturity) {
  if (!(spot > 0.0) || !(strike > 0.0) || !(sigma > 0.0) || !(maturity > 0.0)) {
    throw std::invalid_argument("black_scholes_call: S, K, sigma, T must be positive");
  }
  const double vol = sigma * std::sqrt(maturity);
  const double d1 = (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * maturity) / vol;
  const double d2 = d1 - vol;
  return spot * normal_cdf(d1) - strike * std::exp(-rate * maturity) * normal_cdf(d2);
}

Eigen::VectorXd rescale_to_price_european(const StateVector& phi, double tau,
                                          const SpaceGrid& x_grid,
                                          const TransformConstants& consts, double strike) {
  if (phi.dim() != x_grid.n_points) {
    throw std::invalid_argument("state dimension does not match grid");
  }
  const double t = consts.maturity - tau / (consts.sigma * consts.sigma);
  const double s_max = std::exp(x_grid.v_max);
  const double boundary_price = s_max - strike * std::exp(-consts.rate * (consts.maturity - t));
  const double u_boundary = std::exp(-consts.a() * x_grid.v_max) * boundary_price;
  const double phi_last = phi.amps[phi.dim() - 1].real();
  if (std::abs(phi_last) < 1e-12) {
    throw std::runtime_error("boundary amplitude vanishes; cannot anchor the price scale");
  }
  const double scale = u_boundary / phi_last;
  Eigen::VectorXd prices(x_grid.n_points);
  for (int i = 0; i < x_grid.n_points; ++i) {
    prices[i] = std::exp(consts.a() * x_grid.values[i]) * scale * phi.amps[i].real();
  }
  return prices;
}

AsianRescale rescale_to_price_asian(const StateVector& phi, double tau,
                                    const SpaceGrid& y_grid, double s0, double strike,
                                    double rate, double maturity) {
  (void)tau;  // the null boundary rows freeze Q(tau, y_max) at its payoff value
  if (phi.dim() != y_grid.n_points) {
    throw std::invalid_argument("state dimension does not match grid");
  }
  const double q_boundary = std::max(y_grid.v_max, 0.0);
  const double phi_last = phi.amps[phi.dim() - 1].real();
  if (std::abs(phi_last) < 1e-12) {
    throw std::runtime_error("boundary amplitude vanishes; cannot anchor the price scale");
  }
  AsianRescale out;
  const double scale = q_boundary / phi_last;
  out.q_values = scale * phi.amps.real();
  out.y0 = (q_of_t(0.0, rate, maturity) * s0 - strike * std::exp(-rate * maturity)) / s0;
  if (out.y0 < y_grid.v_min || out.y0 > y_grid.v_max) {
    throw std::runtime_error("inception point lies outside the y grid");
  }
  const double pos = (out.y0 - y_grid.v_min) / y_grid.delta;
  const int lo = std::min(static_cast<int>(pos), y_grid.n_points - 2);
  const double w = pos - lo;
  out.inception_price = s0 * ((1.0 - w) * out.q_values[lo] + w * out.q_values[lo + 1]);
  return out;
}

}  // namespace varqite
