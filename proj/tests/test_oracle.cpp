#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "varqite/calibration.hpp"
#include "varqite/oracle.hpp"

using namespace varqite;

namespace {
const TransformConstants kDefaults{0.2, 0.0, 1.0};
SpaceGrid default_x_grid() { return SpaceGrid::linear(std::log(50.0), std::log(150.0), 16); }
SpaceGrid default_y_grid() { return SpaceGrid::linear(-0.5, 0.4, 16); }

// Quadrature oracle for the standard normal CDF (Simpson on the density),
// independent of the erfc-based implementation.
double normal_cdf_quadrature(double x) {
  const double lo = -12.0;
  const int n = 4000;  // even
  const double h = (x - lo) / n;
  auto density = [](double t) {
    return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
  };
  double sum = density(lo) + density(x);
  for (int i = 1; i < n; ++i) sum += density(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}
}  // namespace

TEST_CASE("matrix exponential on both branches") {
  // symmetric
  Eigen::MatrixXd sym(2, 2);
  sym << 0.0, 1.0, 1.0, 0.0;
  const Eigen::MatrixXd es = matrix_exponential(sym);
  CHECK(es(0, 0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
  CHECK(es(0, 1) == doctest::Approx(std::sinh(1.0)).epsilon(1e-12));
  // non-symmetric (nilpotent): exp = I + N
  Eigen::MatrixXd nil = Eigen::MatrixXd::Zero(2, 2);
  nil(0, 1) = 3.0;
  const Eigen::MatrixXd en = matrix_exponential(nil);
  CHECK(en(0, 0) == doctest::Approx(1.0));
  CHECK(en(0, 1) == doctest::Approx(3.0));
  CHECK(en(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("exact imaginary evolution basics") {
  StateVector psi0 = zero_state(1);
  psi0.amps << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);

  const ImagEvolution at_zero =
      exact_imaginary_evolution(Eigen::MatrixXd::Identity(2, 2), psi0, 0.0);
  CHECK((at_zero.state.amps - psi0.amps).norm() <= 1e-15);

  // uniform scaling divides out under normalization
  const ImagEvolution scaled =
      exact_imaginary_evolution(Eigen::MatrixXd::Identity(2, 2), psi0, 3.7);
  CHECK((scaled.state.amps - psi0.amps).norm() <= 1e-12);

  // H = diag(1, 0), tau = ln 2: exp(H tau) psi0 ~ (2, 1) -> (2, 1)/sqrt(5)
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag(0, 0) = 1.0;
  const ImagEvolution grown = exact_imaginary_evolution(diag, psi0, std::log(2.0));
  CHECK(grown.state.amps[0].real() == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(grown.state.amps[1].real() == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("normalization constant via two independent routes") {
  // gamma = <psi0| exp(2 H tau) |psi0>^{-1/2} equals the reciprocal norm of
  // exp(H tau) psi0 whenever H is symmetric; check on the symmetric
  // interior of the pricing operator
  const SpaceGrid grid = default_x_grid();
  const HamiltonianSpec h = european_hamiltonian(grid, kDefaults);
  const Eigen::MatrixXd sym = 0.5 * (h.matrix + h.matrix.transpose());
  const TargetState payoff = payoff_state_european(grid, 100.0, kDefaults);
  for (double tau : {0.001, 0.01, 0.04}) {
    const ImagEvolution evo = exact_imaginary_evolution(sym, payoff.state, tau);
    const Eigen::MatrixXd big = matrix_exponential(2.0 * tau * sym);
    const double overlap = payoff.state.amps.real().dot(big * payoff.state.amps.real());
    const double gamma_direct = 1.0 / std::sqrt(overlap);
    CHECK(evo.gamma() == doctest::Approx(gamma_direct).epsilon(1e-12));
  }
  // the asymmetric boundary rows break the identity at O(tau^2); gamma is
  // defined as the reciprocal norm, which is what the rescaling needs
  const ImagEvolution asym = exact_imaginary_evolution(h.matrix, payoff.state, 0.04);
  const Eigen::MatrixXd big = matrix_exponential(2.0 * 0.04 * h.matrix);
  const double overlap = payoff.state.amps.real().dot(big * payoff.state.amps.real());
  CHECK(std::abs(asym.gamma() - 1.0 / std::sqrt(overlap)) > 1e-6);
  CHECK(std::abs(asym.gamma() - 1.0 / std::sqrt(overlap)) < 0.1);
}

TEST_CASE("overflow guard handles huge tau * ||H||") {
  StateVector psi0 = zero_state(1);
  psi0.amps << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag(0, 0) = 1.0;
  // exp(1000) overflows a double; incremental renormalization must not
  const ImagEvolution evo = exact_imaginary_evolution(diag, psi0, 1000.0);
  CHECK(evo.state.amps[0].real() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(evo.log_norm == doctest::Approx(1000.0 - 0.5 * std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("time-dependent propagation reduces to the constant case") {
  const SpaceGrid grid = default_x_grid();
  const HamiltonianSpec h = european_hamiltonian(grid, kDefaults);
  const TargetState payoff = payoff_state_european(grid, 100.0, kDefaults);
  auto h_const = [&h](double) { return h.matrix; };

  std::vector<double> taus;
  for (int k = 0; k <= 100; ++k) taus.push_back(k * 0.0004);
  const ReferenceTrajectory traj =
      exact_imaginary_evolution_td(h_const, payoff.state, taus);
  REQUIRE(traj.states.size() == 101);
  for (std::size_t k : {std::size_t{20}, std::size_t{60}, std::size_t{100}}) {
    const ImagEvolution direct =
        exact_imaginary_evolution(h.matrix, payoff.state, taus[k]);
    CHECK((traj.states[k].amps - direct.state.amps).norm() <= 1e-8);
    CHECK(std::abs(traj.states[k].norm() - 1.0) <= 1e-12);
  }

  // single step equals the one-shot propagator
  std::vector<double> two = {0.0, 0.01};
  const ReferenceTrajectory one_step =
      exact_imaginary_evolution_td(h_const, payoff.state, two);
  const ImagEvolution direct = exact_imaginary_evolution(h.matrix, payoff.state, 0.01);
  CHECK((one_step.states[1].amps - direct.state.amps).norm() <= 1e-12);
}

TEST_CASE("normalized states stay parallel to the unnormalized track") {
  const SpaceGrid grid = default_y_grid();
  const TransformConstants consts = kDefaults;
  const HamiltonianSpec h = asian_hamiltonian(grid, 0.0, consts);
  const TargetState payoff = payoff_state_asian(grid);
  std::vector<double> taus;
  for (int k = 0; k <= 50; ++k) taus.push_back(k * consts.tau_final() / 50);
  const ReferenceTrajectory traj =
      exact_imaginary_evolution_td(h.evaluator, payoff.state, taus, payoff.raw_norm);
  REQUIRE(traj.unnormalized.size() == 51);
  for (std::size_t k = 0; k < traj.states.size(); k += 10) {
    const Eigen::VectorXd dir = traj.unnormalized[k] / traj.unnormalized[k].norm();
    CHECK((dir - traj.states[k].amps.real()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("frozen-expm and Euler unnormalized paths converge together") {
  const SpaceGrid grid = default_x_grid();
  const HamiltonianSpec h = european_hamiltonian(grid, kDefaults);
  const TargetState payoff = payoff_state_european(grid, 100.0, kDefaults);
  auto h_const = [&h](double) { return h.matrix; };

  auto gap_at = [&](int n_steps) {
    std::vector<double> taus;
    for (int k = 0; k <= n_steps; ++k) taus.push_back(k * 0.04 / n_steps);
    const ReferenceTrajectory expm_path =
        exact_imaginary_evolution_td(h_const, payoff.state, taus, payoff.raw_norm);
    const std::vector<Eigen::VectorXd> euler_path = euler_unnormalized_path(
        h_const, payoff.raw_norm * payoff.state.amps.real(), taus);
    return (expm_path.unnormalized.back() - euler_path.back()).norm() /
           expm_path.unnormalized.back().norm();
  };
  const double coarse = gap_at(500);
  const double fine = gap_at(1000);
  CHECK(fine < coarse);
  CHECK(fine == doctest::Approx(0.5 * coarse).epsilon(0.25));  // first order
}

TEST_CASE("black-scholes closed form") {
  const double atm = black_scholes_call(100.0, 100.0, 0.2, 0.0, 1.0);
  CHECK(atm == doctest::Approx(7.9656).epsilon(1e-4));

  // independent quadrature CDF route
  const double d1 = 0.1, d2 = -0.1;
  const double via_quadrature =
      100.0 * (normal_cdf_quadrature(d1) - normal_cdf_quadrature(d2));
  CHECK(atm == doctest::Approx(via_quadrature).epsilon(1e-9));

  // intrinsic-value limit
  CHECK(black_scholes_call(110.0, 100.0, 0.2, 0.0, 1e-10) == doctest::Approx(10.0));

  // ATM symmetry: price = S (2 N(sigma sqrt(T)/2) - 1)
  const double n_half = 0.5 * std::erfc(-0.1 / std::sqrt(2.0));
  CHECK(atm == doctest::Approx(100.0 * (2.0 * n_half - 1.0)).epsilon(1e-12));

  CHECK_THROWS_AS(black_scholes_call(-1.0, 100.0, 0.2, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(black_scholes_call(100.0, 100.0, 0.2, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("european rescaling inverts the payoff encoding at tau = 0") {
  const SpaceGrid grid = default_x_grid();
  const TargetState payoff = payoff_state_european(grid, 100.0, kDefaults);
  const Eigen::VectorXd prices =
      rescale_to_price_european(payoff.state, 0.0, grid, kDefaults, 100.0);
  for (int i = 0; i < 16; ++i) {
    const double expected = std::max(std::exp(grid.values[i]) - 100.0, 0.0);
    CHECK(prices[i] == doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK(prices[15] == doctest::Approx(50.0).epsilon(1e-12));  // anchor: S_max - K
}

TEST_CASE("european rescaling anchors the boundary at any tau") {
  const SpaceGrid grid = default_x_grid();
  const HamiltonianSpec h = european_hamiltonian(grid, kDefaults);
  const TargetState payoff = payoff_state_european(grid, 100.0, kDefaults);
  const ImagEvolution evo = exact_imaginary_evolution(h.matrix, payoff.state, 0.04);
  const Eigen::VectorXd prices =
      rescale_to_price_european(evo.state, 0.04, grid, kDefaults, 100.0);
  CHECK(prices[15] == doctest::Approx(50.0).epsilon(1e-12));

  StateVector degenerate = basis_state(4, 0);
  CHECK_THROWS_AS(rescale_to_price_european(degenerate, 0.0, grid, kDefaults, 100.0),
                  std::runtime_error);
}

TEST_CASE("asian rescaling inverts the payoff and anchors the boundary") {
  const SpaceGrid grid = default_y_grid();
  const TargetState payoff = payoff_state_asian(grid);
  const AsianRescale at_zero =
      rescale_to_price_asian(payoff.state, 0.0, grid, 100.0, 100.0, 0.0, 1.0);
  for (int i = 0; i < 16; ++i) {
    CHECK(at_zero.q_values[i] ==
          doctest::Approx(std::max(grid.values[i], 0.0)).epsilon(1e-10));
  }
  CHECK(at_zero.q_values[15] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(at_zero.y0 == doctest::Approx(0.0));  // r=0, S0=K -> Y0 = 0

  const HamiltonianSpec h = asian_hamiltonian(grid, 0.0, kDefaults);
  std::vector<double> taus;
  for (int k = 0; k <= 100; ++k) taus.push_back(k * 0.0004);
  const ReferenceTrajectory traj =
      exact_imaginary_evolution_td(h.evaluator, payoff.state, taus);
  const AsianRescale at_end =
      rescale_to_price_asian(traj.states.back(), 0.04, grid, 100.0, 100.0, 0.0, 1.0);
  CHECK(at_end.q_values[15] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(at_end.inception_price > 0.0);

  // inception point outside the grid
  CHECK_THROWS_AS(rescale_to_price_asian(payoff.state, 0.0, grid, 100.0, 30.0, 0.0, 1.0),
                  std::runtime_error);
}
