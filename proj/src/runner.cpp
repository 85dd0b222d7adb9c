#include "varqite/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace varqite {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

EvolutionConfig evolution_config(const RunConfig& cfg) {
  EvolutionConfig e;
  e.tau_final = cfg.constants().tau_final();
  e.n_steps = cfg.n_steps;
  e.cutoff_ratio = cfg.cutoff_ratio;
  e.mode = cfg.mode == "shots" ? MeasurementMode::Shots : MeasurementMode::Exact;
  e.shots = cfg.shots;
  e.rng_seed = cfg.seed;
  return e;
}

OptimizerConfig optimizer_config(const RunConfig& cfg) {
  OptimizerConfig o;
  o.seed = cfg.seed;
  o.max_generations = cfg.de_generations;
  o.population_factor = cfg.de_population_factor;
  o.polish_iterations = cfg.polish_iterations;
  o.target_epsilon = cfg.eps_max;
  return o;
}

TargetState payoff_target(const RunConfig& cfg) {
  return cfg.is_european()
             ? payoff_state_european(cfg.space_grid(), cfg.strike, cfg.constants())
             : payoff_state_asian(cfg.space_grid());
}

HamiltonianSpec problem_hamiltonian(const RunConfig& cfg) {
  return cfg.is_european() ? european_hamiltonian(cfg.space_grid(), cfg.constants())
                           : asian_hamiltonian(cfg.space_grid(), 0.0, cfg.constants());
}

std::vector<double> tau_grid(const RunConfig& cfg) {
  const double dtau = cfg.constants().tau_final() / cfg.n_steps;
  std::vector<double> taus(static_cast<std::size_t>(cfg.n_steps) + 1);
  for (int k = 0; k <= cfg.n_steps; ++k) taus[static_cast<std::size_t>(k)] = k * dtau;
  return taus;
}

ReferenceTrajectory reference_trajectory(const RunConfig& cfg, const TargetState& target) {
  const HamiltonianSpec h = problem_hamiltonian(cfg);
  const auto h_of_tau = [&h](double tau) { return h.at(tau); };
  return exact_imaginary_evolution_td(h_of_tau, target.state, tau_grid(cfg),
                                      target.raw_norm);
}

void require_parent_dir(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

void write_trace_csv(const std::string& path, const RunConfig& cfg,
                     const EvolutionTrace& trace, int n_params) {
  require_parent_dir(path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << config_header(cfg);
  out << "step,tau";
  for (int i = 1; i <= n_params; ++i) out << ",theta_" << i;
  out << ",residual,oracle_distance\n";
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const StepRecord& r = trace.steps[k];
    out << k << ',' << fmt(r.tau);
    for (int i = 0; i < n_params; ++i) out << ',' << fmt(r.theta[i]);
    out << ',' << fmt(r.residual) << ',' << fmt(r.oracle_distance) << "\n";
  }
}

void write_prices_csv(const std::string& path, const RunConfig& cfg,
                      const Eigen::VectorXd& grid_values, const Eigen::VectorXd& quantum,
                      const Eigen::VectorXd& classical) {
  require_parent_dir(path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << config_header(cfg);
  out << "grid_value,quantum_price,classical_price,abs_error\n";
  for (Eigen::Index i = 0; i < grid_values.size(); ++i) {
    out << fmt(grid_values[i]) << ',' << fmt(quantum[i]) << ',' << fmt(classical[i]) << ','
        << fmt(std::abs(quantum[i] - classical[i])) << "\n";
  }
}

double interp_at(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys, double x) {
  if (x <= xs[0]) return ys[0];
  if (x >= xs[xs.size() - 1]) return ys[ys.size() - 1];
  Eigen::Index lo = 0;
  while (lo + 1 < xs.size() && xs[lo + 1] < x) ++lo;
  const double w = (x - xs[lo]) / (xs[lo + 1] - xs[lo]);
  return (1.0 - w) * ys[lo] + w * ys[lo + 1];
}

}  // namespace

SpaceGrid RunConfig::space_grid() const {
  const int points = 1 << n_qubits;
  if (is_european()) {
    const double s_min = grid_min.value_or(50.0);
    const double s_max = grid_max.value_or(150.0);
    return SpaceGrid::linear(std::log(s_min), std::log(s_max), points);
  }
  return SpaceGrid::linear(grid_min.value_or(-0.5), grid_max.value_or(0.4), points);
}

std::string RunConfig::resolved_output_dir() const {
  if (!output_dir.empty()) return output_dir;
  if (const char* env = std::getenv("VARQITE_OUTPUT_DIR")) return env;
  return ".";
}

std::string config_header(const RunConfig& cfg) {
  std::ostringstream out;
  out << "# varqite run\n";
  out << "# contract=" << cfg.contract << "\n";
  out << "# S0=" << fmt(cfg.s0) << " K=" << fmt(cfg.strike) << " sigma=" << fmt(cfg.sigma)
      << " r=" << fmt(cfg.rate) << " T=" << fmt(cfg.maturity) << "\n";
  const SpaceGrid g = cfg.space_grid();
  out << "# grid_min=" << fmt(g.v_min) << " grid_max=" << fmt(g.v_max)
      << " points=" << g.n_points << "\n";
  out << "# n_qubits=" << cfg.n_qubits << " n_cells=" << cfg.n_cells
      << " n_steps=" << cfg.n_steps << " cutoff_ratio=" << fmt(cfg.cutoff_ratio) << "\n";
  out << "# mode=" << cfg.mode << " shots=" << cfg.shots << " seed=" << cfg.seed << "\n";
  return out.str();
}

std::string theta_path(const RunConfig& cfg) {
  return cfg.resolved_output_dir() + "/fit_" + cfg.contract + ".txt";
}
std::string trace_path(const RunConfig& cfg) {
  return cfg.resolved_output_dir() + "/trace_" + cfg.contract + ".csv";
}
std::string prices_path(const RunConfig& cfg) {
  return cfg.resolved_output_dir() + "/prices_" + cfg.contract + ".csv";
}
std::string summary_path(const RunConfig& cfg) {
  return cfg.resolved_output_dir() + "/summary_" + cfg.contract + ".csv";
}

void write_theta_file(const std::string& path, const RunConfig& cfg, const FitResult& fit) {
  require_parent_dir(path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << config_header(cfg);
  out << "# epsilon=" << fmt(fit.epsilon) << "\n";
  out << "# n_cells=" << fit.n_cells << " converged=" << (fit.converged ? 1 : 0)
      << " generations=" << fit.generations << " evaluations=" << fit.evaluations << "\n";
  for (Eigen::Index i = 0; i < fit.theta0.size(); ++i) out << fmt(fit.theta0[i]) << "\n";
}

ParameterVector load_theta_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open theta file " + path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    values.push_back(std::stod(line));
  }
  ParameterVector theta(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    theta[static_cast<Eigen::Index>(i)] = values[i];
  }
  return theta;
}

int run_fit(const RunConfig& cfg, std::ostream& log) {
  const TargetState target = payoff_target(cfg);
  FitResult fit;
  if (cfg.depth_search) {
    const DepthSearchResult search = ansatz_depth_search(
        target, cfg.eps_max, 1, cfg.max_cells, cfg.n_qubits, optimizer_config(cfg));
    fit = search.fit;
    if (!search.converged) {
      log << "fit: not converged within " << cfg.max_cells
          << " cells; a different ansatz is needed (best epsilon=" << fit.epsilon << ")\n";
      write_theta_file(theta_path(cfg), cfg, fit);
      return kExitNotConverged;
    }
  } else {
    const AnsatzCircuit c = build_ansatz(cfg.n_qubits, cfg.n_cells);
    fit = fit_theta0(c, target, optimizer_config(cfg));
  }
  write_theta_file(theta_path(cfg), cfg, fit);
  log << "fit: contract=" << cfg.contract << " cells=" << fit.n_cells
      << " epsilon=" << fit.epsilon << " -> " << theta_path(cfg) << "\n";
  return fit.converged ? kExitOk : kExitNotConverged;
}

int run_price(const RunConfig& cfg, const std::string& theta_file, std::ostream& log) {
  std::string theta_source = theta_file;
  if (theta_source.empty()) {
    const int fit_code = run_fit(cfg, log);
    if (fit_code != kExitOk) return fit_code;
    theta_source = theta_path(cfg);
  }
  const ParameterVector theta0 = load_theta_file(theta_source);
  const AnsatzCircuit c = build_ansatz(cfg.n_qubits, cfg.n_cells);
  if (theta0.size() != c.n_params) {
    log << "error: theta file holds " << theta0.size() << " values, circuit expects "
        << c.n_params << "\n";
    return kExitUsage;
  }

  const TargetState target = payoff_target(cfg);
  const ReferenceTrajectory ref = reference_trajectory(cfg, target);
  const HamiltonianSpec h = problem_hamiltonian(cfg);
  const EvolutionTrace trace = evolve(c, theta0, h, evolution_config(cfg), &ref.states);
  write_trace_csv(trace_path(cfg), cfg, trace, c.n_params);
  if (trace.diverged) {
    log << "error: evolution diverged at step " << trace.diverged_step
        << "; partial trace saved to " << trace_path(cfg) << "\n";
    return kExitDiverged;
  }

  const double tau_end = cfg.constants().tau_final();
  const StateVector phi_end = prepare_state(c, trace.steps.back().theta);
  const StateVector& psi_end = ref.states.back();
  const SpaceGrid grid = cfg.space_grid();

  std::ofstream summary(summary_path(cfg));
  if (!summary) throw std::runtime_error("cannot open " + summary_path(cfg));
  summary << config_header(cfg);
  summary << "quantity,value\n";
  summary << "fit_epsilon_recomputed," << fmt((prepare_state(c, theta0).amps - target.state.amps).norm()) << "\n";
  summary << "terminal_state_distance," << fmt(trace.steps.back().oracle_distance) << "\n";

  if (cfg.is_european()) {
    const Eigen::VectorXd vq =
        rescale_to_price_european(phi_end, tau_end, grid, cfg.constants(), cfg.strike);
    const Eigen::VectorXd vc =
        rescale_to_price_european(psi_end, tau_end, grid, cfg.constants(), cfg.strike);
    const Eigen::VectorXd spots = grid.values.array().exp();
    write_prices_csv(prices_path(cfg), cfg, spots, vq, vc);
    const double quantum_atm = interp_at(spots, vq, cfg.s0);
    const double classical_atm = interp_at(spots, vc, cfg.s0);
    const double closed_form =
        black_scholes_call(cfg.s0, cfg.strike, cfg.sigma, cfg.rate, cfg.maturity);
    summary << "quantum_price," << fmt(quantum_atm) << "\n";
    summary << "classical_price," << fmt(classical_atm) << "\n";
    summary << "closed_form_price," << fmt(closed_form) << "\n";
    summary << "abs_error_vs_classical," << fmt(std::abs(quantum_atm - classical_atm)) << "\n";
    summary << "rel_error_vs_classical,"
            << fmt(std::abs(quantum_atm - classical_atm) / std::abs(classical_atm)) << "\n";
    log << "price: quantum=" << quantum_atm << " classical=" << classical_atm
        << " closed_form=" << closed_form << "\n";
  } else {
    const AsianRescale rq = rescale_to_price_asian(phi_end, tau_end, grid, cfg.s0,
                                                   cfg.strike, cfg.rate, cfg.maturity);
    const AsianRescale rc = rescale_to_price_asian(psi_end, tau_end, grid, cfg.s0,
                                                   cfg.strike, cfg.rate, cfg.maturity);
    write_prices_csv(prices_path(cfg), cfg, grid.values, cfg.s0 * rq.q_values,
                     cfg.s0 * rc.q_values);
    summary << "y0," << fmt(rq.y0) << "\n";
    summary << "quantum_price," << fmt(rq.inception_price) << "\n";
    summary << "classical_price," << fmt(rc.inception_price) << "\n";
    summary << "abs_error_vs_classical,"
            << fmt(std::abs(rq.inception_price - rc.inception_price)) << "\n";
    summary << "rel_error_vs_classical,"
            << fmt(std::abs(rq.inception_price - rc.inception_price) /
                   std::max(std::abs(rc.inception_price), 1e-12)) << "\n";
    log << "price: quantum=" << rq.inception_price << " classical=" << rc.inception_price
        << " (Y0=" << rq.y0 << ")\n";
  }
  log << "trace -> " << trace_path(cfg) << "\nprices -> " << prices_path(cfg)
      << "\nsummary -> " << summary_path(cfg) << "\n";
  return kExitOk;
}

int run_replay(const RunConfig& cfg, const std::string& theta_file, const std::string& at,
               std::ostream& log) {
  const ParameterVector theta = load_theta_file(theta_file);
  const AnsatzCircuit c = build_ansatz(cfg.n_qubits, cfg.n_cells);
  if (theta.size() != c.n_params) {
    log << "error: theta file holds " << theta.size() << " values, circuit expects "
        << c.n_params << "\n";
    return kExitUsage;
  }
  const StateVector phi = prepare_state(c, theta);
  const TargetState target = payoff_target(cfg);
  double residual = 0.0;
  if (at == "terminal") {
    const ReferenceTrajectory ref = reference_trajectory(cfg, target);
    residual = (phi.amps - ref.states.back().amps).norm();
    log << "replay: contract=" << cfg.contract << " reference=terminal residual="
        << residual << "\n";
  } else {
    residual = (phi.amps - target.state.amps).norm();
    log << "replay: contract=" << cfg.contract << " reference=payoff residual=" << residual
        << "\n";
  }
  return kExitOk;
}

}  // namespace varqite
