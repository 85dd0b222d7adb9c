#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "varqite/calibration.hpp"
#include "varqite/mclachlan.hpp"
#include "varqite/oracle.hpp"

namespace varqite {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitDiverged = 3;

/// Everything a run needs. Defaults reproduce the headline experiments:
/// sigma = 0.2, S0 = K = 100, T = 1, r = 0, European S in [50, 150], Asian
/// y in [-0.5, 0.4], 4 qubits, 3 cells, 500 steps, cutoff 1e-8.
struct RunConfig {
  std::string contract = "european";  // european | asian
  double s0 = 100.0;
  double strike = 100.0;
  double sigma = 0.2;
  double rate = 0.0;
  double maturity = 1.0;
  int n_qubits = 4;
  int n_cells = 3;
  int n_steps = 500;
  double cutoff_ratio = 1e-8;
  std::string mode = "exact";  // exact | shots
  long shots = 100000;
  std::uint64_t seed = 0;
  double eps_max = 0.05;
  bool depth_search = false;
  int max_cells = 4;
  std::optional<double> grid_min;  // S bound (european) or y bound (asian)
  std::optional<double> grid_max;
  std::string output_dir;
  int de_generations = 2000;
  int de_population_factor = 15;
  int polish_iterations = 100;

  TransformConstants constants() const { return {sigma, rate, maturity}; }
  SpaceGrid space_grid() const;
  bool is_european() const { return contract == "european"; }
  std::string resolved_output_dir() const;
};

/// Key=value header block embedded at the top of every output file so runs
/// are self-describing.
std::string config_header(const RunConfig& cfg);

std::string theta_path(const RunConfig& cfg);
std::string trace_path(const RunConfig& cfg);
std::string prices_path(const RunConfig& cfg);
std::string summary_path(const RunConfig& cfg);

void write_theta_file(const std::string& path, const RunConfig& cfg, const FitResult& fit);
ParameterVector load_theta_file(const std::string& path);

/// Calibrate theta0 (depth search or fixed cell count) and write it.
/// Returns kExitOk when the residual meets eps_max, kExitNotConverged
/// otherwise.
int run_fit(const RunConfig& cfg, std::ostream& log);

/// Evolve from a theta file (runs the fit first when `theta_file` is
/// empty), with the classical reference trajectory attached; writes the
/// trace, grid prices, and a summary. Returns kExitDiverged on an aborted
/// march, with the partial trace saved.
int run_price(const RunConfig& cfg, const std::string& theta_file, std::ostream& log);

/// Load theta, prepare the state, and report its residual against the
/// payoff target ("initial") or the reference terminal state ("terminal").
/// Diagnostic only; always exits 0 on well-formed input.
int run_replay(const RunConfig& cfg, const std::string& theta_file, const std::string& at,
               std::ostream& log);

}  // namespace varqite
