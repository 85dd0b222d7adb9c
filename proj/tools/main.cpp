#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "varqite/runner.hpp"

namespace {

void add_common_options(CLI::App* cmd, varqite::RunConfig& cfg) {
  cmd->add_option("--contract", cfg.contract, "european or asian")
      ->check(CLI::IsMember({"european", "asian"}));
  cmd->add_option("--s0", cfg.s0, "spot at inception");
  cmd->add_option("--strike,-K", cfg.strike, "strike");
  cmd->add_option("--sigma", cfg.sigma, "volatility (1/sqrt(year))");
  cmd->add_option("--rate,-r", cfg.rate, "risk-free rate (1/year)");
  cmd->add_option("--maturity,-T", cfg.maturity, "maturity (years)");
  cmd->add_option("--qubits", cfg.n_qubits, "register width")->check(CLI::Range(2, 12));
  cmd->add_option("--cells", cfg.n_cells, "ansatz unit cells");
  cmd->add_option("--steps", cfg.n_steps, "Euler steps over [0, sigma^2 T]");
  cmd->add_option("--cutoff", cfg.cutoff_ratio, "singular-value cutoff ratio");
  cmd->add_option("--mode", cfg.mode, "exact or shots")
      ->check(CLI::IsMember({"exact", "shots"}));
  cmd->add_option("--shots", cfg.shots, "samples per measured entry in shots mode");
  cmd->add_option("--seed", cfg.seed, "rng seed");
  cmd->add_option("--grid-min", cfg.grid_min,
                  "lower grid bound (S for european, y for asian)");
  cmd->add_option("--grid-max", cfg.grid_max, "upper grid bound");
  cmd->add_option("--output-dir,-o", cfg.output_dir,
                  "output directory (default $VARQITE_OUTPUT_DIR or .)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational imaginary-time evolution pricer for European and "
               "arithmetic Asian calls"};
  app.require_subcommand(1);

  varqite::RunConfig cfg;
  std::string theta_file;
  std::string replay_at = "initial";

  CLI::App* fit = app.add_subcommand("fit", "calibrate theta0 to the payoff state");
  add_common_options(fit, cfg);
  fit->add_option("--eps-max", cfg.eps_max, "acceptable fit residual");
  fit->add_flag("--depth-search", cfg.depth_search,
                "escalate the cell count until eps-max is met");
  fit->add_option("--max-cells", cfg.max_cells, "cell budget for --depth-search");
  fit->add_option("--de-generations", cfg.de_generations, "differential evolution budget");
  fit->add_option("--de-population-factor", cfg.de_population_factor,
                  "population = factor * n_params");
  fit->add_option("--polish-iterations", cfg.polish_iterations,
                  "Levenberg-Marquardt polish iterations");

  CLI::App* price = app.add_subcommand("price", "evolve and rescale to prices");
  add_common_options(price, cfg);
  price->add_option("--theta", theta_file, "theta0 file (fits first when omitted)");
  price->add_option("--eps-max", cfg.eps_max, "acceptable fit residual (implicit fit)");
  price->add_option("--de-generations", cfg.de_generations,
                    "differential evolution budget (implicit fit)");
  price->add_option("--de-population-factor", cfg.de_population_factor,
                    "population = factor * n_params (implicit fit)");

  CLI::App* replay = app.add_subcommand("replay", "report the residual of a stored theta");
  add_common_options(replay, cfg);
  replay->add_option("--theta", theta_file, "theta file to replay")->required();
  replay->add_option("--at", replay_at, "initial (payoff) or terminal (reference state)")
      ->check(CLI::IsMember({"initial", "terminal"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : varqite::kExitUsage;
  }

  try {
    if (fit->parsed()) return varqite::run_fit(cfg, std::cout);
    if (price->parsed()) return varqite::run_price(cfg, theta_file, std::cout);
    return varqite::run_replay(cfg, theta_file, replay_at, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return varqite::kExitUsage;
  }
}
