#include <fstream>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "metrocost/cli.hpp"

using namespace metrocost;

namespace {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConvergenceError*>(&e)) return 3;
  if (dynamic_cast<const NumericalError*>(&e)) return 3;
  if (dynamic_cast<const ResourceLimitError*>(&e)) return 4;
  if (dynamic_cast<const UnsupportedConfiguration*>(&e)) return 5;
  return 2;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw InvalidArgument("failed writing output file '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiparameter metrology cost calculator"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML config file (flags override it)");
  app.allow_config_extras(CLI::config_extras_mode::error);

  cli::GlobalConfig global;
  std::string format = "json";
  app.add_option("--output,-o", global.output, "Write results to this file instead of stdout");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", global.seed, "Seed for searches and Monte-Carlo sampling");
  app.add_option("--threads", global.threads, "Threads for multi-start searches")->check(CLI::PositiveNumber);

  std::function<cli::CommandResult()> run;

  // qfi
  cli::QfiConfig qfi;
  auto* qfi_cmd = app.add_subcommand("qfi", "Quantum Fisher information of a probe state");
  qfi_cmd->add_option("--model", qfi.model, "fixed-atoms | free-atoms | pauli | appendix-b")->capture_default_str();
  qfi_cmd->add_option("--p", qfi.p, "Number of parameters (atom models)")->check(CLI::PositiveNumber)->capture_default_str();
  qfi_cmd->add_option("--n", qfi.n, "Parallel uses of the gate")->check(CLI::PositiveNumber)->capture_default_str();
  qfi_cmd->add_option("--state", qfi.state, "uniform | noon | superposed-noon | basis:<k>");
  qfi_cmd->add_option("--components", qfi.components, "Pauli components, subset of xyz")->capture_default_str();
  qfi_cmd->add_option("--alpha", qfi.alpha, "appendix-b alpha")->check(CLI::PositiveNumber)->capture_default_str();
  qfi_cmd->add_option("--beta", qfi.beta, "appendix-b beta")->check(CLI::PositiveNumber)->capture_default_str();
  qfi_cmd->add_option("--theta", qfi.theta, "Evaluation point, one value per parameter")->delimiter(',');
  qfi_cmd->callback([&] { run = [&] { return cli::cmd_qfi(qfi); }; });

  // bounds
  cli::BoundsConfig bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Strategy costs for a reference model");
  bounds_cmd
      ->add_option("--model", bounds.model,
                   "fixed-atoms | free-atoms | pauli3 | pauli2 | pauli1 | interferometer | appendix-b")
      ->capture_default_str();
  bounds_cmd->add_option("--paradigm", bounds.paradigm, "cr | mm")
      ->check(CLI::IsMember({"cr", "mm", "CR", "MM"}))
      ->capture_default_str();
  bounds_cmd->add_option("--p", bounds.p, "Number of parameters")->check(CLI::PositiveNumber)->capture_default_str();
  bounds_cmd->add_option("--n", bounds.n, "Gates per trial (CR)")->check(CLI::PositiveNumber)->capture_default_str();
  bounds_cmd->add_option("--k", bounds.k, "Trials (CR)")->check(CLI::PositiveNumber)->capture_default_str();
  bounds_cmd->add_option("--N", bounds.N, "Total gates (MM)")->check(CLI::PositiveNumber)->capture_default_str();
  bounds_cmd->add_option("--alpha", bounds.alpha, "appendix-b alpha")->check(CLI::PositiveNumber)->capture_default_str();
  bounds_cmd->add_option("--beta", bounds.beta, "appendix-b beta")->check(CLI::PositiveNumber)->capture_default_str();
  bounds_cmd->add_flag("--optimize", bounds.optimize, "Add a SEP+ reparametrization search");
  bounds_cmd->callback([&] { run = [&] { return cli::cmd_bounds(bounds, global.search()); }; });

  // variational
  auto* var_cmd = app.add_subcommand("variational", "Minimax variational constants");
  var_cmd->require_subcommand(1);

  cli::SimplexConfig simplex;
  auto* simplex_cmd = var_cmd->add_subcommand("simplex", "Dirichlet ground energy of the cross-polytope");
  simplex_cmd->add_option("--p", simplex.p, "Dimension, 1..4")->check(CLI::Range(1, 4))->capture_default_str();
  simplex_cmd->add_option("--grid", simplex.grid, "Grid intervals per axis (default depends on p)")->check(CLI::PositiveNumber);
  simplex_cmd->add_option("--max-iterations", simplex.max_iterations, "Inverse-iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simplex_cmd->callback([&] { run = [&] { return cli::cmd_variational_simplex(simplex); }; });

  cli::AiryConfig airy;
  auto* airy_cmd = var_cmd->add_subcommand("airy", "Airy lower bound on the joint constant");
  airy_cmd->add_option("--tail", airy.tail_cutoff, "Quadrature cutoff")->check(CLI::PositiveNumber)->capture_default_str();
  airy_cmd->callback([&] { run = [&] { return cli::cmd_variational_airy(airy); }; });

  cli::BallConfig ball;
  auto* ball_cmd = var_cmd->add_subcommand("ball", "Inscribed-ball upper bound");
  ball_cmd->add_option("--p", ball.p, "Dimension, 1..64")->check(CLI::Range(1, kMaxBallDimension))->capture_default_str();
  ball_cmd->callback([&] { run = [&] { return cli::cmd_variational_ball(ball); }; });

  cli::PhaseConfig phase;
  auto* phase_cmd = var_cmd->add_subcommand("phase", "Covariant phase-measurement cost");
  phase_cmd->add_option("--family", phase.family, "sin | noon")->check(CLI::IsMember({"sin", "noon"}))->capture_default_str();
  phase_cmd->add_option("--N", phase.N, "Photon/gate budget")->check(CLI::PositiveNumber)->capture_default_str();
  phase_cmd->add_option("--mc-samples", phase.mc_samples, "Monte-Carlo cross-check sample count (>= 1000)")
      ->check(CLI::Range(1000L, 1000000000L));
  phase_cmd->add_option("--pdf-grid", phase.pdf_grid, "Density grid points")->check(CLI::PositiveNumber)->capture_default_str();
  phase_cmd->callback([&] { run = [&] { return cli::cmd_variational_phase(phase, global.seed); }; });

  // table
  cli::TableConfig table;
  auto* table_cmd = app.add_subcommand("table", "Reference table of strategy costs");
  table_cmd->add_option("--p", table.p, "Parameters for the p-dependent models")->check(CLI::PositiveNumber)->capture_default_str();
  table_cmd->add_option("--n", table.n, "Probe size for finite-n entries")->check(CLI::PositiveNumber)->capture_default_str();
  table_cmd->callback([&] { run = [&] { return cli::cmd_table(table, global.search()); }; });

  // figure
  auto* fig_cmd = app.add_subcommand("figure", "Figure data (CSV by default)");
  fig_cmd->require_subcommand(1);
  cli::FigureBallConfig fig_ball;
  auto* fig_ball_cmd = fig_cmd->add_subcommand("ball", "Normalized minimax constants against p");
  fig_ball_cmd->add_option("--p-max", fig_ball.p_max, "Largest p, 2..64")->check(CLI::Range(2, kMaxBallDimension))->capture_default_str();
  fig_ball_cmd->callback([&] { run = [&] { return cli::cmd_figure_ball(fig_ball); }; });

  cli::FigureRatioConfig fig_ratio;
  auto* fig_ratio_cmd = fig_cmd->add_subcommand("ratio", "Orthogonal over general SEP+ cost against beta/alpha");
  fig_ratio_cmd->add_option("--alpha", fig_ratio.alpha, "Model alpha")->check(CLI::PositiveNumber)->capture_default_str();
  fig_ratio_cmd->add_option("--beta-steps", fig_ratio.beta_steps, "Grid points in (0, alpha)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fig_ratio_cmd->add_option("--angle-grid", fig_ratio.angle_grid, "Rotation angles scanned before refinement")
      ->check(CLI::Range(4, 100000))
      ->capture_default_str();
  fig_ratio_cmd->callback([&] { run = [&] { return cli::cmd_figure_ratio(fig_ratio); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const bool is_figure = fig_cmd->parsed();
  const bool format_given = app.count("--format") > 0;
  global.format = cli::format_from_string(is_figure && !format_given ? "csv" : format);

  try {
    const cli::CommandResult result = run();
    emit(result.render(global.format), global.output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}
