#include "rfstrack/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonArgs {
  std::string config_path;
  rfstrack::CliOverrides overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("config", args.config_path, "flat key-value config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--scenario", args.overrides.scenario, "scenario preset (1-4)");
  cmd->add_option("--runs", args.overrides.runs, "Monte Carlo replicas");
  cmd->add_option("--seed", args.overrides.seed, "base RNG seed");
  cmd->add_option("--tracker", args.overrides.trackers,
                  "tracker to run (repeatable): adaptive, nonadaptive, naive, "
                  "clairvoyant");
  cmd->add_option("--out", args.overrides.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-target radar tracking experiments with resilience "
               "against range deception jamming"};
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run a jamming scenario study");
  add_common(run, run_args);

  CommonArgs loe_args;
  CLI::App* loe = app.add_subcommand(
      "loe", "loss-of-efficiency study (no attack, PCRB benchmark)");
  add_common(loe, loe_args);

  std::string csv_path;
  std::string plot_out;
  CLI::App* plot = app.add_subcommand("plot", "regenerate SVG plots from a CSV");
  plot->add_option("csv", csv_path, "metrics.csv produced by run/loe")
      ->required();
  plot->add_option("--out", plot_out, "output directory (default: CSV directory)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto cfg =
          rfstrack::load_experiment_config(run_args.config_path, run_args.overrides);
      return rfstrack::cmd_run(cfg);
    }
    if (loe->parsed()) {
      const auto cfg =
          rfstrack::load_experiment_config(loe_args.config_path, loe_args.overrides);
      return rfstrack::cmd_loe(cfg);
    }
    if (plot->parsed()) return rfstrack::cmd_plot(csv_path, plot_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
