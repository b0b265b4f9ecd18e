// Command-line front end: run, sweep and analyze packet-coupled clock
// synchronisation scenarios.

#include <iostream>

#include <CLI11.hpp>

#include "pkco/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Packet-coupled oscillator synchronisation simulator", "pkco"};
  app.set_version_flag("--version", pkco::tool_version());
  app.require_subcommand(1);

  pkco::RunOptions run_opts;
  std::uint64_t seed = 0;
  std::uint64_t cycles = 0;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", run_opts.config_path, "Scenario file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "Override the scenario seed");
    cmd->add_option("--cycles", cycles, "Override the number of cycles")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", run_opts.out_dir, "Output directory");
    cmd->add_flag("--strict", run_opts.strict, "Reject gains outside (0, 2)");
    cmd->add_flag("--quiet", run_opts.quiet, "Suppress progress output");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Simulate one scenario");
  add_common(run_cmd);

  pkco::SweepOptions sweep_opts;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Simulate a parameter sweep");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--param", sweep_opts.param, "alpha, kappa_mean, eta_mean, t_d or seed")
      ->required()
      ->check(CLI::IsMember({"alpha", "kappa_mean", "eta_mean", "t_d", "seed"}));
  sweep_cmd->add_option("--values", sweep_opts.values, "Comma-separated values")
      ->required()
      ->delimiter(',');

  pkco::AnalyzeOptions analyze_opts;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Recompute a run's report from its trace");
  analyze_cmd->add_option("trace", analyze_opts.trace_path, "Trace CSV")->required();
  analyze_cmd->add_option("--config", analyze_opts.config_path,
                          "Scenario file, when the trace has no manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : pkco::kExitUsage;
  }

  auto finish_common = [&](CLI::App* cmd) {
    if (cmd->count("--seed") > 0) run_opts.seed = seed;
    if (cmd->count("--cycles") > 0) run_opts.cycles = cycles;
  };

  if (*run_cmd) {
    finish_common(run_cmd);
    return pkco::cmd_run(run_opts, std::cout, std::cerr);
  }
  if (*sweep_cmd) {
    finish_common(sweep_cmd);
    sweep_opts.base = run_opts;
    return pkco::cmd_sweep(sweep_opts, std::cout, std::cerr);
  }
  return pkco::cmd_analyze(analyze_opts, std::cout, std::cerr);
}
