#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "eigencond/manifest.hpp"
#include "eigencond/run_commands.hpp"

namespace {

void handle_sigint(int) { eigencond::request_interrupt(); }

void add_common(CLI::App* cmd, eigencond::CommandOptions& options, bool needs_config) {
  auto* config = cmd->add_option("--config", options.config_path, "run configuration (TOML)");
  if (needs_config) config->required();
  cmd->add_option("--out", options.out_dir, "output directory");
  cmd->add_option("--seed", options.seed_override, "override the global seed");
  cmd->add_option("--threads", options.threads_override,
                  "worker threads (EIGENCOND_THREADS as fallback)");
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, handle_sigint);

  CLI::App app{"energy-constrained random-state toolkit"};
  app.set_version_flag("--version", eigencond::kToolVersion);
  app.require_subcommand(1);

  eigencond::CommandOptions sample_opts, critical_opts, ensemble_opts;

  CLI::App* sample = app.add_subcommand("sample", "nested sampling with Galilean Monte Carlo");
  add_common(sample, sample_opts, true);

  CLI::App* critical = app.add_subcommand("critical", "critical-energy estimates");
  add_common(critical, critical_opts, true);
  critical->add_option("--method", critical_opts.method_override,
                       "auto|exact|stochastic|free-fermion|moment");

  CLI::App* ensemble = app.add_subcommand("ensemble", "typical-weight ensemble curves");
  add_common(ensemble, ensemble_opts, true);

  CLI::App* models = app.add_subcommand("models", "model catalog");
  models->add_subcommand("list", "list catalog families");

  app.add_subcommand("selftest", "quick invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : eigencond::kExitConfigError;
  }

  if (sample->parsed()) return eigencond::cmd_sample(sample_opts);
  if (critical->parsed()) return eigencond::cmd_critical(critical_opts);
  if (ensemble->parsed()) return eigencond::cmd_ensemble(ensemble_opts);
  if (models->parsed()) return eigencond::cmd_models_list();
  return eigencond::cmd_selftest();
}
