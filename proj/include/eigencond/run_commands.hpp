#pragma once

#include <optional>
#include <string>

namespace eigencond {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalFailure = 3;
inline constexpr int kExitInterrupted = 4;

struct CommandOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  int threads_override = 0;
  std::string method_override;  // critical-energy method
};

int cmd_sample(const CommandOptions& options);
int cmd_critical(const CommandOptions& options);
int cmd_ensemble(const CommandOptions& options);
int cmd_models_list();
int cmd_selftest();

/// Cooperative SIGINT flag checked between work units.
void request_interrupt();
bool interrupt_requested();
void clear_interrupt();

}  // namespace eigencond
