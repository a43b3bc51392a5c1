#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "eigencond/models.hpp"
#include "eigencond/sampler.hpp"

namespace eigencond {

/// [sampler] table.
struct SamplerRunConfig {
  SamplerConfig gmc;
  int chains = 1;
  double bin_width = 0.01;
  bool both_tails = true;
  bool dump_states = false;
};

/// [ensemble] table.
struct EnsembleRunConfig {
  std::string mode = "curve";  // curve | collapse | near-degeneracy | goe-typical
  std::vector<int> sizes;      // collapse sweep sizes (empty = model sites)
  int beta_points = 400;
  int ensemble_draws = 101;  // goe-typical mode
};

/// [critical] table.
struct CriticalRunConfig {
  std::string method = "auto";  // auto | exact | stochastic | free-fermion | moment
  std::vector<int> sizes;       // empty = model sites
  int probes = 0;               // 0 = adaptive
  double target_relative_stderr = 0.005;
  double solver_tol = 1e-8;
  int seeds = 1;  // random-matrix draws per size
};

struct RunConfig {
  ModelSpec model;
  SamplerRunConfig sampler;
  EnsembleRunConfig ensemble;
  CriticalRunConfig critical;
  std::uint64_t seed = 0;  // global; derives every per-unit stream
  int threads = 0;
  nlohmann::json raw() const;
};

/// Parses a TOML (or JSON) run config. Unknown tables or keys are errors;
/// `[model].family` and `[model].sites` are required.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

}  // namespace eigencond
