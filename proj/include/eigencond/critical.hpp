#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "eigencond/models.hpp"
#include "eigencond/statespace.hpp"

namespace eigencond {

enum class CriticalMethod { ExactSum, StochasticTrace, FreeFermion, MomentExpansion };

std::string to_string(CriticalMethod method);

/// E_c+- estimates with provenance; stderr fields are present only for the
/// stochastic estimator (nonparametric bootstrap over probes).
struct CriticalEnergyReport {
  CriticalMethod method = CriticalMethod::ExactSum;
  double eps_c_minus = 0.0;
  double eps_c_plus = 0.0;
  std::optional<double> stderr_minus;
  std::optional<double> stderr_plus;
  int probes = 0;
  double solver_tol = 0.0;
  std::string model;
  int sites = 0;
  std::uint64_t seed = 0;
};

class DivergentSumError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// E_c- = N_bulk / sum_{alpha not in g.s. space} 1/E_alpha over a shifted
/// ascending spectrum; E_c+ analogously on the reflected spectrum with the
/// anti-ground space excluded wholesale.
CriticalEnergyReport exact_critical_energy(const Eigen::VectorXd& spectrum,
                                           Index ground_degeneracy, Index anti_degeneracy,
                                           int sites);

struct StochasticOptions {
  int probes = 256;                     // fixed probe count when > 0
  double target_relative_stderr = 0.0;  // when > 0 and probes == 0, choose m adaptively
  double solver_tol = 1e-8;
  bool rademacher = false;
  int bootstrap_resamples = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  bool both_tails = true;
};

/// Girard-Hutchinson estimate of tr H_bulk^-1 with Gaussian probes and
/// ground-space-deflated conjugate-gradient solves.
CriticalEnergyReport stochastic_critical_energy(const HamiltonianOperator& h,
                                                const StochasticOptions& options);

/// Single-probe machinery exposed for direct verification: returns the
/// per-probe quadratic forms <v_perp | A^+ v_perp>.
std::vector<double> stochastic_trace_samples(const HamiltonianOperator& h,
                                             const Eigen::MatrixXd& space_basis,
                                             bool reflect, const StochasticOptions& options,
                                             std::vector<double>* deflation_residuals);

struct EnsembleStatsRow {
  int sites = 0;
  double mean_eps_c = 0.0;
  double std_eps_c = 0.0;
  std::vector<double> eps_c_samples;
  std::vector<double> ground_energy_density_unshifted;
};

/// Per-size distribution of the exact-sum critical energy density over random
/// matrix draws (deterministic per base seed).
std::vector<EnsembleStatsRow> critical_energy_ensemble_stats(const ModelSpec& base,
                                                             const std::vector<int>& sizes,
                                                             int n_seeds, int threads);

}  // namespace eigencond
