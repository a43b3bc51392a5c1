#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "eigencond/statespace.hpp"

namespace eigencond {

/// Galilean Monte Carlo / nested sampling parameters. Defaults mirror the
/// production protocol: two live points, pathlength 32, micro-step 2^-10,
/// sixteen moves per nested-sampling step.
struct SamplerConfig {
  int n_live = 2;
  double path_length = 32.0;
  double step_theta = 0.0009765625;  // 2^-10
  int ns_moves = 16;
  long max_iterations = 1000;
  std::optional<double> target_energy;  // stop once E* drops below this
  std::uint64_t seed = 0;
  int retry_cap = 100;  // rejected trajectories per move before giving up

  void validate() const;
};

/// One removed-and-recorded live point. log_measure is exactly
/// iteration * log(1 - 1/n_live).
struct SampleRecord {
  long iteration = 0;
  double energy_star = 0.0;
  Eigen::VectorXcd state;  // amplitudes in the run's eigenbasis ordering
  double log_measure = 0.0;
  long accepted_moves = 0;
  long rejected_moves = 0;
};

/// Output of one nested-sampling chain. Reflected runs sample -H (re-shifted);
/// their eigenbasis ordering is the reverse of the original operator's.
struct SamplingRun {
  std::vector<SampleRecord> records;
  bool reflected = false;
  int n_live = 2;
  long total_accepted = 0;
  long total_rejected = 0;
};

struct BinnedObservable {
  std::vector<double> centers;  // energy density
  std::vector<double> means;    // bin-averaged p_gs + p_anti_gs
  std::vector<double> stderrs;  // standard error of the bin average
  std::vector<long> counts;
  std::vector<bool> mixed;  // bin pooled records from both tails
  double width = 0.0;
};

enum class GmcStatus { Accepted, Rejected, DegenerateGradient };

struct GmcOutcome {
  GmcStatus status = GmcStatus::Rejected;
  Eigen::VectorXcd state;
  double energy = 0.0;
  long reflections = 0;
};

/// Advects a state through the E < e_star submanifold: micro-steps of the
/// closed-form two-plane rotation along a Haar tangent direction, specularly
/// reflecting the direction off the energy isosurface after each step that
/// lands outside, until the accumulated arc length reaches the pathlength.
/// The trajectory stays in span{psi, v} between reflections, so the
/// intermediate steps are propagated by the exact accumulated-angle rotation.
GmcOutcome gmc_trajectory_diagonal(const Eigen::VectorXd& energies, double norm_scale,
                                   const Eigen::VectorXcd& psi, double psi_energy,
                                   double e_star, const SamplerConfig& config, Rng& rng);

/// StateVector front-end over the diagonal representation of `h`.
GmcOutcome gmc_trajectory(const HamiltonianOperator& h, const StateVector& psi, double e_star,
                          const SamplerConfig& config, Rng& rng);

/// One micro-step pair of the two-plane rotation (exposed for verification
/// against the dense matrix exponential).
void two_plane_rotate(Eigen::VectorXcd& psi, Eigen::VectorXcd& v, double theta);

/// Specular reflection of a direction about the isosurface normal, treating
/// the state space as a real manifold with inner product Re<a|b>.
void specular_reflect(Eigen::VectorXcd& v, const Eigen::VectorXcd& normal);

/// Nested sampling on the diagonal representation of `h` (reflected = true
/// samples -H re-shifted). Requires a resolved spectrum.
SamplingRun nested_sampling(const HamiltonianOperator& h, const SamplerConfig& config,
                            bool reflected = false);

/// Haar-integral quadrature sum_i e^{-beta E*_i} g(psi*_i) (t^{i-1}-t^{i+1})/2
/// over the records of one run; re-evaluable for any beta.
double haar_quadrature(const SamplingRun& run, double beta,
                       const std::function<double(const Eigen::VectorXcd&)>& g);

/// Ground plus anti-ground weight averaged in energy-density bins of the given
/// width; reflected runs are mapped back to the original energy axis and
/// pooled.
BinnedObservable bin_weights(const std::vector<SamplingRun>& runs,
                             const HamiltonianOperator& h, double delta);

/// Rough resampling-step budget to reach a target energy from mid-spectrum.
double estimate_steps_to_energy(const HamiltonianOperator& h, double target_energy,
                                int n_live);
double estimate_steps_to_energy(const SpectralMoments& moments, double e_infinity,
                                double target_energy, int n_live);

}  // namespace eigencond
