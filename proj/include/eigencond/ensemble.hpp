#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "eigencond/freefermion.hpp"
#include "eigencond/statespace.hpp"

namespace eigencond {

enum class CurveProvenance { SpectralSum, FreeFermionQuadrature };

struct EnsembleCurveRow {
  double beta = 0.0;
  double z = 0.0;
  double e_av = 0.0;
  double p_gs = 0.0;
  double p_anti_gs = 0.0;
  std::optional<double> p_1;  // first-excited weight, near-degeneracy analysis
};

struct EnsembleCurve {
  std::vector<EnsembleCurveRow> rows;
  CurveProvenance provenance = CurveProvenance::SpectralSum;
  int sites = 0;
};

struct ScalingPoint {
  double eta = 0.0;
  double p_gs_rescaled = 0.0;
  double f_eta = 0.0;
};

/// Large-system GbE critical energy densities from the semicircle density of
/// states, in shifted units.
inline constexpr double kSemicircleEpsCMinus = 0.5;
inline constexpr double kSemicircleEpsCPlus = 1.5;

/// p_alpha = Z^-1 / (1 + beta E_alpha) over a shifted ascending spectrum.
/// Throws InvalidBetaError when 1 + beta E_alpha <= 0 for some alpha.
Eigen::VectorXd typical_weights(const Eigen::VectorXd& spectrum, double beta);

/// Mean energy under the typical weights.
double ensemble_energy(const Eigen::VectorXd& spectrum, double beta);

/// Inverts ensemble_energy by bisection on a monotone map (relative tolerance
/// 1e-10 in the energy). Requires E_gs < e_av < E_anti strictly.
double solve_beta_for_energy(const Eigen::VectorXd& spectrum, double e_av);

/// Free-fermion route via stable_z / stable_ze quadratures; energies above
/// the spectral midpoint are handled through the reflection symmetry of the
/// subset-sum spectrum (the returned beta is then negative).
double solve_beta_for_energy(const FreeFermionSpectrum& spectrum, double e_av);

/// Bulk-only weighted energy, excluding the degenerate ground space; beta >= 0.
double bulk_energy(const Eigen::VectorXd& spectrum, Index ground_degeneracy, double beta);

struct CriticalDensityPair {
  double minus = 0.0;
  double plus = 0.0;
};

/// Leading-order moment expansion of the critical energy densities around the
/// spectral center (shifted units).
CriticalDensityPair critical_energy_moment_expansion(const SpectralMoments& moments,
                                                     double anti_ground_energy_density);

/// f(eta) = (-eta + sqrt(eta^2 + 4)) / 2.
double scaling_f(double eta);

/// Exponentially rescaled transition coordinates for each curve row, paired
/// with the closed-form reference.
std::vector<ScalingPoint> scaling_transform(const EnsembleCurve& curve,
                                            const SpectralMoments& moments, double eps_c);

/// (beta, Z, E_av, p_gs, p_anti_gs) over a beta grid from the full spectrum.
EnsembleCurve build_curve_spectral(const Eigen::VectorXd& spectrum, Index ground_degeneracy,
                                   Index anti_degeneracy, const Eigen::VectorXd& beta_grid,
                                   int sites);

/// Same from the free-fermion quadratures (nondegenerate ground state).
EnsembleCurve build_curve_free_fermion(const FreeFermionSpectrum& spectrum,
                                       const Eigen::VectorXd& beta_grid);

struct NearDegeneracyReport {
  EnsembleCurve curve;   // rows carry p_1
  double e_c1 = 0.0;     // transition into the nearly-degenerate doublet
  double e_c0 = 0.0;     // crossover where weight shifts onto the ground state
  double delta = 0.0;    // doublet splitting
};

/// Tracks ground and first-excited weights separately for a spectrum whose two
/// lowest states are split from the rest.
NearDegeneracyReport near_degeneracy_curve(const Eigen::VectorXd& spectrum,
                                           const Eigen::VectorXd& beta_grid, int sites);

/// Logarithmic grid in 1 + beta from 1e-6 to 1e3 * dimension, 400 points.
Eigen::VectorXd default_beta_grid(double dimension, int points = 400);

}  // namespace eigencond
