#pragma once

#include <Eigen/Dense>

#include "eigencond/errors.hpp"

namespace eigencond {

/// Single-particle description of a free-fermion chain: many-body energies in
/// shifted units are subset sums of the nonnegative mode energies, with the
/// ground state (empty occupation) at 0.
struct FreeFermionSpectrum {
  Eigen::VectorXd epsilons;   // ascending, nonnegative mode energies
  double const_shift = 0.0;   // aligns subset sums with the raw spin spectrum
  int ground_degeneracy = 1;

  int sites() const { return static_cast<int>(epsilons.size()); }
  double dimension() const;          // 2^V as a double (V may exceed 53 bits)
  double total_energy() const;       // anti-ground energy = sum of modes
  double mean_energy() const;        // E_infinity = total / 2
  double s2() const;                 // sum eps^2 / (4 V)

  /// All 2^V subset sums, sorted ascending (guarded to V <= 22).
  Eigen::VectorXd many_body_spectrum() const;
};

/// Mode energies of the open-chain 1D TFIM via the Majorana pairing matrix.
/// Throws PairingError when the +/- eigenvalue pairing of the antisymmetric
/// coupling matrix is violated beyond 1e-10.
FreeFermionSpectrum jordan_wigner_spectrum(int sites, double coupling, double field);

/// Z(beta) = sum_alpha 1/(1 + beta E_alpha) by adaptive Gauss-Kronrod
/// quadrature of the numerically stable resolvent integrand (relative
/// tolerance 1e-10). Valid for beta > 0 up to well beyond 2^V * 1e3.
double stable_z(const FreeFermionSpectrum& spectrum, double beta);

/// ZE(beta) = sum_alpha E_alpha/(1 + beta E_alpha), same contract as stable_z.
double stable_ze(const FreeFermionSpectrum& spectrum, double beta);

/// E_c- = N_bulk / integral_0^inf (prod_k (1+e^-(lambda eps_k)) - N_gs).
/// Throws DivergentIntegralError when a mode energy is exactly zero.
double free_fermion_critical_energy(const FreeFermionSpectrum& spectrum);

/// log(1 + e^w) with the standard stable branches (w for w > 36, e^w for
/// w < -36).
double log1pexp(double w);

}  // namespace eigencond
