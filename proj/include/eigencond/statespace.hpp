#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "eigencond/errors.hpp"
#include "eigencond/rng.hpp"

namespace eigencond {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Normalized complex amplitude vector over a 2^V-dimensional Hilbert space.
struct StateVector {
  Eigen::VectorXcd amplitudes;
  int sites = 0;

  Index dimension() const { return amplitudes.size(); }
  double norm() const { return amplitudes.norm(); }
};

/// Orthonormal basis of a (possibly degenerate) extremal eigenspace.
struct GroundSpaceInfo {
  int degeneracy = 0;
  Eigen::MatrixXcd basis;  // N x degeneracy, may be empty when only the spectrum is known
  double energy = 0.0;     // shifted units
  double gap_to_next = 0.0;

  bool has_basis() const { return basis.size() > 0; }
};

enum class OperatorRep {
  SparseComputational,
  Dense,
  DiagonalWithBasis,
  TridiagonalSymmetric,
};

enum class ResolveMode {
  Full,          // full spectrum plus extremal bases
  ExtremalOnly,  // ground / anti-ground data only (large sparse operators)
  Auto,          // Full below kFullDiagonalizationLimit, ExtremalOnly above
};

inline constexpr Index kFullDiagonalizationLimit = 1 << 12;

/// Hermitian operator with dual representation (computational-basis matrix /
/// diagonal eigenbasis) and spectral metadata. After resolve() the operator is
/// shifted so the smallest eigenvalue is 0, and the (anti-)ground spaces are
/// grouped by the degeneracy tolerance max(1e-9*|H|, 1e-12); pass
/// exact_degeneracy_only to group only bit-equal eigenvalues.
class HamiltonianOperator {
 public:
  static HamiltonianOperator from_sparse(int sites, Eigen::SparseMatrix<double> h);
  static HamiltonianOperator from_dense(int sites, Eigen::MatrixXcd h);
  static HamiltonianOperator from_tridiagonal(int sites, Eigen::VectorXd diag,
                                              Eigen::VectorXd subdiag);
  /// Diagonal representation from a precomputed (unshifted) spectrum.
  static HamiltonianOperator from_spectrum(int sites, Eigen::VectorXd energies);

  int sites() const { return sites_; }
  Index dimension() const { return dimension_; }
  OperatorRep representation() const { return rep_; }

  /// Computes the shift and extremal spaces (and the spectrum, unless
  /// ExtremalOnly). Idempotent.
  void resolve(ResolveMode mode = ResolveMode::Auto, bool exact_degeneracy_only = false);
  bool resolved() const { return resolved_; }

  double shift() const { return shift_; }  // E0: H_shifted = H_raw + E0*I
  bool has_spectrum() const { return spectrum_.size() > 0; }
  /// Ascending, shifted eigenvalues (ground space at the front).
  const Eigen::VectorXd& spectrum() const;
  const GroundSpaceInfo& ground_space() const { return ground_; }
  const GroundSpaceInfo& anti_ground_space() const { return anti_; }

  bool has_sparse() const { return sparse_.nonZeros() > 0; }
  const Eigen::SparseMatrix<double>& sparse() const { return sparse_; }
  bool has_dense() const { return dense_.size() > 0; }

  double norm_scale() const { return norm_scale_; }      // scale used in tolerances
  double max_energy() const;                             // anti-ground energy, shifted
  double mean_energy() const;                            // E_infinity, shifted
  double mean_energy_density() const;                    // eps_infinity
  double frobenius_moment_s2() const;                    // s^2 from tr H, tr H^2

  /// y = H_shifted * x in whatever representation is held.
  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
  void apply_real(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;

  const std::vector<double>& pauli_coefficients() const { return pauli_coefficients_; }
  void set_pauli_coefficients(std::vector<double> c) { pauli_coefficients_ = std::move(c); }

  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  /// Overrides the ground space with an analytically known basis (columns
  /// orthonormalized internally); used where the degenerate space is exact.
  void set_ground_space_basis(const Eigen::MatrixXcd& raw_basis);

  /// Eigenpairs to extract per spectral edge when resolving ExtremalOnly;
  /// raise this when a degeneracy larger than the default is expected.
  void set_extremal_pairs_hint(int pairs) { extremal_pairs_hint_ = pairs; }

 private:
  int sites_ = 0;
  Index dimension_ = 0;
  OperatorRep rep_ = OperatorRep::Dense;
  double shift_ = 0.0;
  double norm_scale_ = 0.0;
  bool resolved_ = false;

  Eigen::VectorXd spectrum_;  // ascending, shifted
  Eigen::SparseMatrix<double> sparse_;  // shifted once resolved
  Eigen::MatrixXcd dense_;              // shifted once resolved
  Eigen::VectorXd tri_diag_, tri_sub_;  // raw (unshifted) tridiagonal bands

  GroundSpaceInfo ground_, anti_;
  std::vector<double> pauli_coefficients_;
  std::string label_;
  int extremal_pairs_hint_ = 6;

  void resolve_dense(bool exact_only);
  void resolve_sparse_full(bool exact_only);
  void resolve_sparse_extremal(bool exact_only);
  void resolve_tridiagonal(bool exact_only, bool want_vectors);
  void group_from_spectrum(bool exact_only);
};

/// Degeneracy grouping tolerance for an operator of the given norm scale.
double degeneracy_tolerance(double norm_scale);

/// Mean energy density, scaled second central moment and higher central
/// moments of the energy density spectrum.
struct SpectralMoments {
  double eps_infinity = 0.0;
  double s2 = 0.0;
  std::vector<double> central_moments;  // mu_n(eps) for n = 2..n_max
  int n_max = 2;
  int sites = 0;
};

/// Requires a resolved spectrum. For operators carrying Pauli coefficients the
/// value s^2 = V^{-1} sum h_a^2 is cross-checked against the spectral moment.
SpectralMoments spectral_moments(const HamiltonianOperator& h, int n_max = 2);

/// s^2 from a Pauli-string coefficient list.
double pauli_s2(const std::vector<double>& coefficients, int sites);

/// Haar-random state: i.i.d. standard complex Gaussian amplitudes, normalized.
/// Dimension must be a power of two >= 2.
StateVector haar_random_state(Index dimension, Rng& rng);

/// Real part of <psi|H|psi>; throws NonHermitianError if the imaginary residue
/// exceeds 1e-10 * |H|.
double energy_expectation(const HamiltonianOperator& h, const StateVector& psi);

/// Fast path for diagonal-representation work: sum E_k |c_k|^2.
double energy_expectation_diagonal(const Eigen::VectorXd& energies,
                                   const Eigen::VectorXcd& amplitudes);

/// Normalized energy-isosurface normal n = (H - E)|psi> with the component
/// along psi removed. Returns nullopt when |(H - E)psi| < 1e-14 * |H|
/// (psi is an eigenstate; the isosurface normal is undefined).
std::optional<StateVector> energy_gradient_tangent(const HamiltonianOperator& h,
                                                   const StateVector& psi);

/// Diagonal-representation version of energy_gradient_tangent.
std::optional<Eigen::VectorXcd> energy_gradient_tangent_diagonal(
    const Eigen::VectorXd& energies, const Eigen::VectorXcd& amplitudes, double energy,
    double norm_scale);

}  // namespace eigencond
