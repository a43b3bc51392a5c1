#pragma once

#include <Eigen/Dense>
#include <functional>

#include "eigencond/rng.hpp"

namespace eigencond {

using Index = Eigen::Index;

/// Full symmetric eigendecomposition (LAPACK dsyevd). Ascending eigenvalues;
/// eigenvectors as columns when want_vectors.
void symmetric_eigen(const Eigen::MatrixXd& a, Eigen::VectorXd& values,
                     Eigen::MatrixXd* vectors);

/// Full Hermitian eigendecomposition (LAPACK zheevd).
void hermitian_eigen(const Eigen::MatrixXcd& a, Eigen::VectorXd& values,
                     Eigen::MatrixXcd* vectors);

/// Eigenvalues of a symmetric tridiagonal matrix (LAPACK dsterf), ascending.
Eigen::VectorXd tridiagonal_eigenvalues(const Eigen::VectorXd& diag,
                                        const Eigen::VectorXd& subdiag);

/// Eigenvalues and eigenvectors of a symmetric tridiagonal matrix (dsteqr).
void tridiagonal_eigen(const Eigen::VectorXd& diag, const Eigen::VectorXd& subdiag,
                       Eigen::VectorXd& values, Eigen::MatrixXd& vectors);

using SymmetricMatVec = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LanczosOptions {
  int max_iterations = 300;
  double tolerance = 1e-11;  // relative residual |Hx - lambda x| / scale
  int n_pairs = 1;           // extremal pairs to extract (sequential deflation)
  std::uint64_t seed = 7;
};

struct LanczosResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // n x n_pairs
  bool converged = false;
};

/// Smallest eigenpairs of a real symmetric operator given only a matvec.
/// Plain Lanczos with full reorthogonalization; repeated eigenvalues are
/// found by deflating converged vectors and restarting.
LanczosResult lanczos_smallest(Index dimension, const SymmetricMatVec& apply, double scale,
                               const LanczosOptions& options);

struct CgOptions {
  double tolerance = 1e-8;  // relative residual
  int max_iterations = 0;   // 0 = 50 * sqrt(N)
};

struct CgResult {
  Eigen::VectorXd x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Conjugate gradient for a symmetric positive-(semi)definite operator.
/// Throws NotPsdError when a search direction has nonpositive curvature.
CgResult conjugate_gradient(Index dimension, const SymmetricMatVec& apply,
                            const Eigen::VectorXd& rhs, const CgOptions& options);

}  // namespace eigencond
