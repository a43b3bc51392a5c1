#include "eigencond/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <complex>
#include <random>

#include "eigencond/errors.hpp"

namespace eigencond {

void symmetric_eigen(const Eigen::MatrixXd& a, Eigen::VectorXd& values,
                     Eigen::MatrixXd* vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXd work = a;
  values.resize(n);
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n,
                                   work.data(), n, values.data());
  if (info != 0) throw NumericalError("dsyevd failed, info=" + std::to_string(info));
  if (vectors) *vectors = std::move(work);
}

void hermitian_eigen(const Eigen::MatrixXcd& a, Eigen::VectorXd& values,
                     Eigen::MatrixXcd* vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXcd work = a;
  values.resize(n);
  lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n,
                                   reinterpret_cast<lapack_complex_double*>(work.data()), n,
                                   values.data());
  if (info != 0) throw NumericalError("zheevd failed, info=" + std::to_string(info));
  if (vectors) *vectors = std::move(work);
}

Eigen::VectorXd tridiagonal_eigenvalues(const Eigen::VectorXd& diag,
                                        const Eigen::VectorXd& subdiag) {
  const lapack_int n = static_cast<lapack_int>(diag.size());
  Eigen::VectorXd d = diag;
  Eigen::VectorXd e = subdiag;
  lapack_int info = LAPACKE_dsterf(n, d.data(), e.data());
  if (info != 0) throw NumericalError("dsterf failed, info=" + std::to_string(info));
  return d;
}

void tridiagonal_eigen(const Eigen::VectorXd& diag, const Eigen::VectorXd& subdiag,
                       Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
  const lapack_int n = static_cast<lapack_int>(diag.size());
  values = diag;
  Eigen::VectorXd e = subdiag;
  vectors.setIdentity(n, n);
  lapack_int info = LAPACKE_dsteqr(LAPACK_COL_MAJOR, 'I', n, values.data(), e.data(),
                                   vectors.data(), n);
  if (info != 0) throw NumericalError("dsteqr failed, info=" + std::to_string(info));
}

namespace {

// One Lanczos sweep with full reorthogonalization against both the Krylov
// basis and previously converged (deflated) vectors.
bool lanczos_sweep(Index n, const SymmetricMatVec& apply, double scale,
                   const Eigen::MatrixXd& deflated, int max_iterations, double tolerance,
                   Rng& rng, double& value, Eigen::VectorXd& vector) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v0 = Eigen::VectorXd::NullaryExpr(n, [&]() { return gauss(rng); });
  if (deflated.cols() > 0) v0 -= deflated * (deflated.transpose() * v0);
  v0.normalize();

  const int m_max = static_cast<int>(std::min<Index>(max_iterations, n));
  Eigen::MatrixXd basis(n, m_max);
  Eigen::VectorXd alpha(m_max), beta(m_max);
  Eigen::VectorXd w(n);

  basis.col(0) = v0;
  int m = 0;
  for (int j = 0; j < m_max; ++j) {
    apply(basis.col(j), w);
    if (deflated.cols() > 0) w -= deflated * (deflated.transpose() * w);
    alpha[j] = basis.col(j).dot(w);
    w -= alpha[j] * basis.col(j);
    if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
    // full reorthogonalization
    w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
    beta[j] = w.norm();
    m = j + 1;

    bool breakdown = beta[j] < 1e-13 * std::max(scale, 1.0);
    bool check = breakdown || j + 1 == m_max || (j >= 10 && j % 10 == 0);
    if (check) {
      Eigen::VectorXd tv;
      Eigen::MatrixXd tm;
      tridiagonal_eigen(alpha.head(m), beta.head(std::max(m - 1, 0)), tv, tm);
      // residual of the lowest Ritz pair: |beta_m * last component|
      double resid = (m < static_cast<int>(n)) ? std::abs(beta[m - 1] * tm(m - 1, 0)) : 0.0;
      if (resid <= tolerance * std::max(scale, 1.0) || breakdown || j + 1 == m_max) {
        value = tv[0];
        vector = basis.leftCols(m) * tm.col(0);
        if (deflated.cols() > 0) vector -= deflated * (deflated.transpose() * vector);
        vector.normalize();
        return resid <= tolerance * std::max(scale, 1.0) || breakdown;
      }
    }
    if (breakdown) break;
    if (j + 1 < m_max) basis.col(j + 1) = w / beta[j];
  }
  return false;
}

}  // namespace

LanczosResult lanczos_smallest(Index dimension, const SymmetricMatVec& apply, double scale,
                               const LanczosOptions& options) {
  LanczosResult result;
  result.values.resize(options.n_pairs);
  result.vectors.resize(dimension, options.n_pairs);
  result.converged = true;
  Rng rng = make_rng(options.seed);
  Eigen::MatrixXd deflated(dimension, 0);
  for (int k = 0; k < options.n_pairs; ++k) {
    double value = 0.0;
    Eigen::VectorXd vector;
    bool ok = lanczos_sweep(dimension, apply, scale, deflated, options.max_iterations,
                            options.tolerance, rng, value, vector);
    result.converged = result.converged && ok;
    result.values[k] = value;
    result.vectors.col(k) = vector;
    deflated.conservativeResize(Eigen::NoChange, k + 1);
    deflated.col(k) = vector;
  }
  return result;
}

CgResult conjugate_gradient(Index dimension, const SymmetricMatVec& apply,
                            const Eigen::VectorXd& rhs, const CgOptions& options) {
  CgResult out;
  out.x = Eigen::VectorXd::Zero(dimension);
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd p = r;
  Eigen::VectorXd ap(dimension);
  double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    out.converged = true;
    return out;
  }
  double rr = r.squaredNorm();
  int cap = options.max_iterations > 0
                ? options.max_iterations
                : static_cast<int>(50.0 * std::sqrt(static_cast<double>(dimension))) + 10;
  for (int it = 0; it < cap; ++it) {
    apply(p, ap);
    double pap = p.dot(ap);
    if (pap <= 0.0) throw NotPsdError("conjugate gradient: nonpositive curvature");
    double a = rr / pap;
    out.x += a * p;
    r -= a * ap;
    double rr_new = r.squaredNorm();
    out.iterations = it + 1;
    if (std::sqrt(rr_new) <= options.tolerance * rhs_norm) {
      out.residual = std::sqrt(rr_new) / rhs_norm;
      out.converged = true;
      return out;
    }
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  out.residual = std::sqrt(rr) / rhs_norm;
  throw SolverError("conjugate gradient did not converge", out.residual);
}

}  // namespace eigencond
