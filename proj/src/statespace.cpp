#include "eigencond/statespace.hpp"

#include <algorithm>
#include <cmath>

#include "eigencond/linalg.hpp"

namespace eigencond {

namespace {

bool is_power_of_two(Index n) { return n >= 1 && (n & (n - 1)) == 0; }

int site_count_for(Index n) {
  int v = 0;
  while ((Index(1) << v) < n) ++v;
  return v;
}

// Orthonormalize columns (thin QR), dropping numerically null directions.
Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& raw) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(raw);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(raw.rows(), raw.cols());
  return q;
}

}  // namespace

double degeneracy_tolerance(double norm_scale) {
  return std::max(1e-9 * norm_scale, 1e-12);
}

HamiltonianOperator HamiltonianOperator::from_sparse(int sites, Eigen::SparseMatrix<double> h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("operator must be square");
  HamiltonianOperator op;
  op.sites_ = sites;
  op.dimension_ = h.rows();
  op.rep_ = OperatorRep::SparseComputational;
  Eigen::SparseMatrix<double> diff = h - Eigen::SparseMatrix<double>(h.transpose());
  double asym = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
      asym = std::max(asym, std::abs(it.value()));
  if (asym > 1e-12) throw NonHermitianError("sparse operator is not symmetric");
  op.sparse_ = std::move(h);
  op.sparse_.makeCompressed();
  return op;
}

HamiltonianOperator HamiltonianOperator::from_dense(int sites, Eigen::MatrixXcd h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("operator must be square");
  double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) throw NonHermitianError("dense operator is not Hermitian");
  HamiltonianOperator op;
  op.sites_ = sites;
  op.dimension_ = h.rows();
  op.rep_ = OperatorRep::Dense;
  op.dense_ = std::move(h);
  return op;
}

HamiltonianOperator HamiltonianOperator::from_tridiagonal(int sites, Eigen::VectorXd diag,
                                                          Eigen::VectorXd subdiag) {
  if (subdiag.size() != diag.size() - 1)
    throw std::invalid_argument("subdiagonal must have length N-1");
  HamiltonianOperator op;
  op.sites_ = sites;
  op.dimension_ = diag.size();
  op.rep_ = OperatorRep::TridiagonalSymmetric;
  op.tri_diag_ = std::move(diag);
  op.tri_sub_ = std::move(subdiag);
  return op;
}

HamiltonianOperator HamiltonianOperator::from_spectrum(int sites, Eigen::VectorXd energies) {
  HamiltonianOperator op;
  op.sites_ = sites;
  op.dimension_ = energies.size();
  op.rep_ = OperatorRep::DiagonalWithBasis;
  std::sort(energies.data(), energies.data() + energies.size());
  op.spectrum_ = std::move(energies);
  return op;
}

const Eigen::VectorXd& HamiltonianOperator::spectrum() const {
  if (!has_spectrum()) throw Error("operator has no resolved spectrum");
  return spectrum_;
}

double HamiltonianOperator::max_energy() const {
  if (has_spectrum()) return spectrum_[dimension_ - 1];
  if (resolved_) return anti_.energy;
  throw Error("operator not resolved");
}

double HamiltonianOperator::mean_energy() const {
  if (has_spectrum()) return spectrum_.mean();
  if (has_sparse()) {
    double tr = 0.0;
    for (int k = 0; k < sparse_.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sparse_, k); it; ++it)
        if (it.row() == it.col()) tr += it.value();
    return tr / static_cast<double>(dimension_);
  }
  throw Error("mean energy requires a spectrum or sparse representation");
}

double HamiltonianOperator::mean_energy_density() const {
  return mean_energy() / static_cast<double>(sites_);
}

double HamiltonianOperator::frobenius_moment_s2() const {
  // s^2 = [tr H^2 / N - (tr H / N)^2] / V, exact from matrix entries.
  double tr = 0.0, tr2 = 0.0;
  const double n = static_cast<double>(dimension_);
  if (has_sparse()) {
    for (int k = 0; k < sparse_.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sparse_, k); it; ++it) {
        tr2 += it.value() * it.value();
        if (it.row() == it.col()) tr += it.value();
      }
  } else if (has_spectrum()) {
    tr = spectrum_.sum();
    tr2 = spectrum_.squaredNorm();
  } else if (has_dense()) {
    tr = dense_.trace().real();
    tr2 = dense_.squaredNorm();
  } else {
    throw Error("no representation for moment computation");
  }
  return (tr2 / n - (tr / n) * (tr / n)) / static_cast<double>(sites_);
}

void HamiltonianOperator::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  switch (rep_) {
    case OperatorRep::SparseComputational:
      y.resize(x.size());
      y.real() = sparse_ * x.real().eval();
      y.imag() = sparse_ * x.imag().eval();
      return;
    case OperatorRep::Dense:
      y = dense_ * x;
      return;
    case OperatorRep::DiagonalWithBasis:
      y = spectrum_.cast<Complex>().cwiseProduct(x);
      return;
    case OperatorRep::TridiagonalSymmetric: {
      const Index n = dimension_;
      y.resize(n);
      for (Index i = 0; i < n; ++i) {
        Complex acc = (tri_diag_[i] + shift_) * x[i];
        if (i > 0) acc += tri_sub_[i - 1] * x[i - 1];
        if (i + 1 < n) acc += tri_sub_[i] * x[i + 1];
        y[i] = acc;
      }
      return;
    }
  }
}

void HamiltonianOperator::apply_real(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  switch (rep_) {
    case OperatorRep::SparseComputational:
      y = sparse_ * x;
      return;
    case OperatorRep::TridiagonalSymmetric: {
      const Index n = dimension_;
      y.resize(n);
      for (Index i = 0; i < n; ++i) {
        double acc = (tri_diag_[i] + shift_) * x[i];
        if (i > 0) acc += tri_sub_[i - 1] * x[i - 1];
        if (i + 1 < n) acc += tri_sub_[i] * x[i + 1];
        y[i] = acc;
      }
      return;
    }
    case OperatorRep::DiagonalWithBasis:
      y = spectrum_.cwiseProduct(x);
      return;
    case OperatorRep::Dense:
      throw Error("apply_real is not available for dense complex operators");
  }
}

void HamiltonianOperator::group_from_spectrum(bool exact_only) {
  const Index n = dimension_;
  norm_scale_ = std::max(std::abs(spectrum_[0]), std::abs(spectrum_[n - 1]));
  const double tol = exact_only ? 0.0 : degeneracy_tolerance(norm_scale_);

  Index g = 1;
  while (g < n && spectrum_[g] - spectrum_[0] <= tol) ++g;
  ground_.degeneracy = static_cast<int>(g);
  ground_.energy = spectrum_[0];
  ground_.gap_to_next = (g < n) ? spectrum_[g] - spectrum_[0] : 0.0;

  Index a = 1;
  while (a < n && spectrum_[n - 1] - spectrum_[n - 1 - a] <= tol) ++a;
  anti_.degeneracy = static_cast<int>(a);
  anti_.energy = spectrum_[n - 1];
  anti_.gap_to_next = (a < n) ? spectrum_[n - 1] - spectrum_[n - 1 - a] : 0.0;
}

void HamiltonianOperator::resolve_dense(bool exact_only) {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  hermitian_eigen(dense_, values, &vectors);
  const double e0 = -values[0];
  shift_ = e0;
  spectrum_ = values.array() + e0;
  dense_.diagonal().array() += e0;
  group_from_spectrum(exact_only);
  ground_.basis = vectors.leftCols(ground_.degeneracy);
  anti_.basis = vectors.rightCols(anti_.degeneracy);
}

void HamiltonianOperator::resolve_sparse_full(bool exact_only) {
  Eigen::MatrixXd dense = Eigen::MatrixXd(sparse_);
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  symmetric_eigen(dense, values, &vectors);
  const double e0 = -values[0];
  shift_ = e0;
  spectrum_ = values.array() + e0;
  Eigen::SparseMatrix<double> ident(dimension_, dimension_);
  ident.setIdentity();
  sparse_ = (sparse_ + e0 * ident).pruned();
  sparse_.makeCompressed();
  group_from_spectrum(exact_only);
  ground_.basis = vectors.leftCols(ground_.degeneracy).cast<Complex>();
  anti_.basis = vectors.rightCols(anti_.degeneracy).cast<Complex>();
}

void HamiltonianOperator::resolve_sparse_extremal(bool exact_only) {
  // Lanczos at both spectral edges; degeneracy resolved by sequential
  // deflation until the next eigenvalue falls outside the grouping tolerance.
  auto matvec = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = sparse_ * x; };
  auto neg_matvec = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = -(sparse_ * x); };

  double row_scale = 0.0;
  for (int k = 0; k < sparse_.outerSize(); ++k) {
    double row = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(sparse_, k); it; ++it)
      row += std::abs(it.value());
    row_scale = std::max(row_scale, row);
  }

  LanczosOptions opt;
  opt.n_pairs = extremal_pairs_hint_;
  LanczosResult lo = lanczos_smallest(dimension_, matvec, row_scale, opt);
  opt.seed += 1;
  LanczosResult hi = lanczos_smallest(dimension_, neg_matvec, row_scale, opt);
  if (!lo.converged || !hi.converged)
    throw NumericalError("extremal eigensolver did not converge");

  const double e_min = lo.values[0];
  const double e_max = -hi.values[0];
  shift_ = -e_min;
  norm_scale_ = e_max - e_min;
  Eigen::SparseMatrix<double> ident(dimension_, dimension_);
  ident.setIdentity();
  sparse_ = (sparse_ + shift_ * ident).pruned();
  sparse_.makeCompressed();

  const double tol = exact_only ? 0.0 : degeneracy_tolerance(norm_scale_);
  auto fill = [&](const LanczosResult& r, double sign, GroundSpaceInfo& info, double edge) {
    int deg = 1;
    while (deg < r.values.size() && std::abs(sign * r.values[deg] - edge) <= tol) ++deg;
    info.degeneracy = deg;
    info.energy = edge + shift_;
    info.gap_to_next =
        (deg < r.values.size()) ? std::abs(sign * r.values[deg] - edge) : 0.0;
    info.basis = r.vectors.leftCols(deg).cast<Complex>();
  };
  fill(lo, 1.0, ground_, e_min);
  fill(hi, -1.0, anti_, e_max);
}

void HamiltonianOperator::resolve_tridiagonal(bool exact_only, bool want_vectors) {
  if (want_vectors && dimension_ <= kFullDiagonalizationLimit) {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    tridiagonal_eigen(tri_diag_, tri_sub_, values, vectors);
    shift_ = -values[0];
    spectrum_ = values.array() + shift_;
    group_from_spectrum(exact_only);
    ground_.basis = vectors.leftCols(ground_.degeneracy).cast<Complex>();
    anti_.basis = vectors.rightCols(anti_.degeneracy).cast<Complex>();
  } else {
    Eigen::VectorXd values = tridiagonal_eigenvalues(tri_diag_, tri_sub_);
    shift_ = -values[0];
    spectrum_ = values.array() + shift_;
    group_from_spectrum(exact_only);
  }
}

void HamiltonianOperator::resolve(ResolveMode mode, bool exact_degeneracy_only) {
  if (resolved_) return;
  bool full = mode == ResolveMode::Full ||
              (mode == ResolveMode::Auto && dimension_ <= kFullDiagonalizationLimit);
  switch (rep_) {
    case OperatorRep::Dense:
      resolve_dense(exact_degeneracy_only);
      break;
    case OperatorRep::SparseComputational:
      if (full)
        resolve_sparse_full(exact_degeneracy_only);
      else
        resolve_sparse_extremal(exact_degeneracy_only);
      break;
    case OperatorRep::TridiagonalSymmetric:
      resolve_tridiagonal(exact_degeneracy_only, full);
      break;
    case OperatorRep::DiagonalWithBasis: {
      const double e0 = -spectrum_[0];
      shift_ = e0;
      spectrum_.array() += e0;
      group_from_spectrum(exact_degeneracy_only);
      break;
    }
  }
  resolved_ = true;
}

void HamiltonianOperator::set_ground_space_basis(const Eigen::MatrixXcd& raw_basis) {
  if (!resolved_) throw Error("resolve the operator before overriding the ground space");
  Eigen::MatrixXcd q = orthonormalize(raw_basis);
  // verify H q = E q within 1e-8 |H|
  Eigen::VectorXcd hq(dimension_);
  for (Index c = 0; c < q.cols(); ++c) {
    Eigen::VectorXcd col = q.col(c);
    apply(col, hq);
    double resid = (hq - ground_.energy * col).norm();
    if (resid > 1e-8 * std::max(norm_scale_, 1.0))
      throw NumericalError("ground-space override basis is not an eigenbasis");
  }
  ground_.basis = q;
  ground_.degeneracy = static_cast<int>(q.cols());
}

SpectralMoments spectral_moments(const HamiltonianOperator& h, int n_max) {
  if (n_max < 2) throw std::invalid_argument("n_max must be >= 2");
  SpectralMoments m;
  m.sites = h.sites();
  m.n_max = n_max;

  if (h.has_spectrum()) {
    const Eigen::VectorXd& e = h.spectrum();
    const double v = static_cast<double>(h.sites());
    Eigen::ArrayXd eps = e.array() / v;
    m.eps_infinity = eps.mean();
    Eigen::ArrayXd d = eps - m.eps_infinity;
    m.central_moments.resize(n_max - 1);
    Eigen::ArrayXd p = d;
    for (int n = 2; n <= n_max; ++n) {
      p *= d;
      m.central_moments[n - 2] = p.mean();
    }
    m.s2 = v * m.central_moments[0];
  } else if (!h.pauli_coefficients().empty()) {
    m.eps_infinity = h.mean_energy_density();
    m.s2 = pauli_s2(h.pauli_coefficients(), h.sites());
    m.n_max = 2;
    m.central_moments = {m.s2 / static_cast<double>(h.sites())};
  } else {
    throw Error("spectral moments require a spectrum or Pauli coefficients");
  }

  if (!h.pauli_coefficients().empty() && h.has_spectrum()) {
    double s2p = pauli_s2(h.pauli_coefficients(), h.sites());
    if (std::abs(m.s2 - s2p) > 1e-10 * std::max(1.0, std::abs(s2p)))
      throw NumericalError("Pauli-coefficient s^2 disagrees with spectral s^2");
  }
  return m;
}

double pauli_s2(const std::vector<double>& coefficients, int sites) {
  double acc = 0.0;
  for (double c : coefficients) acc += c * c;
  return acc / static_cast<double>(sites);
}

StateVector haar_random_state(Index dimension, Rng& rng) {
  if (dimension < 2) throw std::invalid_argument("invalid dimension: need N >= 2");
  if (!is_power_of_two(dimension))
    throw std::invalid_argument("invalid dimension: N must be a power of two");
  std::normal_distribution<double> gauss;
  StateVector psi;
  psi.sites = site_count_for(dimension);
  psi.amplitudes.resize(dimension);
  for (Index i = 0; i < dimension; ++i) psi.amplitudes[i] = Complex(gauss(rng), gauss(rng));
  psi.amplitudes /= psi.amplitudes.norm();
  return psi;
}

double energy_expectation(const HamiltonianOperator& h, const StateVector& psi) {
  if (psi.dimension() != h.dimension())
    throw std::invalid_argument("state and operator dimensions differ");
  Eigen::VectorXcd hpsi;
  h.apply(psi.amplitudes, hpsi);
  Complex e = psi.amplitudes.dot(hpsi);
  double scale = h.resolved() ? std::max(h.norm_scale(), 1.0) : 1.0;
  if (std::abs(e.imag()) > 1e-10 * scale)
    throw NonHermitianError("energy expectation has a nonreal residue");
  return e.real();
}

double energy_expectation_diagonal(const Eigen::VectorXd& energies,
                                   const Eigen::VectorXcd& amplitudes) {
  return (energies.array() * amplitudes.array().abs2()).sum();
}

std::optional<Eigen::VectorXcd> energy_gradient_tangent_diagonal(
    const Eigen::VectorXd& energies, const Eigen::VectorXcd& amplitudes, double energy,
    double norm_scale) {
  Eigen::VectorXcd n =
      ((energies.array() - energy) * amplitudes.array()).matrix();
  n -= amplitudes.dot(n) * amplitudes;
  double len = n.norm();
  if (len < 1e-14 * std::max(norm_scale, 1.0)) return std::nullopt;
  n /= len;
  return n;
}

std::optional<StateVector> energy_gradient_tangent(const HamiltonianOperator& h,
                                                   const StateVector& psi) {
  Eigen::VectorXcd hpsi;
  h.apply(psi.amplitudes, hpsi);
  double e = psi.amplitudes.dot(hpsi).real();
  Eigen::VectorXcd n = hpsi - e * psi.amplitudes;
  n -= psi.amplitudes.dot(n) * psi.amplitudes;
  double len = n.norm();
  double scale = h.resolved() ? std::max(h.norm_scale(), 1.0) : 1.0;
  if (len < 1e-14 * scale) return std::nullopt;
  StateVector out;
  out.sites = psi.sites;
  out.amplitudes = n / len;
  return out;
}

}  // namespace eigencond
