#include <doctest.h>

#include <Eigen/Dense>

#include "eigencond/freefermion.hpp"
#include "eigencond/linalg.hpp"
#include "eigencond/models.hpp"
#include "test_support.hpp"

using namespace eigencond;
namespace et = eigencond::testing;

namespace {

ModelSpec tfim1d(int sites, double hx) {
  ModelSpec spec;
  spec.family = ModelFamily::Tfim1D;
  spec.sites = sites;
  spec.parameters["h_x"] = hx;
  return spec;
}

// dense oracle for the spin chains, built from explicit Pauli matrices in the
// library's bit ordering
Eigen::MatrixXcd dense_ising(int sites, double j, double hx, double hz) {
  const Index n = Index(1) << sites;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a + 1 < sites; ++a)
    h += j * et::bit_ordered_pauli(sites, {{a, 'Z'}, {a + 1, 'Z'}});
  for (int a = 0; a < sites; ++a) {
    if (hx != 0.0) h += hx * et::bit_ordered_pauli(sites, {{a, 'X'}});
    if (hz != 0.0) h += hz * et::bit_ordered_pauli(sites, {{a, 'Z'}});
  }
  return h;
}

}  // namespace

TEST_CASE("TFIM V=2 matches the dense 4x4 oracle") {
  HamiltonianOperator op = build_tfim(tfim1d(2, 5.0));
  Eigen::MatrixXcd dense = dense_ising(2, 1.0, 5.0, 0.0);
  Eigen::VectorXd values;
  hermitian_eigen(dense, values, nullptr);
  for (Index a = 0; a < 4; ++a)
    CHECK(op.spectrum()[a] == doctest::Approx(values[a] - values[0]).epsilon(1e-12));
  CHECK(op.shift() == doctest::Approx(-values[0]));
}

TEST_CASE("TFIM s^2 matches the coefficient formula") {
  HamiltonianOperator op = build_tfim(tfim1d(10, 5.0));
  SpectralMoments m = spectral_moments(op);
  CHECK(m.s2 == doctest::Approx(25.9).epsilon(1e-10));
}

TEST_CASE("ferromagnetic TFIM has an exponentially split doublet") {
  ModelSpec spec = tfim1d(11, 0.2);
  HamiltonianOperator op = build_tfim(spec);
  const Eigen::VectorXd& e = op.spectrum();
  double delta = e[1] - e[0];
  double e_inf = op.mean_energy();
  double n = static_cast<double>(op.dimension());
  CHECK(delta > 0.0);
  CHECK(delta < e_inf / n);
  // splitting tracks h^V up to a polynomial prefactor
  double h_pow = std::pow(0.2, 11);
  CHECK(delta > 1e-3 * h_pow);
  CHECK(delta < 1e3 * h_pow);
}

TEST_CASE("TFIM rejects missing h_x and bad lattices") {
  ModelSpec spec;
  spec.family = ModelFamily::Tfim1D;
  spec.sites = 4;
  CHECK_THROWS_AS((void)build_tfim(spec), std::invalid_argument);

  ModelSpec spec2d;
  spec2d.family = ModelFamily::Tfim2D;
  spec2d.sites = 7;  // prime: no Lx x Ly with both sides >= 2
  spec2d.parameters["h_x"] = 10.0;
  CHECK_THROWS_AS((void)build_tfim(spec2d), LatticeError);

  ModelSpec mismatched;
  mismatched.family = ModelFamily::Tfim2D;
  mismatched.sites = 6;
  mismatched.parameters = {{"h_x", 10.0}, {"Lx", 2.0}, {"Ly", 2.0}};
  CHECK_THROWS_AS((void)build_tfim(mismatched), LatticeError);
}

TEST_CASE("2D TFIM edge count and spectrum sanity") {
  ModelSpec spec;
  spec.family = ModelFamily::Tfim2D;
  spec.sites = 6;
  spec.parameters = {{"h_x", 10.0}, {"Lx", 3.0}, {"Ly", 2.0}};
  auto edges = lattice_edges(ModelFamily::Tfim2D, 6, 3, 2, Boundary::Open);
  CHECK(edges.size() == 7);  // 4 horizontal + 3 vertical
  HamiltonianOperator op = build_tfim(spec);
  SpectralMoments m = spectral_moments(op);
  CHECK(m.s2 == doctest::Approx((7.0 + 6.0 * 100.0) / 6.0).epsilon(1e-10));
}

TEST_CASE("MFIM V=2 matches the dense oracle and defaults") {
  ModelSpec spec;
  spec.family = ModelFamily::Mfim1D;
  spec.sites = 2;
  HamiltonianOperator op = build_mfim(spec);
  Eigen::MatrixXcd dense = dense_ising(2, 1.0, 1.4, 0.9045);
  Eigen::VectorXd values;
  hermitian_eigen(dense, values, nullptr);
  for (Index a = 0; a < 4; ++a)
    CHECK(op.spectrum()[a] == doctest::Approx(values[a] - values[0]).epsilon(1e-12));
}

TEST_CASE("MFIM s^2 at the standard parameters") {
  ModelSpec spec;
  spec.family = ModelFamily::Mfim1D;
  spec.sites = 10;
  HamiltonianOperator op = build_mfim(spec);
  SpectralMoments m = spectral_moments(op);
  CHECK(m.s2 == doctest::Approx(0.9 + 1.4 * 1.4 + 0.9045 * 0.9045).epsilon(1e-12));
}

TEST_CASE("classical Ising limit has a twofold ground space") {
  ModelSpec spec;
  spec.family = ModelFamily::Mfim1D;
  spec.sites = 5;
  spec.parameters = {{"h_x", 0.0}, {"h_z", 0.0}};
  HamiltonianOperator op = build_mfim(spec);
  CHECK(op.ground_space().degeneracy == 2);
}

TEST_CASE("Heisenberg ground space: degeneracy V+1 and raising-operator span") {
  ModelSpec spec;
  spec.family = ModelFamily::Heisenberg1D;
  spec.sites = 4;
  HamiltonianOperator op = build_heisenberg(spec);
  CHECK(op.ground_space().degeneracy == 5);
  CHECK(op.ground_space().energy == doctest::Approx(0.0).epsilon(1e-12));

  // numeric eigenspace from an independent dense diagonalization
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(16, 16);
  for (int a = 0; a < 4; ++a) {
    int b = (a + 1) % 4;
    for (char p : {'X', 'Y', 'Z'})
      dense -= et::bit_ordered_pauli(4, {{a, p}, {b, p}});
  }
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  hermitian_eigen(dense, values, &vectors);
  CHECK(values[4] - values[0] < 1e-10);
  CHECK(values[5] - values[0] > 1e-10);
  double angle = et::max_principal_angle(vectors.leftCols(5), op.ground_space().basis);
  CHECK(angle < 1e-8);
}

TEST_CASE("Heisenberg s^2 = 3 and odd-chain anti-ground degeneracy") {
  for (int v : {4, 5, 6}) {
    ModelSpec spec;
    spec.family = ModelFamily::Heisenberg1D;
    spec.sites = v;
    HamiltonianOperator op = build_heisenberg(spec);
    SpectralMoments m = spectral_moments(op);
    CHECK(m.s2 == doctest::Approx(3.0).epsilon(1e-10));
    if (v == 5) CHECK(op.anti_ground_space().degeneracy == 4);
    if (v == 4) CHECK(op.anti_ground_space().degeneracy == 1);
    if (v == 6) CHECK(op.anti_ground_space().degeneracy == 1);
  }
}

TEST_CASE("Heisenberg ground space is closed under the total raising operator") {
  ModelSpec spec;
  spec.family = ModelFamily::Heisenberg1D;
  spec.sites = 5;
  HamiltonianOperator op = build_heisenberg(spec);
  const Eigen::MatrixXcd& basis = op.ground_space().basis;
  const Index n = op.dimension();
  // S+_tot in the computational basis
  Eigen::MatrixXcd raise = Eigen::MatrixXcd::Zero(n, n);
  for (Index s = 0; s < n; ++s)
    for (int a = 0; a < 5; ++a)
      if ((s >> a) & 1) raise(s ^ (Index(1) << a), s) += 1.0;
  // [H, S+] vanishes on the ground space: H (S+ g) = E (S+ g)
  for (Index c = 0; c < basis.cols(); ++c) {
    Eigen::VectorXcd raised = raise * basis.col(c);
    if (raised.norm() < 1e-12) continue;
    raised /= raised.norm();
    Eigen::VectorXcd h_raised;
    op.apply(raised, h_raised);
    CHECK((h_raised - op.ground_space().energy * raised).norm() < 1e-10 * op.norm_scale());
  }
}

TEST_CASE("GbE tridiagonal construction and determinism") {
  ModelSpec spec;
  spec.family = ModelFamily::Goe;
  spec.sites = 6;
  spec.seed = 42;
  HamiltonianOperator a = build_gaussian_ensemble(spec);
  HamiltonianOperator b = build_gaussian_ensemble(spec);
  CHECK(a.representation() == OperatorRep::TridiagonalSymmetric);
  CHECK((a.spectrum() - b.spectrum()).norm() == 0.0);  // identical seeds, identical output

  spec.seed = 43;
  HamiltonianOperator c = build_gaussian_ensemble(spec);
  CHECK((a.spectrum() - c.spectrum()).norm() > 0.0);
}

TEST_CASE("GbE spectra carry the semicircle variance") {
  // semicircle of radius V has energy-density variance mu_2(eps) = 1/4
  for (int v : {6, 8}) {
    double acc = 0.0;
    int draws = 24;
    for (int k = 0; k < draws; ++k) {
      ModelSpec spec;
      spec.family = ModelFamily::Goe;
      spec.sites = v;
      spec.seed = 100 + k;
      HamiltonianOperator h = build_gaussian_ensemble(spec, ResolveMode::ExtremalOnly);
      SpectralMoments m = spectral_moments(h);
      acc += m.s2 / v;  // mu_2(eps)
    }
    acc /= draws;
    CHECK(acc == doctest::Approx(0.25).epsilon(0.05));
  }
}

TEST_CASE("GUE subdiagonal uses beta = 2 statistics") {
  // chi_{beta j} has mean sqrt(2) Gamma((k+1)/2)/Gamma(k/2) ~ sqrt(k); the
  // top subdiagonal entry (largest dof) concentrates tightly, so the scaled
  // value should sit near V/(2 sqrt(N beta)) * sqrt(beta (N-1)) ~ V/2
  const int v = 8;
  const Index n = Index(1) << v;
  double acc_goe = 0.0, acc_gue = 0.0;
  const int draws = 50;
  for (int k = 0; k < draws; ++k) {
    ModelSpec spec;
    spec.sites = v;
    spec.seed = 500 + k;
    spec.family = ModelFamily::Goe;
    HamiltonianOperator goe = build_gaussian_ensemble(spec, ResolveMode::ExtremalOnly);
    spec.family = ModelFamily::Gue;
    HamiltonianOperator gue = build_gaussian_ensemble(spec, ResolveMode::ExtremalOnly);
    acc_goe += goe.spectrum()[n - 1] - goe.spectrum()[0];
    acc_gue += gue.spectrum()[n - 1] - gue.spectrum()[0];
  }
  // both ensembles share the same semicircle support [-V, V]
  CHECK(acc_goe / draws == doctest::Approx(2.0 * v).epsilon(0.1));
  CHECK(acc_gue / draws == doctest::Approx(2.0 * v).epsilon(0.1));
}

TEST_CASE("GbE statistics are invariant under seed permutation") {
  const int v = 6, draws = 100;
  std::vector<double> first, second;
  for (int k = 0; k < draws; ++k) {
    ModelSpec spec;
    spec.family = ModelFamily::Goe;
    spec.sites = v;
    spec.seed = 1000 + k;
    HamiltonianOperator h = build_gaussian_ensemble(spec, ResolveMode::ExtremalOnly);
    first.push_back(h.max_energy());
    spec.seed = 9000 + k;
    HamiltonianOperator g = build_gaussian_ensemble(spec, ResolveMode::ExtremalOnly);
    second.push_back(g.max_energy());
  }
  double d = et::ks_statistic(first, second);
  CHECK(et::ks_p_value(d, first.size(), second.size()) > 0.01);
}

TEST_CASE("free-fermion spectrum reproduces the many-body TFIM spectrum") {
  for (int v : {3, 5, 8}) {
    HamiltonianOperator op = build_tfim(tfim1d(v, 5.0));
    FreeFermionSpectrum ff = jordan_wigner_spectrum(v, 1.0, 5.0);
    Eigen::VectorXd mb = ff.many_body_spectrum();
    REQUIRE(mb.size() == op.dimension());
    for (Index a = 0; a < mb.size(); ++a)
      CHECK(std::abs(mb[a] - op.spectrum()[a]) < 1e-8);
  }
}

TEST_CASE("even central moments scale like V^{-n/2}") {
  // mu_n(eps) * V^{n/2} stays bounded within a factor of 2 across sizes
  std::vector<double> scaled2, scaled4;
  for (int v : {8, 10, 12}) {
    FreeFermionSpectrum ff = jordan_wigner_spectrum(v, 1.0, 5.0);
    HamiltonianOperator op = HamiltonianOperator::from_spectrum(v, ff.many_body_spectrum());
    op.resolve();
    SpectralMoments m = spectral_moments(op, 4);
    scaled2.push_back(m.central_moments[0] * v);
    scaled4.push_back(m.central_moments[2] * v * v);
  }
  for (auto& series : {scaled2, scaled4}) {
    double lo = *std::min_element(series.begin(), series.end());
    double hi = *std::max_element(series.begin(), series.end());
    CHECK(hi / lo < 2.0);
  }
}
