#include <doctest.h>

#include <Eigen/Dense>

#include "eigencond/ensemble.hpp"
#include "eigencond/models.hpp"
#include "test_support.hpp"

using namespace eigencond;
namespace et = eigencond::testing;

namespace {

Eigen::VectorXd random_spectrum(Index n, Rng& rng, double span = 10.0) {
  std::uniform_real_distribution<double> u(0.0, span);
  Eigen::VectorXd e(n);
  e[0] = 0.0;
  for (Index a = 1; a < n; ++a) e[a] = u(rng);
  std::sort(e.data(), e.data() + n);
  return e;
}

}  // namespace

TEST_CASE("typical weights: uniform at beta = 0 and two-level arithmetic") {
  Eigen::VectorXd e(4);
  e << 0, 1, 2, 3;
  Eigen::VectorXd w0 = typical_weights(e, 0.0);
  for (Index a = 0; a < 4; ++a) CHECK(w0[a] == doctest::Approx(0.25).epsilon(1e-14));

  Eigen::VectorXd two(2);
  two << 0, 1;
  Eigen::VectorXd w = typical_weights(two, 1.0);
  CHECK(w[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("typical weights: dominant pole and normalization invariant") {
  Rng rng = make_rng(7);
  Eigen::VectorXd e = random_spectrum(64, rng);
  for (double beta : {-0.05, 0.0, 0.3, 10.0, 1e6}) {
    Eigen::VectorXd w = typical_weights(e, beta);
    CHECK(std::abs(w.sum() - 1.0) < 1e-12);
    CHECK(w.minCoeff() > 0.0);
  }
  Eigen::VectorXd w = typical_weights(e, 1e9);
  CHECK(w[0] > 0.999);  // nondegenerate ground state dominates

  CHECK_THROWS_AS((void)typical_weights(e, -2.0 / e[63]), InvalidBetaError);
}

TEST_CASE("ensemble energy is strictly decreasing in beta") {
  Rng rng = make_rng(8);
  Eigen::VectorXd e = random_spectrum(32, rng);
  double previous = 1e300;
  for (int k = 0; k < 60; ++k) {
    double beta = std::pow(10.0, -3.0 + 0.1 * k);
    double energy = ensemble_energy(e, beta);
    CHECK(energy < previous);
    previous = energy;
  }
}

TEST_CASE("solve_beta_for_energy: midpoint, substitution residual, round trip") {
  Eigen::VectorXd e(4);
  e << 0, 1, 2, 3;
  // mean energy at beta = 0
  CHECK(std::abs(solve_beta_for_energy(e, 1.5)) < 1e-9);

  double beta = solve_beta_for_energy(e, 1.0);
  double z = 0, ze = 0;
  for (Index a = 0; a < 4; ++a) {
    z += 1.0 / (1.0 + beta * e[a]);
    ze += e[a] / (1.0 + beta * e[a]);
  }
  CHECK(std::abs(ze / z - 1.0) < 1e-10);

  Rng rng = make_rng(9);
  Eigen::VectorXd spectrum = random_spectrum(64, rng);
  for (double target_beta : {-0.05, 0.01, 1.0, 50.0}) {
    double energy = ensemble_energy(spectrum, target_beta);
    double recovered = solve_beta_for_energy(spectrum, energy);
    CHECK(ensemble_energy(spectrum, recovered) ==
          doctest::Approx(energy).epsilon(1e-9));
  }

  CHECK_THROWS_AS((void)solve_beta_for_energy(e, -0.5), OutOfRangeError);
  CHECK_THROWS_AS((void)solve_beta_for_energy(e, 3.5), OutOfRangeError);
}

TEST_CASE("free-fermion beta solve agrees with the spectral route") {
  FreeFermionSpectrum ff = jordan_wigner_spectrum(8, 1.0, 5.0);
  Eigen::VectorXd mb = ff.many_body_spectrum();
  for (double frac : {0.35, 0.6}) {
    double e_av = frac * ff.mean_energy();
    double b_ff = solve_beta_for_energy(ff, e_av);
    double b_sp = solve_beta_for_energy(mb, e_av);
    CHECK(b_ff == doctest::Approx(b_sp).epsilon(1e-6));
  }
  // reflected side maps through the pole
  double e_hi = 1.6 * ff.mean_energy();
  double b = solve_beta_for_energy(ff, e_hi);
  CHECK(b < 0.0);
  CHECK(ensemble_energy(mb, b) == doctest::Approx(e_hi).epsilon(1e-8));
}

TEST_CASE("eigenstate condensation: p_gs tracks 1 - E/E_c below the transition") {
  HamiltonianOperator op = [] {
    ModelSpec spec;
    spec.family = ModelFamily::Tfim1D;
    spec.sites = 10;
    spec.parameters["h_x"] = 5.0;
    return build_tfim(spec);
  }();
  const Eigen::VectorXd& e = op.spectrum();
  double inv_sum = 0.0;
  for (Index a = 1; a < e.size(); ++a) inv_sum += 1.0 / e[a];
  double e_c = static_cast<double>(e.size() - 1) / inv_sum;

  // just above E_c the ground weight is small
  double beta_above = solve_beta_for_energy(e, 1.1 * e_c);
  CHECK(typical_weights(e, beta_above)[0] < 0.05);

  // well below E_c it follows the linear law within 5%
  for (double frac : {0.5, 0.7}) {
    double e_av = frac * e_c;
    double beta = solve_beta_for_energy(e, e_av);
    double p_gs = typical_weights(e, beta)[0];
    CHECK(p_gs == doctest::Approx(1.0 - e_av / e_c).epsilon(0.05));
  }
}

TEST_CASE("bulk energy: uniform limit, monotone decrease, lower bound") {
  HamiltonianOperator op = [] {
    ModelSpec spec;
    spec.family = ModelFamily::Tfim1D;
    spec.sites = 8;
    spec.parameters["h_x"] = 5.0;
    return build_tfim(spec);
  }();
  const Eigen::VectorXd& e = op.spectrum();
  const Index deg = op.ground_space().degeneracy;

  double bulk_mean = e.tail(e.size() - deg).mean();
  CHECK(bulk_energy(e, deg, 0.0) == doctest::Approx(bulk_mean).epsilon(1e-12));

  double inv_sum = 0.0;
  for (Index a = deg; a < e.size(); ++a) inv_sum += 1.0 / e[a];
  double e_c = static_cast<double>(e.size() - deg) / inv_sum;

  double previous = 1e300;
  for (int k = 0; k < 100; ++k) {
    double beta = std::pow(10.0, -4.0 + 0.1 * k);
    double value = bulk_energy(e, deg, beta);
    CHECK(value < previous);      // monotone decreasing
    CHECK(value >= e_c - 1e-9);   // bounded below by E_c-
    previous = value;
  }
  CHECK(bulk_energy(e, deg, 1e12) == doctest::Approx(e_c).epsilon(1e-6));
}

TEST_CASE("moment expansion limits") {
  SpectralMoments m;
  m.sites = 10;
  m.eps_infinity = 2.0;
  m.s2 = 0.0;
  CriticalDensityPair pair = critical_energy_moment_expansion(m, 4.0);
  CHECK(pair.minus == doctest::Approx(2.0));
  CHECK(pair.plus == doctest::Approx(2.0));

  m.s2 = 1.0;
  pair = critical_energy_moment_expansion(m, 4.0);
  CHECK(pair.minus < m.eps_infinity);
  CHECK(pair.plus > m.eps_infinity);
}

TEST_CASE("moment expansion within 2% of the free-fermion inversion at V=20") {
  const int v = 20;
  FreeFermionSpectrum ff = jordan_wigner_spectrum(v, 1.0, 5.0);
  SpectralMoments m;
  m.sites = v;
  m.eps_infinity = ff.mean_energy() / v;
  m.s2 = ff.s2();
  CriticalDensityPair pair = critical_energy_moment_expansion(m, ff.total_energy() / v);
  double eps_c_exact = free_fermion_critical_energy(ff) / v;
  CHECK(pair.minus == doctest::Approx(eps_c_exact).epsilon(0.02));
  // subset-sum spectra are reflection symmetric, so eps_c+ mirrors eps_c-
  double eps_c_plus_exact = ff.total_energy() / v - eps_c_exact;
  CHECK(pair.plus == doctest::Approx(eps_c_plus_exact).epsilon(0.02));
}

TEST_CASE("scaling function identities") {
  CHECK(scaling_f(0.0) == doctest::Approx(1.0));
  for (double eta : {-7.3, -1.0, 0.4, 2.0, 9.9})
    CHECK(scaling_f(eta) * scaling_f(-eta) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scaling transform hits f(0) = 1 at the critical energy") {
  const int v = 12;
  FreeFermionSpectrum ff = jordan_wigner_spectrum(v, 1.0, 5.0);
  SpectralMoments m;
  m.sites = v;
  m.eps_infinity = ff.mean_energy() / v;
  m.s2 = ff.s2();
  double eps_c = free_fermion_critical_energy(ff) / v;

  double beta_c = solve_beta_for_energy(ff, eps_c * v);
  EnsembleCurve curve;
  curve.sites = v;
  EnsembleCurveRow row;
  row.beta = beta_c;
  row.z = stable_z(ff, beta_c);
  row.e_av = stable_ze(ff, beta_c) / row.z;
  row.p_gs = 1.0 / row.z;
  curve.rows.push_back(row);
  std::vector<ScalingPoint> pts = scaling_transform(curve, m, eps_c);
  CHECK(std::abs(pts[0].eta) < 1e-4);
  CHECK(pts[0].p_gs_rescaled == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("near-degeneracy analysis") {
  // split doublet below a well-separated bulk
  Eigen::VectorXd e(6);
  double delta = 1e-4;
  e << 0.0, delta, 1.0, 1.5, 2.0, 2.5;
  Eigen::VectorXd grid = default_beta_grid(6.0, 200);
  NearDegeneracyReport report = near_degeneracy_curve(e, grid, 2);

  double inv2 = 1.0 / 1.0 + 1.0 / 1.5 + 1.0 / 2.0 + 1.0 / 2.5;
  CHECK(report.e_c1 == doctest::Approx(4.0 / inv2).epsilon(1e-12));
  CHECK(report.e_c0 == doctest::Approx(5.0 / (inv2 + 1.0 / delta)).epsilon(1e-12));
  CHECK(report.delta == doctest::Approx(delta));

  // intermediate regime: equal weight on the two nearly degenerate states
  for (const auto& row : report.curve.rows) {
    REQUIRE(row.p_1.has_value());
    if (row.e_av < 0.6 * report.e_c1 && row.e_av > 10.0 * report.e_c0)
      CHECK(row.p_gs == doctest::Approx(*row.p_1).epsilon(0.02));
  }

  // delta = 0 gives p_gs = p_1 for every beta
  Eigen::VectorXd merged(6);
  merged << 0.0, 0.0, 1.0, 1.5, 2.0, 2.5;
  NearDegeneracyReport symmetric = near_degeneracy_curve(merged, grid, 2);
  for (const auto& row : symmetric.curve.rows)
    CHECK(row.p_gs == doctest::Approx(*row.p_1).epsilon(1e-12));

  // a large splitting shrinks the intermediate regime
  Eigen::VectorXd wide(6);
  wide << 0.0, 0.5, 1.0, 1.5, 2.0, 2.5;
  NearDegeneracyReport narrow = near_degeneracy_curve(wide, grid, 2);
  CHECK(narrow.e_c1 - narrow.e_c0 < report.e_c1 - report.e_c0);
}

TEST_CASE("default beta grid spans the documented range") {
  Eigen::VectorXd grid = default_beta_grid(1024.0);
  CHECK(grid.size() == 400);
  CHECK(grid[0] == doctest::Approx(1e-6).epsilon(1e-9));
  CHECK(grid[399] == doctest::Approx(1e3 * 1024.0).epsilon(1e-9));
  for (int i = 1; i < 400; ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("spectral curves conserve probability") {
  Rng rng = make_rng(10);
  Eigen::VectorXd e = random_spectrum(32, rng);
  Eigen::VectorXd grid = default_beta_grid(32.0, 50);
  EnsembleCurve curve = build_curve_spectral(e, 1, 1, grid, 5);
  for (const auto& row : curve.rows) {
    // p_gs = 1/Z with a nondegenerate shifted ground state
    CHECK(row.p_gs == doctest::Approx(1.0 / row.z).epsilon(1e-12));
    CHECK(row.p_gs + row.p_anti_gs <= 1.0 + 1e-12);
  }
}
