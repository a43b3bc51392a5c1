#include <doctest.h>

#include <Eigen/Dense>

#include "eigencond/ensemble.hpp"
#include "eigencond/models.hpp"
#include "eigencond/sampler.hpp"
#include "test_support.hpp"

using namespace eigencond;
namespace et = eigencond::testing;

namespace {

ModelSpec paramagnet(int sites, double h = 1.0) {
  ModelSpec spec;
  spec.family = ModelFamily::Mfim1D;
  spec.sites = sites;
  spec.parameters = {{"J", 0.0}, {"h_x", h}, {"h_z", 0.0}};
  return spec;
}

}  // namespace

TEST_CASE("two-plane rotation: quarter period sends psi to -i v") {
  Rng rng = make_rng(30);
  Eigen::VectorXcd psi = haar_random_state(8, rng).amplitudes;
  Eigen::VectorXcd v = haar_random_state(8, rng).amplitudes;
  v -= psi.dot(v) * psi;
  v /= v.norm();
  Eigen::VectorXcd psi0 = psi, v0 = v;
  two_plane_rotate(psi, v, M_PI / 2.0);
  CHECK((psi - Complex(0, -1) * v0).norm() < 1e-12);
  CHECK((v - Complex(0, -1) * psi0).norm() < 1e-12);
}

TEST_CASE("two-plane rotation matches the dense matrix exponential") {
  Rng rng = make_rng(31);
  const Index n = 4;
  Eigen::VectorXcd psi = haar_random_state(n, rng).amplitudes;
  Eigen::VectorXcd v = haar_random_state(n, rng).amplitudes;
  v -= psi.dot(v) * psi;
  v /= v.norm();

  const double theta = 0.3;
  // dense oracle: exp(-i F theta) with F = |psi><v| + |v><psi|, via the
  // Hermitian eigendecomposition of F
  Eigen::MatrixXcd f = psi * v.adjoint() + v * psi.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(f);
  Eigen::VectorXcd phases(n);
  for (Index k = 0; k < n; ++k)
    phases[k] = std::exp(Complex(0, -theta * es.eigenvalues()[k]));
  Eigen::MatrixXcd u =
      es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

  Eigen::VectorXcd psi_exp = u * psi;
  Eigen::VectorXcd v_exp = u * v;
  Eigen::VectorXcd psi_cf = psi, v_cf = v;
  two_plane_rotate(psi_cf, v_cf, theta);
  CHECK((psi_cf - psi_exp).norm() < 1e-12);
  CHECK((v_cf - v_exp).norm() < 1e-12);
}

TEST_CASE("micro-steps preserve norms and orthogonality over 1e4 iterations") {
  Rng rng = make_rng(32);
  const Index n = 16;
  Eigen::VectorXcd psi = haar_random_state(n, rng).amplitudes;
  Eigen::VectorXcd v = haar_random_state(n, rng).amplitudes;
  v -= psi.dot(v) * psi;
  v /= v.norm();
  const double dtheta = 1.0 / 1024.0;
  for (int k = 0; k < 10000; ++k) two_plane_rotate(psi, v, dtheta);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
  CHECK(std::abs(v.norm() - 1.0) < 1e-12);
  CHECK(std::abs(psi.dot(v)) < 1e-12);
}

TEST_CASE("specular reflection preserves tangential components") {
  Rng rng = make_rng(33);
  const Index n = 16;
  std::normal_distribution<double> g;
  Eigen::VectorXcd normal = haar_random_state(n, rng).amplitudes;
  Eigen::VectorXcd v = haar_random_state(n, rng).amplitudes;
  Eigen::VectorXcd reflected = v;
  specular_reflect(reflected, normal);

  // reflecting twice restores v
  Eigen::VectorXcd twice = reflected;
  specular_reflect(twice, normal);
  CHECK((twice - v).norm() < 1e-12);

  for (int trial = 0; trial < 8; ++trial) {
    Eigen::VectorXcd w = haar_random_state(n, rng).amplitudes;
    w -= normal.dot(w).real() * normal;  // Re-orthogonal to the normal
    double before = v.dot(w).real();
    double after = reflected.dot(w).real();
    CHECK(before == doctest::Approx(after).epsilon(1e-10));
  }
}

TEST_CASE("gmc trajectory conserves the constraint and the norm") {
  HamiltonianOperator h = build_mfim(paramagnet(6));
  SamplerConfig cfg;
  cfg.seed = 1;
  Rng rng = make_rng(40);
  StateVector psi = haar_random_state(h.dimension(), rng);
  // sampler states live in the eigenbasis
  double e_psi = energy_expectation_diagonal(h.spectrum(), psi.amplitudes);
  double e_star = e_psi + 0.05;

  int accepted = 0;
  for (int trial = 0; trial < 10; ++trial) {
    GmcOutcome out = gmc_trajectory(h, psi, e_star, cfg, rng);
    if (out.status == GmcStatus::Accepted) {
      ++accepted;
      CHECK(out.energy < e_star);
      CHECK(std::abs(out.state.norm() - 1.0) < 1e-10);
      CHECK(out.energy ==
            doctest::Approx(energy_expectation_diagonal(h.spectrum(), out.state))
                .epsilon(1e-12));
      CHECK(out.reflections > 0);  // tight constraint forces reflections
    }
  }
  CHECK(accepted > 0);

  // precondition: the start state must satisfy the constraint
  CHECK_THROWS_AS((void)gmc_trajectory(h, psi, e_psi - 1.0, cfg, rng),
                  std::invalid_argument);
}

TEST_CASE("nested sampling: records decrease strictly and carry exact measures") {
  HamiltonianOperator h = build_mfim(paramagnet(8));
  SamplerConfig cfg;
  cfg.max_iterations = 60;
  cfg.ns_moves = 4;
  cfg.seed = 7;
  SamplingRun run = nested_sampling(h, cfg);
  REQUIRE(run.records.size() == 60);

  const double log_half = std::log(0.5);
  for (std::size_t i = 0; i < run.records.size(); ++i) {
    const SampleRecord& r = run.records[i];
    CHECK(r.iteration == static_cast<long>(i) + 1);
    CHECK(r.log_measure == static_cast<double>(r.iteration) * log_half);
    // the recorded state sits on its own constraint
    CHECK(energy_expectation_diagonal(h.spectrum(), r.state) ==
          doctest::Approx(r.energy_star).epsilon(1e-12));
    if (i > 0) CHECK(r.energy_star < run.records[i - 1].energy_star);
  }
  // measure estimate after 3 iterations with n_live = 2
  CHECK(std::exp(run.records[2].log_measure) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("a flat spectrum trips the degenerate-spectrum guard") {
  Eigen::VectorXd flat = Eigen::VectorXd::Constant(16, 2.5);
  HamiltonianOperator h = HamiltonianOperator::from_spectrum(4, flat);
  h.resolve();
  SamplerConfig cfg;
  cfg.max_iterations = 5;
  cfg.seed = 2;
  CHECK_THROWS_AS((void)nested_sampling(h, cfg), StuckSamplerError);
}

TEST_CASE("haar quadrature telescopes at beta = 0") {
  HamiltonianOperator h = build_mfim(paramagnet(6));
  SamplerConfig cfg;
  cfg.max_iterations = 40;
  cfg.n_live = 4;
  cfg.seed = 11;
  SamplingRun run = nested_sampling(h, cfg);
  double total = haar_quadrature(run, 0.0, [](const Eigen::VectorXcd&) { return 1.0; });
  const double t = 0.75;
  const double n = static_cast<double>(run.records.size());
  double expected = 0.5 * (1.0 + t) - 0.5 * (std::pow(t, n) + std::pow(t, n + 1.0));
  CHECK(total == doctest::Approx(expected).epsilon(1e-12));

  // positive weights, monotone in beta through the lowest records
  double q1 = haar_quadrature(run, 1.0, [](const Eigen::VectorXcd&) { return 1.0; });
  double q2 = haar_quadrature(run, 2.0, [](const Eigen::VectorXcd&) { return 1.0; });
  CHECK(q1 > 0.0);
  CHECK(q2 < q1);
}

TEST_CASE("haar quadrature agrees with naive Monte Carlo") {
  HamiltonianOperator h = build_mfim(paramagnet(6));
  const double beta = 1.0;

  SamplerConfig cfg;
  cfg.n_live = 16;
  cfg.max_iterations = 600;
  cfg.ns_moves = 4;
  cfg.seed = 13;
  SamplingRun run = nested_sampling(h, cfg);
  double ns_estimate =
      haar_quadrature(run, beta, [](const Eigen::VectorXcd&) { return 1.0; });

  // NS uncertainty from the measure statistics: resample t_i ~ Beta(n_live, 1)
  Rng rng = make_rng(99);
  std::vector<double> resampled;
  const std::size_t n_rec = run.records.size();
  for (int rep = 0; rep < 200; ++rep) {
    // realized X_k chain: X_0 = 1, X_k = t_k X_{k-1}, t_k ~ Beta(n_live, 1)
    std::vector<double> xs(n_rec + 2);
    xs[0] = 1.0;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double log_x = 0.0;
    for (std::size_t k = 1; k < xs.size(); ++k) {
      log_x += std::log(u(rng)) / cfg.n_live;  // Beta(n,1) via u^{1/n}
      xs[k] = std::exp(log_x);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n_rec; ++i) {
      std::size_t k = i + 1;  // iteration index
      acc += std::exp(-beta * run.records[i].energy_star) * 0.5 * (xs[k - 1] - xs[k + 1]);
    }
    resampled.push_back(acc);
  }
  double ns_mean = 0.0, ns_var = 0.0;
  for (double x : resampled) ns_mean += x;
  ns_mean /= resampled.size();
  for (double x : resampled) ns_var += (x - ns_mean) * (x - ns_mean);
  ns_var /= (resampled.size() - 1.0);

  // brute-force Monte Carlo over unconstrained Haar states
  Rng mc_rng = make_rng(101);
  const int draws = 300000;
  double mc_mean = 0.0, mc_m2 = 0.0;
  for (int k = 0; k < draws; ++k) {
    Eigen::VectorXcd psi = haar_random_state(h.dimension(), mc_rng).amplitudes;
    double w = std::exp(-beta * energy_expectation_diagonal(h.spectrum(), psi));
    mc_mean += w;
    mc_m2 += w * w;
  }
  mc_mean /= draws;
  mc_m2 /= draws;
  double mc_var = (mc_m2 - mc_mean * mc_mean) / draws;

  double combined = std::sqrt(ns_var + mc_var);
  CHECK(std::abs(ns_estimate - mc_mean) < 3.0 * combined);
}

TEST_CASE("bin weights: projector limits and Haar mean") {
  HamiltonianOperator h = build_mfim(paramagnet(8));
  const Index n = h.dimension();

  // exact ground state -> p_gs = 1
  SamplingRun synthetic;
  synthetic.n_live = 2;
  SampleRecord r;
  r.iteration = 1;
  r.state = Eigen::VectorXcd::Zero(n);
  r.state[0] = 1.0;
  r.energy_star = 0.0;
  synthetic.records.push_back(r);
  BinnedObservable one = bin_weights({synthetic}, h, 0.01);
  REQUIRE(one.counts.size() == 1);
  CHECK(one.means[0] == doctest::Approx(1.0).epsilon(1e-12));

  // Haar states average p_gs ~ 1/N
  Rng rng = make_rng(55);
  SamplingRun haar;
  haar.n_live = 2;
  const int draws = 10000;
  for (int k = 0; k < draws; ++k) {
    SampleRecord rec;
    rec.iteration = k + 1;
    rec.state = haar_random_state(n, rng).amplitudes;
    rec.energy_star = energy_expectation_diagonal(h.spectrum(), rec.state);
    haar.records.push_back(std::move(rec));
  }
  BinnedObservable binned = bin_weights({haar}, h, 1e9);  // single bin
  REQUIRE(binned.counts.size() == 1);
  double expected = 2.0 / static_cast<double>(n);  // p_gs + p_anti
  CHECK(std::abs(binned.means[0] - expected) < 3.0 * binned.stderrs[0]);

  CHECK_THROWS_AS((void)bin_weights({}, h, 0.01), EmptyObservableError);
}

TEST_CASE("reflected runs map back onto the original energy axis") {
  HamiltonianOperator h = build_mfim(paramagnet(6));
  SamplerConfig cfg;
  cfg.max_iterations = 30;
  cfg.seed = 19;
  SamplingRun forward = nested_sampling(h, cfg, false);
  SamplingRun backward = nested_sampling(h, cfg, true);
  CHECK(backward.reflected);

  BinnedObservable binned = bin_weights({forward, backward}, h, 0.01);
  const double eps_max = h.max_energy() / h.sites();
  // forward tail explores below the middle, reflected tail above
  CHECK(binned.centers.front() < 0.5 * eps_max);
  CHECK(binned.centers.back() > 0.5 * eps_max);
}

TEST_CASE("step-count estimate: formula structure") {
  HamiltonianOperator h = build_mfim(paramagnet(8));
  SpectralMoments m = spectral_moments(h);
  const double e_inf = h.mean_energy();

  CHECK(estimate_steps_to_energy(h, e_inf, 2) == doctest::Approx(0.0));
  double base = estimate_steps_to_energy(m, e_inf, e_inf - 1.0, 2);
  double doubled = estimate_steps_to_energy(m, e_inf, e_inf - 2.0, 2);
  CHECK(doubled == doctest::Approx(4.0 * base).epsilon(1e-12));

  SpectralMoments next = m;
  next.sites = m.sites + 1;
  double grown = estimate_steps_to_energy(next, e_inf, e_inf - 1.0, 2);
  double v = static_cast<double>(m.sites);
  CHECK(grown / base == doctest::Approx(2.0 * v / (v + 1.0)).epsilon(1e-12));

  CHECK_THROWS_AS((void)estimate_steps_to_energy(h, -1.0, 2), OutOfRangeError);
}

TEST_CASE("sampler config validation") {
  SamplerConfig cfg;
  cfg.n_live = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.n_live = 2;
  cfg.step_theta = 50.0;  // exceeds the pathlength
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
