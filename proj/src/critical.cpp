#include "eigencond/critical.hpp"

#include <cmath>
#include <random>

#include "eigencond/linalg.hpp"
#include "eigencond/parallel.hpp"

namespace eigencond {

std::string to_string(CriticalMethod method) {
  switch (method) {
    case CriticalMethod::ExactSum: return "exact-sum";
    case CriticalMethod::StochasticTrace: return "stochastic-trace";
    case CriticalMethod::FreeFermion: return "free-fermion";
    case CriticalMethod::MomentExpansion: return "moment-expansion";
  }
  return "?";
}

CriticalEnergyReport exact_critical_energy(const Eigen::VectorXd& spectrum,
                                           Index ground_degeneracy, Index anti_degeneracy,
                                           int sites) {
  const Index n = spectrum.size();
  const double e_max = spectrum[n - 1];
  double inv_lo = 0.0, inv_hi = 0.0;
  for (Index a = ground_degeneracy; a < n; ++a) {
    if (spectrum[a] <= 0.0) throw DivergentSumError("zero bulk eigenvalue below the gap");
    inv_lo += 1.0 / spectrum[a];
  }
  for (Index a = 0; a < n - anti_degeneracy; ++a) {
    double reflected = e_max - spectrum[a];
    if (reflected <= 0.0) throw DivergentSumError("zero bulk eigenvalue below the anti gap");
    inv_hi += 1.0 / reflected;
  }
  CriticalEnergyReport report;
  report.method = CriticalMethod::ExactSum;
  report.sites = sites;
  const double v = static_cast<double>(sites);
  report.eps_c_minus = static_cast<double>(n - ground_degeneracy) / inv_lo / v;
  const double reflected_e_c = static_cast<double>(n - anti_degeneracy) / inv_hi;
  report.eps_c_plus = (e_max - reflected_e_c) / v;
  return report;
}

namespace {

Eigen::MatrixXd real_basis(const Eigen::MatrixXcd& basis) {
  double imag_norm = basis.imag().norm();
  if (imag_norm > 1e-10 * std::max(1.0, basis.real().norm()))
    throw NumericalError("stochastic path expects a real extremal basis");
  return basis.real();
}

struct BootstrapSummary {
  double estimate = 0.0;
  double stderr_value = 0.0;
};

// Nonparametric bootstrap of N_bulk / mean(samples).
BootstrapSummary bootstrap_critical(const std::vector<double>& samples, double n_bulk,
                                    int resamples, Rng& rng) {
  BootstrapSummary out;
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  out.estimate = n_bulk / mean;
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
  double acc = 0.0, acc2 = 0.0;
  for (int r = 0; r < resamples; ++r) {
    double m = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j) m += samples[pick(rng)];
    m /= static_cast<double>(samples.size());
    double e = n_bulk / m;
    acc += e;
    acc2 += e * e;
  }
  double rn = static_cast<double>(resamples);
  out.stderr_value = std::sqrt(std::max(acc2 / rn - (acc / rn) * (acc / rn), 0.0));
  return out;
}

}  // namespace

std::vector<double> stochastic_trace_samples(const HamiltonianOperator& h,
                                             const Eigen::MatrixXd& space_basis,
                                             bool reflect, const StochasticOptions& options,
                                             std::vector<double>* deflation_residuals) {
  const Index n = h.dimension();
  const double e_max = h.anti_ground_space().energy;
  const Eigen::MatrixXd& b = space_basis;

  auto deflated_apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    Eigen::VectorXd u = x - b * (b.transpose() * x);
    Eigen::VectorXd w(n);
    h.apply_real(u, w);
    if (reflect) w = e_max * u - w;
    y = w - b * (b.transpose() * w);
  };

  std::vector<double> samples(static_cast<std::size_t>(options.probes));
  std::vector<double> residuals(static_cast<std::size_t>(options.probes), 0.0);
  CgOptions cg;
  cg.tolerance = options.solver_tol;

  parallel_for(samples.size(), options.threads, [&](std::size_t j) {
    Rng rng = make_rng(derive_stream(options.seed, (reflect ? 1u << 20 : 0u) + j));
    Eigen::VectorXd v(n);
    if (options.rademacher) {
      std::bernoulli_distribution coin(0.5);
      for (Index i = 0; i < n; ++i) v[i] = coin(rng) ? 1.0 : -1.0;
    } else {
      std::normal_distribution<double> gauss;
      for (Index i = 0; i < n; ++i) v[i] = gauss(rng);
    }
    Eigen::VectorXd v_perp = v - b * (b.transpose() * v);
    CgResult sol = conjugate_gradient(n, deflated_apply, v_perp, cg);
    samples[j] = v_perp.dot(sol.x);
    residuals[j] = (b.transpose() * sol.x).cwiseAbs().maxCoeff();
  });
  if (deflation_residuals) *deflation_residuals = std::move(residuals);
  return samples;
}

CriticalEnergyReport stochastic_critical_energy(const HamiltonianOperator& h,
                                                const StochasticOptions& options) {
  if (!h.resolved()) throw Error("resolve the operator before the stochastic estimate");
  if (!h.ground_space().has_basis())
    throw Error("stochastic estimate needs the ground-space basis");

  const double n = static_cast<double>(h.dimension());
  const double v = static_cast<double>(h.sites());
  StochasticOptions opts = options;

  auto run_side = [&](bool reflect, double n_bulk, const Eigen::MatrixXcd& basis,
                      double& eps_out, double& stderr_out) {
    Eigen::MatrixXd b = real_basis(basis);
    StochasticOptions side = opts;
    if (side.probes <= 0) {
      // pilot pass sets m for the requested relative precision
      StochasticOptions pilot = side;
      pilot.probes = 32;
      std::vector<double> t = stochastic_trace_samples(h, b, reflect, pilot, nullptr);
      double mean = 0.0, var = 0.0;
      for (double s : t) mean += s;
      mean /= t.size();
      for (double s : t) var += (s - mean) * (s - mean);
      var /= static_cast<double>(t.size() - 1);
      double target = side.target_relative_stderr > 0 ? side.target_relative_stderr : 0.01;
      double m = var / (mean * mean * target * target);
      side.probes = std::max(32, static_cast<int>(std::ceil(m)));
    }
    std::vector<double> t = stochastic_trace_samples(h, b, reflect, side, nullptr);
    Rng rng = make_rng(derive_stream(side.seed, reflect ? 77 : 76));
    BootstrapSummary s = bootstrap_critical(t, n_bulk, side.bootstrap_resamples, rng);
    opts.probes = side.probes;
    double e_c = s.estimate;
    if (reflect) {
      eps_out = (h.anti_ground_space().energy - e_c) / v;
    } else {
      eps_out = e_c / v;
    }
    stderr_out = s.stderr_value / v;
  };

  CriticalEnergyReport report;
  report.method = CriticalMethod::StochasticTrace;
  report.sites = h.sites();
  report.model = h.label();
  report.seed = options.seed;
  report.solver_tol = options.solver_tol;

  double eps_minus = 0.0, se_minus = 0.0;
  run_side(false, n - h.ground_space().degeneracy, h.ground_space().basis, eps_minus,
           se_minus);
  report.eps_c_minus = eps_minus;
  report.stderr_minus = se_minus;

  if (options.both_tails) {
    double eps_plus = 0.0, se_plus = 0.0;
    run_side(true, n - h.anti_ground_space().degeneracy, h.anti_ground_space().basis,
             eps_plus, se_plus);
    report.eps_c_plus = eps_plus;
    report.stderr_plus = se_plus;
  }
  report.probes = opts.probes;
  return report;
}

std::vector<EnsembleStatsRow> critical_energy_ensemble_stats(const ModelSpec& base,
                                                             const std::vector<int>& sizes,
                                                             int n_seeds, int threads) {
  if (base.family != ModelFamily::Goe && base.family != ModelFamily::Gue)
    throw std::invalid_argument("ensemble statistics require a random-matrix family");
  std::vector<EnsembleStatsRow> rows;
  for (int v : sizes) {
    EnsembleStatsRow row;
    row.sites = v;
    row.eps_c_samples.resize(n_seeds);
    row.ground_energy_density_unshifted.resize(n_seeds);
    parallel_for(static_cast<std::size_t>(n_seeds), threads, [&](std::size_t k) {
      ModelSpec spec = base;
      spec.sites = v;
      spec.seed = derive_stream(base.seed, 1000 * static_cast<std::uint64_t>(v) + k);
      HamiltonianOperator h = build_gaussian_ensemble(spec, ResolveMode::ExtremalOnly);
      CriticalEnergyReport r =
          exact_critical_energy(h.spectrum(), h.ground_space().degeneracy,
                                h.anti_ground_space().degeneracy, v);
      row.eps_c_samples[k] = r.eps_c_minus;
      row.ground_energy_density_unshifted[k] = -h.shift() / static_cast<double>(v);
    });
    double mean = 0.0;
    for (double s : row.eps_c_samples) mean += s;
    mean /= n_seeds;
    double var = 0.0;
    for (double s : row.eps_c_samples) var += (s - mean) * (s - mean);
    var /= std::max(n_seeds - 1, 1);
    row.mean_eps_c = mean;
    row.std_eps_c = std::sqrt(var);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace eigencond
