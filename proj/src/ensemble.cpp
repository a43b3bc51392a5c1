#include "eigencond/ensemble.hpp"

#include <cmath>

namespace eigencond {

namespace {

void check_beta(const Eigen::VectorXd& spectrum, double beta) {
  const double e_max = spectrum[spectrum.size() - 1];
  if (1.0 + beta * e_max <= 0.0 || 1.0 + beta * spectrum[0] <= 0.0)
    throw InvalidBetaError("beta crosses a weight pole");
}

// Generic monotone-decreasing bisection in asinh(beta).
template <typename EnergyFn>
double bisect_energy(const EnergyFn& e_of_beta, double e_av, double beta_lo, double beta_hi) {
  double s_lo = std::asinh(beta_lo), s_hi = std::asinh(beta_hi);
  double best = 0.5 * (beta_lo + beta_hi);
  for (int it = 0; it < 200; ++it) {
    double s = 0.5 * (s_lo + s_hi);
    double beta = std::sinh(s);
    double e = e_of_beta(beta);
    best = beta;
    if (std::abs(e - e_av) <= 1e-10 * std::abs(e_av)) return beta;
    if (e > e_av)
      s_lo = s;  // energy decreases in beta
    else
      s_hi = s;
  }
  return best;
}

}  // namespace

Eigen::VectorXd typical_weights(const Eigen::VectorXd& spectrum, double beta) {
  check_beta(spectrum, beta);
  Eigen::VectorXd w = (1.0 + beta * spectrum.array()).inverse();
  return w / w.sum();
}

double ensemble_energy(const Eigen::VectorXd& spectrum, double beta) {
  check_beta(spectrum, beta);
  double z = 0.0, ze = 0.0;
  for (Index a = 0; a < spectrum.size(); ++a) {
    double w = 1.0 / (1.0 + beta * spectrum[a]);
    z += w;
    ze += spectrum[a] * w;
  }
  return ze / z;
}

double solve_beta_for_energy(const Eigen::VectorXd& spectrum, double e_av) {
  const Index n = spectrum.size();
  const double e_min = spectrum[0], e_max = spectrum[n - 1];
  if (!(e_av > e_min && e_av < e_max))
    throw OutOfRangeError("target energy outside the open spectral interval");

  double beta_lo = -(1.0 - 1e-12) / e_max;  // approach the anti-ground pole
  double beta_hi = 1e3 * static_cast<double>(n);
  while (ensemble_energy(spectrum, beta_hi) > e_av && beta_hi < 1e280) beta_hi *= 16.0;
  return bisect_energy([&](double b) { return ensemble_energy(spectrum, b); }, e_av, beta_lo,
                       beta_hi);
}

double solve_beta_for_energy(const FreeFermionSpectrum& spectrum, double e_av) {
  const double e_total = spectrum.total_energy();
  if (!(e_av > 0.0 && e_av < e_total))
    throw OutOfRangeError("target energy outside the open spectral interval");
  const double e_inf = spectrum.mean_energy();
  if (e_av > e_inf) {
    // subset-sum spectra are symmetric under E -> E_total - E; solve on the
    // reflected side and map the parameter back through the pole
    double beta_reflected = solve_beta_for_energy(spectrum, e_total - e_av);
    return -beta_reflected / (1.0 + beta_reflected * e_total);
  }
  auto energy = [&](double beta) {
    if (beta <= 0.0) return e_inf;  // bracket guard; beta = 0 is the midpoint
    return stable_ze(spectrum, beta) / stable_z(spectrum, beta);
  };
  double beta_hi = 1e3 * spectrum.dimension();
  while (energy(beta_hi) > e_av && beta_hi < 1e280) beta_hi *= 16.0;
  return bisect_energy(energy, e_av, 1e-14, beta_hi);
}

double bulk_energy(const Eigen::VectorXd& spectrum, Index ground_degeneracy, double beta) {
  if (beta < 0.0) throw std::invalid_argument("bulk_energy requires beta >= 0");
  double z = 0.0, ze = 0.0;
  for (Index a = ground_degeneracy; a < spectrum.size(); ++a) {
    double w = 1.0 / (1.0 + beta * spectrum[a]);
    z += w;
    ze += spectrum[a] * w;
  }
  return ze / z;
}

CriticalDensityPair critical_energy_moment_expansion(const SpectralMoments& moments,
                                                     double anti_ground_energy_density) {
  const double v = static_cast<double>(moments.sites);
  const double ei = moments.eps_infinity;
  CriticalDensityPair out;
  out.minus = ei * (1.0 - moments.s2 / (v * ei * ei));
  // reflected-spectrum expansion: eps_c+ sits above the spectral center by the
  // same leading moment correction
  const double gap = anti_ground_energy_density - ei;
  out.plus = ei + moments.s2 / (v * gap);
  return out;
}

double scaling_f(double eta) { return 0.5 * (-eta + std::sqrt(eta * eta + 4.0)); }

std::vector<ScalingPoint> scaling_transform(const EnsembleCurve& curve,
                                            const SpectralMoments& moments, double eps_c) {
  if (!(moments.s2 > 0.0)) throw std::invalid_argument("scaling transform requires s^2 > 0");
  const double v = static_cast<double>(curve.sites);
  const double n = std::exp2(v);
  const double s = std::sqrt(moments.s2);
  const double stretch = std::sqrt(n * v) / s;
  std::vector<ScalingPoint> points;
  points.reserve(curve.rows.size());
  for (const auto& row : curve.rows) {
    ScalingPoint p;
    p.eta = (row.e_av / v - eps_c) * stretch;
    p.p_gs_rescaled = row.p_gs * moments.eps_infinity * stretch;
    p.f_eta = scaling_f(p.eta);
    points.push_back(p);
  }
  return points;
}

EnsembleCurve build_curve_spectral(const Eigen::VectorXd& spectrum, Index ground_degeneracy,
                                   Index anti_degeneracy, const Eigen::VectorXd& beta_grid,
                                   int sites) {
  EnsembleCurve curve;
  curve.provenance = CurveProvenance::SpectralSum;
  curve.sites = sites;
  curve.rows.reserve(beta_grid.size());
  const Index n = spectrum.size();
  for (Index i = 0; i < beta_grid.size(); ++i) {
    const double beta = beta_grid[i];
    check_beta(spectrum, beta);
    EnsembleCurveRow row;
    row.beta = beta;
    double z = 0.0, ze = 0.0, gs = 0.0, anti = 0.0;
    for (Index a = 0; a < n; ++a) {
      double w = 1.0 / (1.0 + beta * spectrum[a]);
      z += w;
      ze += spectrum[a] * w;
      if (a < ground_degeneracy) gs += w;
      if (a >= n - anti_degeneracy) anti += w;
    }
    row.z = z;
    row.e_av = ze / z;
    row.p_gs = gs / z;
    row.p_anti_gs = anti / z;
    curve.rows.push_back(row);
  }
  return curve;
}

EnsembleCurve build_curve_free_fermion(const FreeFermionSpectrum& spectrum,
                                       const Eigen::VectorXd& beta_grid) {
  EnsembleCurve curve;
  curve.provenance = CurveProvenance::FreeFermionQuadrature;
  curve.sites = spectrum.sites();
  curve.rows.reserve(beta_grid.size());
  const double e_total = spectrum.total_energy();
  for (Index i = 0; i < beta_grid.size(); ++i) {
    const double beta = beta_grid[i];
    EnsembleCurveRow row;
    row.beta = beta;
    row.z = stable_z(spectrum, beta);
    row.e_av = stable_ze(spectrum, beta) / row.z;
    row.p_gs = 1.0 / row.z;
    row.p_anti_gs = 1.0 / (row.z * (1.0 + beta * e_total));
    curve.rows.push_back(row);
  }
  return curve;
}

NearDegeneracyReport near_degeneracy_curve(const Eigen::VectorXd& spectrum,
                                           const Eigen::VectorXd& beta_grid, int sites) {
  const Index n = spectrum.size();
  if (n < 4) throw std::invalid_argument("near-degeneracy analysis needs N >= 4");
  NearDegeneracyReport report;
  report.delta = spectrum[1] - spectrum[0];

  double inv_sum_above_doublet = 0.0, inv_sum_above_gs = 0.0;
  for (Index a = 2; a < n; ++a) inv_sum_above_doublet += 1.0 / spectrum[a];
  inv_sum_above_gs = inv_sum_above_doublet + (report.delta > 0.0 ? 1.0 / spectrum[1] : 0.0);
  report.e_c1 = static_cast<double>(n - 2) / inv_sum_above_doublet;
  report.e_c0 = report.delta > 0.0 ? static_cast<double>(n - 1) / inv_sum_above_gs : 0.0;

  report.curve.provenance = CurveProvenance::SpectralSum;
  report.curve.sites = sites;
  report.curve.rows.reserve(beta_grid.size());
  for (Index i = 0; i < beta_grid.size(); ++i) {
    const double beta = beta_grid[i];
    check_beta(spectrum, beta);
    EnsembleCurveRow row;
    row.beta = beta;
    double z = 0.0, ze = 0.0;
    for (Index a = 0; a < n; ++a) {
      double w = 1.0 / (1.0 + beta * spectrum[a]);
      z += w;
      ze += spectrum[a] * w;
    }
    row.z = z;
    row.e_av = ze / z;
    row.p_gs = (1.0 / (1.0 + beta * spectrum[0])) / z;
    row.p_1 = (1.0 / (1.0 + beta * spectrum[1])) / z;
    row.p_anti_gs = (1.0 / (1.0 + beta * spectrum[n - 1])) / z;
    report.curve.rows.push_back(row);
  }
  return report;
}

Eigen::VectorXd default_beta_grid(double dimension, int points) {
  const double lo = std::log1p(1e-6);
  const double hi = std::log1p(1e3 * dimension);
  Eigen::VectorXd grid(points);
  for (int i = 0; i < points; ++i) {
    double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    grid[i] = std::expm1(t);
  }
  return grid;
}

}  // namespace eigencond
