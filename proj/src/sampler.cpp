#include "eigencond/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace eigencond {

void SamplerConfig::validate() const {
  if (n_live < 2) throw std::invalid_argument("n_live must be at least 2");
  if (!(step_theta > 0.0 && step_theta < path_length))
    throw std::invalid_argument("need 0 < step_theta < path_length");
  if (ns_moves < 1) throw std::invalid_argument("ns_moves must be positive");
  if (retry_cap < 1) throw std::invalid_argument("retry_cap must be positive");
}

void two_plane_rotate(Eigen::VectorXcd& psi, Eigen::VectorXcd& v, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const Complex mis(0.0, -s);
  Eigen::VectorXcd psi_new = c * psi + mis * v;
  v = c * v + mis * psi;
  psi = std::move(psi_new);
}

void specular_reflect(Eigen::VectorXcd& v, const Eigen::VectorXcd& normal) {
  v -= 2.0 * normal.dot(v).real() * normal;
}

namespace {

// H-quadratic form on the trajectory plane: E(theta) for
// psi(theta) = cos(theta) psi - i sin(theta) v.
struct PlaneForm {
  double e_pp = 0.0;  // <psi|H|psi>
  double e_vv = 0.0;  // <v|H|v>
  double im_pv = 0.0; // Im <psi|H|v>

  double energy(double c, double s) const {
    return c * c * e_pp + s * s * e_vv + 2.0 * c * s * im_pv;
  }
};

PlaneForm plane_form(const Eigen::VectorXd& energies, const Eigen::VectorXcd& psi,
                     const Eigen::VectorXcd& v, double psi_energy) {
  PlaneForm form;
  form.e_pp = psi_energy;
  form.e_vv = (energies.array() * v.array().abs2()).sum();
  form.im_pv = (psi.array().conjugate() * energies.array() * v.array()).sum().imag();
  return form;
}

// Haar tangent draw: Gaussian vector orthogonalized against psi.
Eigen::VectorXcd draw_tangent(const Eigen::VectorXcd& psi, Rng& rng) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd v(psi.size());
  for (Index i = 0; i < psi.size(); ++i) v[i] = Complex(gauss(rng), gauss(rng));
  v -= psi.dot(v) * psi;
  v /= v.norm();
  return v;
}

}  // namespace

GmcOutcome gmc_trajectory_diagonal(const Eigen::VectorXd& energies, double norm_scale,
                                   const Eigen::VectorXcd& psi_in, double psi_energy,
                                   double e_star, const SamplerConfig& config, Rng& rng) {
  GmcOutcome out;
  Eigen::VectorXcd psi = psi_in;
  Eigen::VectorXcd v = draw_tangent(psi, rng);
  PlaneForm form = plane_form(energies, psi, v, psi_energy);

  const double dtheta = config.step_theta;
  double travelled = 0.0;
  double theta = 0.0;

  auto materialize = [&](double angle) {
    if (angle == 0.0) return;
    two_plane_rotate(psi, v, angle);
    psi /= psi.norm();
    v -= psi.dot(v) * psi;
    v /= v.norm();
  };

  while (travelled < config.path_length) {
    theta += dtheta;
    travelled += dtheta;
    double energy = form.energy(std::cos(theta), std::sin(theta));
    if (energy >= e_star) {
      // first step landing outside: reflect the direction off the isosurface
      // at the outside point and continue from there
      materialize(theta);
      theta = 0.0;
      double exact = energy_expectation_diagonal(energies, psi);
      auto normal = energy_gradient_tangent_diagonal(energies, psi, exact, norm_scale);
      if (!normal) {
        out.status = GmcStatus::DegenerateGradient;
        return out;
      }
      specular_reflect(v, *normal);
      v -= psi.dot(v) * psi;
      v /= v.norm();
      form = plane_form(energies, psi, v, exact);
      ++out.reflections;
    }
  }
  materialize(theta);
  out.energy = energy_expectation_diagonal(energies, psi);
  out.state = std::move(psi);
  out.status = out.energy < e_star ? GmcStatus::Accepted : GmcStatus::Rejected;
  return out;
}

GmcOutcome gmc_trajectory(const HamiltonianOperator& h, const StateVector& psi, double e_star,
                          const SamplerConfig& config, Rng& rng) {
  config.validate();
  const Eigen::VectorXd& energies = h.spectrum();
  double e_psi = energy_expectation_diagonal(energies, psi.amplitudes);
  if (!(e_psi < e_star))
    throw std::invalid_argument("gmc_trajectory requires <psi|H|psi> < E*");
  return gmc_trajectory_diagonal(energies, h.norm_scale(), psi.amplitudes, e_psi, e_star,
                                 config, rng);
}

SamplingRun nested_sampling(const HamiltonianOperator& h, const SamplerConfig& config,
                            bool reflected) {
  config.validate();
  if (!h.has_spectrum()) throw Error("nested sampling needs a resolved spectrum");

  Eigen::VectorXd energies = h.spectrum();
  if (reflected)
    energies = (energies[energies.size() - 1] - energies.array()).reverse();
  const double norm_scale = std::max(std::abs(energies[energies.size() - 1]), 1.0);
  const Index n = energies.size();

  SamplingRun run;
  run.reflected = reflected;
  run.n_live = config.n_live;
  Rng rng = make_rng(config.seed);

  std::vector<Eigen::VectorXcd> live(config.n_live);
  std::vector<double> live_energy(config.n_live);
  for (int k = 0; k < config.n_live; ++k) {
    live[k] = haar_random_state(n, rng).amplitudes;
    live_energy[k] = energy_expectation_diagonal(energies, live[k]);
  }

  const double log_t = std::log1p(-1.0 / config.n_live);
  double previous_star = std::numeric_limits<double>::infinity();

  for (long iteration = 1; iteration <= config.max_iterations; ++iteration) {
    int worst = 0;
    for (int k = 1; k < config.n_live; ++k)
      if (live_energy[k] > live_energy[worst]) worst = k;
    const double e_star = live_energy[worst];

    if (!(e_star < previous_star))
      throw StuckSamplerError("constraint energy did not decrease (degenerate spectrum?)",
                              e_star);
    previous_star = e_star;

    SampleRecord record;
    record.iteration = iteration;
    record.energy_star = e_star;
    record.state = live[worst];
    record.log_measure = static_cast<double>(iteration) * log_t;

    // clone a surviving live point (uniform among survivors)
    int clone = worst;
    if (config.n_live == 2) {
      clone = 1 - worst;
    } else {
      std::uniform_int_distribution<int> pick(0, config.n_live - 2);
      int idx = pick(rng);
      clone = idx >= worst ? idx + 1 : idx;
    }
    Eigen::VectorXcd psi = live[clone];
    double e_psi = live_energy[clone];

    long accepted = 0, rejected = 0;
    while (accepted < config.ns_moves) {
      if (!(e_psi < e_star)) {
        ++rejected;  // survivor sits on the constraint; no admissible move
      } else {
        GmcOutcome move =
            gmc_trajectory_diagonal(energies, norm_scale, psi, e_psi, e_star, config, rng);
        if (move.status == GmcStatus::Accepted) {
          psi = std::move(move.state);
          e_psi = move.energy;
          ++accepted;
          continue;
        }
        ++rejected;
      }
      if (rejected >= config.retry_cap)
        throw StuckSamplerError("move retry cap exceeded", e_star);
    }
    record.accepted_moves = accepted;
    record.rejected_moves = rejected;
    run.total_accepted += accepted;
    run.total_rejected += rejected;

    live[worst] = std::move(psi);
    live_energy[worst] = e_psi;
    run.records.push_back(std::move(record));

    if (config.target_energy && e_star <= *config.target_energy) break;
  }
  return run;
}

double haar_quadrature(const SamplingRun& run, double beta,
                       const std::function<double(const Eigen::VectorXcd&)>& g) {
  const double t = 1.0 - 1.0 / static_cast<double>(run.n_live);
  double acc = 0.0;
  for (const SampleRecord& r : run.records) {
    double i = static_cast<double>(r.iteration);
    double weight = 0.5 * (std::pow(t, i - 1.0) - std::pow(t, i + 1.0));
    acc += std::exp(-beta * r.energy_star) * g(r.state) * weight;
  }
  return acc;
}

BinnedObservable bin_weights(const std::vector<SamplingRun>& runs,
                             const HamiltonianOperator& h, double delta) {
  std::size_t total = 0;
  for (const auto& run : runs) total += run.records.size();
  if (total == 0) throw EmptyObservableError("no records to bin");
  if (!(delta > 0.0)) throw std::invalid_argument("bin width must be positive");

  const Index n = h.dimension();
  const Index deg_g = h.ground_space().degeneracy;
  const Index deg_a = h.anti_ground_space().degeneracy;
  const double e_max = h.spectrum()[n - 1];
  const double v = static_cast<double>(h.sites());

  struct Accum {
    double sum = 0.0, sum2 = 0.0;
    long count = 0;
    bool forward = false, backward = false;
  };
  std::map<long, Accum> bins;

  for (const auto& run : runs) {
    for (const SampleRecord& r : run.records) {
      // reflected runs store amplitudes against the reversed eigenbasis
      double p_gs = 0.0, p_anti = 0.0;
      if (!run.reflected) {
        p_gs = r.state.head(deg_g).squaredNorm();
        p_anti = r.state.tail(deg_a).squaredNorm();
      } else {
        p_gs = r.state.tail(deg_g).squaredNorm();
        p_anti = r.state.head(deg_a).squaredNorm();
      }
      double energy = run.reflected ? e_max - r.energy_star : r.energy_star;
      double eps = energy / v;
      long key = static_cast<long>(std::floor(eps / delta));
      Accum& a = bins[key];
      double w = p_gs + p_anti;
      a.sum += w;
      a.sum2 += w * w;
      a.count += 1;
      (run.reflected ? a.backward : a.forward) = true;
    }
  }

  BinnedObservable out;
  out.width = delta;
  for (const auto& [key, a] : bins) {
    out.centers.push_back((static_cast<double>(key) + 0.5) * delta);
    double mean = a.sum / static_cast<double>(a.count);
    out.means.push_back(mean);
    double var = a.count > 1
                     ? (a.sum2 - a.sum * a.sum / static_cast<double>(a.count)) /
                           static_cast<double>(a.count - 1)
                     : 0.0;
    out.stderrs.push_back(std::sqrt(std::max(var, 0.0) / static_cast<double>(a.count)));
    out.counts.push_back(a.count);
    out.mixed.push_back(a.forward && a.backward);
  }
  return out;
}

double estimate_steps_to_energy(const SpectralMoments& moments, double e_infinity,
                                double target_energy, int n_live) {
  const double t = 1.0 - 1.0 / static_cast<double>(n_live);
  const double v = static_cast<double>(moments.sites);
  const double d = target_energy - e_infinity;
  return (1.0 / std::abs(std::log(t))) * (d * d / moments.s2) * std::exp2(v) / v;
}

double estimate_steps_to_energy(const HamiltonianOperator& h, double target_energy,
                                int n_live) {
  const Eigen::VectorXd& e = h.spectrum();
  if (!(target_energy >= e[0] && target_energy <= e[e.size() - 1]))
    throw OutOfRangeError("target energy beyond the spectrum");
  SpectralMoments m = spectral_moments(h);
  return estimate_steps_to_energy(m, h.mean_energy(), target_energy, n_live);
}

}  // namespace eigencond
