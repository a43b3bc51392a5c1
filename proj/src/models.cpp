#include "eigencond/models.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace eigencond {

namespace {

using Triplet = Eigen::Triplet<double>;

// bit j of a basis index encodes site j: 0 -> sigma^z = +1, 1 -> sigma^z = -1
double sigma_z(Index state, int site) { return (state >> site) & 1 ? -1.0 : 1.0; }
Index flip(Index state, int site) { return state ^ (Index(1) << site); }

void check_sites(const ModelSpec& spec, int min_sites) {
  if (spec.sites < min_sites)
    throw std::invalid_argument("model requires at least " + std::to_string(min_sites) +
                                " sites");
  if (spec.sites > 30) throw std::invalid_argument("site count too large for dense Hilbert space");
}

struct Lattice {
  int lx = 0, ly = 1;
  std::vector<std::pair<int, int>> edges;
};

Lattice resolve_lattice(const ModelSpec& spec) {
  Lattice lat;
  const int v = spec.sites;
  if (spec.family == ModelFamily::Tfim2D) {
    int lx = static_cast<int>(spec.parameter("Lx", 0));
    int ly = static_cast<int>(spec.parameter("Ly", 0));
    if (lx > 0 || ly > 0) {
      if (lx <= 0) lx = v / std::max(ly, 1);
      if (ly <= 0) ly = v / std::max(lx, 1);
      if (lx * ly != v) throw LatticeError("Lx*Ly must equal the site count");
    } else {
      // most-square factorization with both sides >= 2
      for (int a = static_cast<int>(std::sqrt(static_cast<double>(v))); a >= 2; --a)
        if (v % a == 0) {
          lx = v / a;
          ly = a;
          break;
        }
      if (lx == 0) throw LatticeError("site count does not factor into a 2D lattice");
    }
    if (lx < 2 || ly < 2) throw LatticeError("2D lattice needs both sides >= 2");
    lat.lx = lx;
    lat.ly = ly;
  } else {
    lat.lx = v;
    lat.ly = 1;
  }
  lat.edges = lattice_edges(spec.family, v, lat.lx, lat.ly, spec.boundary);
  return lat;
}

Eigen::SparseMatrix<double> ising_sparse(const ModelSpec& spec, const Lattice& lat, double j,
                                         double hx, double hz) {
  const Index n = Index(1) << spec.sites;
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(n) * (spec.sites + 1));
  for (Index s = 0; s < n; ++s) {
    double diag = 0.0;
    for (const auto& [a, b] : lat.edges) diag += j * sigma_z(s, a) * sigma_z(s, b);
    for (int a = 0; a < spec.sites; ++a) diag += hz * sigma_z(s, a);
    if (diag != 0.0) trip.emplace_back(s, s, diag);
    if (hx != 0.0)
      for (int a = 0; a < spec.sites; ++a) trip.emplace_back(flip(s, a), s, hx);
  }
  Eigen::SparseMatrix<double> h(n, n);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

std::vector<double> ising_pauli_coefficients(const Lattice& lat, int sites, double j,
                                             double hx, double hz) {
  std::vector<double> c;
  for (std::size_t e = 0; e < lat.edges.size(); ++e)
    if (j != 0.0) c.push_back(j);
  for (int a = 0; a < sites; ++a) {
    if (hx != 0.0) c.push_back(hx);
    if (hz != 0.0) c.push_back(hz);
  }
  return c;
}

}  // namespace

std::vector<std::pair<int, int>> lattice_edges(ModelFamily family, int sites, int lx, int ly,
                                               Boundary boundary) {
  std::vector<std::pair<int, int>> edges;
  if (family == ModelFamily::Tfim2D) {
    auto idx = [lx](int x, int y) { return x + lx * y; };
    for (int y = 0; y < ly; ++y)
      for (int x = 0; x < lx; ++x) {
        if (x + 1 < lx)
          edges.emplace_back(idx(x, y), idx(x + 1, y));
        else if (boundary == Boundary::Periodic && lx > 2)
          edges.emplace_back(idx(x, y), idx(0, y));
        if (y + 1 < ly)
          edges.emplace_back(idx(x, y), idx(x, y + 1));
        else if (boundary == Boundary::Periodic && ly > 2)
          edges.emplace_back(idx(x, y), idx(x, 0));
      }
  } else {
    for (int a = 0; a + 1 < sites; ++a) edges.emplace_back(a, a + 1);
    if (boundary == Boundary::Periodic && sites > 2) edges.emplace_back(sites - 1, 0);
  }
  return edges;
}

double ModelSpec::parameter(const std::string& key, double fallback) const {
  auto it = parameters.find(key);
  return it == parameters.end() ? fallback : it->second;
}

std::string ModelSpec::label() const {
  std::string s = to_string(family) + " V=" + std::to_string(sites);
  for (const auto& [k, v] : parameters) s += " " + k + "=" + std::to_string(v);
  return s;
}

ModelFamily model_family_from_string(const std::string& name) {
  if (name == "tfim1d") return ModelFamily::Tfim1D;
  if (name == "tfim2d") return ModelFamily::Tfim2D;
  if (name == "mfim1d") return ModelFamily::Mfim1D;
  if (name == "heisenberg1d") return ModelFamily::Heisenberg1D;
  if (name == "goe") return ModelFamily::Goe;
  if (name == "gue") return ModelFamily::Gue;
  throw ConfigError("unknown model family: " + name);
}

std::string to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::Tfim1D: return "tfim1d";
    case ModelFamily::Tfim2D: return "tfim2d";
    case ModelFamily::Mfim1D: return "mfim1d";
    case ModelFamily::Heisenberg1D: return "heisenberg1d";
    case ModelFamily::Goe: return "goe";
    case ModelFamily::Gue: return "gue";
  }
  return "?";
}

std::string to_string(Boundary boundary) {
  return boundary == Boundary::Open ? "open" : "periodic";
}

HamiltonianOperator build_tfim(const ModelSpec& spec, ResolveMode mode) {
  if (spec.family != ModelFamily::Tfim1D && spec.family != ModelFamily::Tfim2D)
    throw std::invalid_argument("build_tfim expects a TFIM family");
  check_sites(spec, 2);
  if (!spec.has_parameter("h_x")) throw std::invalid_argument("TFIM requires h_x");
  if (spec.family == ModelFamily::Tfim1D && spec.boundary_set &&
      spec.boundary != Boundary::Open)
    throw std::invalid_argument("1D TFIM uses open boundaries");
  const double j = spec.parameter("J", 1.0);
  const double hx = spec.parameter("h_x", 0.0);
  Lattice lat = resolve_lattice(spec);
  HamiltonianOperator op =
      HamiltonianOperator::from_sparse(spec.sites, ising_sparse(spec, lat, j, hx, 0.0));
  op.set_pauli_coefficients(ising_pauli_coefficients(lat, spec.sites, j, hx, 0.0));
  op.set_label(spec.label());
  op.resolve(mode, spec.exact_degeneracy_only);
  return op;
}

HamiltonianOperator build_mfim(const ModelSpec& spec, ResolveMode mode) {
  if (spec.family != ModelFamily::Mfim1D)
    throw std::invalid_argument("build_mfim expects the MFIM family");
  check_sites(spec, 2);
  if (spec.boundary_set && spec.boundary != Boundary::Open)
    throw std::invalid_argument("1D MFIM uses open boundaries");
  const double j = spec.parameter("J", 1.0);
  const double hx = spec.parameter("h_x", 1.4);
  const double hz = spec.parameter("h_z", 0.9045);
  Lattice lat = resolve_lattice(spec);
  HamiltonianOperator op =
      HamiltonianOperator::from_sparse(spec.sites, ising_sparse(spec, lat, j, hx, hz));
  op.set_pauli_coefficients(ising_pauli_coefficients(lat, spec.sites, j, hx, hz));
  op.set_label(spec.label());
  op.resolve(mode, spec.exact_degeneracy_only);
  return op;
}

HamiltonianOperator build_heisenberg(const ModelSpec& spec, ResolveMode mode) {
  if (spec.family != ModelFamily::Heisenberg1D)
    throw std::invalid_argument("build_heisenberg expects the Heisenberg family");
  check_sites(spec, 3);
  if (spec.boundary_set && spec.boundary != Boundary::Periodic)
    throw std::invalid_argument("the Heisenberg chain uses periodic boundaries");
  const int v = spec.sites;
  const Index n = Index(1) << v;
  auto edges = lattice_edges(spec.family, v, v, 1, Boundary::Periodic);

  // -sum_bonds sigma.sigma: diagonal -z_a z_b, off-diagonal -2 on flip-flop pairs
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(n) * (v + 1));
  for (Index s = 0; s < n; ++s) {
    double diag = 0.0;
    for (const auto& [a, b] : edges) {
      double za = sigma_z(s, a), zb = sigma_z(s, b);
      diag -= za * zb;
      if (za * zb < 0.0) trip.emplace_back(flip(flip(s, a), b), s, -2.0);
    }
    if (diag != 0.0) trip.emplace_back(s, s, diag);
  }
  Eigen::SparseMatrix<double> h(n, n);
  h.setFromTriplets(trip.begin(), trip.end());
  HamiltonianOperator op = HamiltonianOperator::from_sparse(v, std::move(h));
  op.set_pauli_coefficients(std::vector<double>(3 * edges.size(), 1.0));
  op.set_label(spec.label());
  op.set_extremal_pairs_hint(v + 3);
  op.resolve(mode, spec.exact_degeneracy_only);

  // ground space: repeated application of the total raising operator to the
  // all-down state spans the (V+1)-fold ferromagnetic multiplet
  Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(n, v + 1);
  const Index all_down = n - 1;
  Eigen::VectorXcd cur = Eigen::VectorXcd::Zero(n);
  cur[all_down] = 1.0;
  basis.col(0) = cur;
  for (int m = 1; m <= v; ++m) {
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(n);
    for (Index s = 0; s < n; ++s) {
      if (cur[s] == Complex(0.0, 0.0)) continue;
      for (int a = 0; a < v; ++a)
        if ((s >> a) & 1) next[flip(s, a)] += cur[s];  // raise a down spin
    }
    next /= next.norm();
    basis.col(m) = next;
    cur = next;
  }
  op.set_ground_space_basis(basis);
  return op;
}

HamiltonianOperator build_gaussian_ensemble(const ModelSpec& spec, ResolveMode mode) {
  if (spec.family != ModelFamily::Goe && spec.family != ModelFamily::Gue)
    throw std::invalid_argument("build_gaussian_ensemble expects GOE or GUE");
  check_sites(spec, 1);
  const double beta = spec.family == ModelFamily::Goe ? 1.0 : 2.0;
  const int v = spec.sites;
  const Index n = Index(1) << v;
  const double scale = v / (2.0 * std::sqrt(static_cast<double>(n) * beta));

  Rng rng = make_rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(2.0));
  Eigen::VectorXd diag(n), sub(n - 1);
  for (Index i = 0; i < n; ++i) diag[i] = scale * gauss(rng);
  for (Index i = 0; i < n - 1; ++i) {
    // chi_{beta*j} with j decreasing along the subdiagonal
    double dof = beta * static_cast<double>(n - 1 - i);
    std::gamma_distribution<double> gamma(dof / 2.0, 2.0);
    sub[i] = scale * std::sqrt(gamma(rng));
  }
  HamiltonianOperator op = HamiltonianOperator::from_tridiagonal(v, diag, sub);
  op.set_label(spec.label());
  op.resolve(mode, spec.exact_degeneracy_only);
  return op;
}

HamiltonianOperator build_model(const ModelSpec& spec, ResolveMode mode) {
  switch (spec.family) {
    case ModelFamily::Tfim1D:
    case ModelFamily::Tfim2D:
      return build_tfim(spec, mode);
    case ModelFamily::Mfim1D:
      return build_mfim(spec, mode);
    case ModelFamily::Heisenberg1D:
      return build_heisenberg(spec, mode);
    case ModelFamily::Goe:
    case ModelFamily::Gue:
      return build_gaussian_ensemble(spec, mode);
  }
  throw std::invalid_argument("unknown model family");
}

}  // namespace eigencond
