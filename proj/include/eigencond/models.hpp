#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "eigencond/statespace.hpp"

namespace eigencond {

enum class ModelFamily { Tfim1D, Tfim2D, Mfim1D, Heisenberg1D, Goe, Gue };

enum class Boundary { Open, Periodic };

ModelFamily model_family_from_string(const std::string& name);
std::string to_string(ModelFamily family);
std::string to_string(Boundary boundary);

/// Catalog Hamiltonian description. Parameter keys: h_x, h_z, J (spin
/// couplings), Lx, Ly (2D lattice). Random families use `seed`.
struct ModelSpec {
  ModelFamily family = ModelFamily::Tfim1D;
  int sites = 0;
  std::map<std::string, double> parameters;
  Boundary boundary = Boundary::Open;
  bool boundary_set = false;  // explicit boundary provided by the caller
  std::uint64_t seed = 0;
  bool exact_degeneracy_only = false;

  double parameter(const std::string& key, double fallback) const;
  bool has_parameter(const std::string& key) const { return parameters.count(key) > 0; }
  std::string label() const;
};

HamiltonianOperator build_tfim(const ModelSpec& spec, ResolveMode mode = ResolveMode::Auto);
HamiltonianOperator build_mfim(const ModelSpec& spec, ResolveMode mode = ResolveMode::Auto);
HamiltonianOperator build_heisenberg(const ModelSpec& spec,
                                     ResolveMode mode = ResolveMode::Auto);
HamiltonianOperator build_gaussian_ensemble(const ModelSpec& spec,
                                            ResolveMode mode = ResolveMode::Auto);

/// Family dispatch.
HamiltonianOperator build_model(const ModelSpec& spec, ResolveMode mode = ResolveMode::Auto);

/// Open-boundary lattice edges for the spin models; 1D chains are (j, j+1),
/// 2D row-major grids have right and down neighbors.
std::vector<std::pair<int, int>> lattice_edges(ModelFamily family, int sites, int lx,
                                               int ly, Boundary boundary);

}  // namespace eigencond
