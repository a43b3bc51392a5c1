#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "eigencond/models.hpp"
#include "eigencond/statespace.hpp"

namespace eigencond {

/// Writes `prefix`.json (model name, parameters, V, E0, degeneracy info and
/// payload layout) plus `prefix`.bin (little-endian IEEE-754 doubles; complex
/// arrays interleaved re/im, column-major). Spectrum and extremal bases are
/// stored when present.
void save_operator(const HamiltonianOperator& h, const ModelSpec* spec,
                   const std::string& prefix);

struct LoadedOperator {
  HamiltonianOperator op;  // diagonal representation, re-resolved
  Eigen::MatrixXcd ground_basis;  // computational-basis payloads as saved
  Eigen::MatrixXcd anti_basis;
  nlohmann::json header;
};

LoadedOperator load_operator(const std::string& prefix);

nlohmann::json model_spec_to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const nlohmann::json& j);

}  // namespace eigencond
