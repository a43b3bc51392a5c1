#include "eigencond/operator_io.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <fstream>

namespace eigencond {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "binary payloads are written as little-endian doubles");

namespace {

struct PayloadWriter {
  std::ofstream out;
  std::size_t offset = 0;  // in doubles

  explicit PayloadWriter(const std::string& path) : out(path, std::ios::binary) {
    if (!out) throw Error("cannot open payload file: " + path);
  }

  json write_real(const Eigen::VectorXd& v) {
    json desc = {{"offset", offset}, {"count", v.size()}, {"kind", "real"}};
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(sizeof(double) * v.size()));
    offset += static_cast<std::size_t>(v.size());
    return desc;
  }

  json write_complex(const Eigen::MatrixXcd& m) {
    json desc = {{"offset", offset}, {"rows", m.rows()}, {"cols", m.cols()},
                 {"kind", "complex-interleaved"}};
    // column-major, re/im interleaved
    for (Index c = 0; c < m.cols(); ++c)
      for (Index r = 0; r < m.rows(); ++r) {
        double re = m(r, c).real(), im = m(r, c).imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof(double));
        out.write(reinterpret_cast<const char*>(&im), sizeof(double));
      }
    offset += static_cast<std::size_t>(2 * m.rows() * m.cols());
    return desc;
  }
};

Eigen::VectorXd read_real(std::ifstream& in, const json& desc) {
  Eigen::VectorXd v(desc.at("count").get<Index>());
  in.seekg(static_cast<std::streamoff>(desc.at("offset").get<std::size_t>() * sizeof(double)));
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(sizeof(double) * v.size()));
  return v;
}

Eigen::MatrixXcd read_complex(std::ifstream& in, const json& desc) {
  Eigen::MatrixXcd m(desc.at("rows").get<Index>(), desc.at("cols").get<Index>());
  in.seekg(static_cast<std::streamoff>(desc.at("offset").get<std::size_t>() * sizeof(double)));
  for (Index c = 0; c < m.cols(); ++c)
    for (Index r = 0; r < m.rows(); ++r) {
      double re = 0, im = 0;
      in.read(reinterpret_cast<char*>(&re), sizeof(double));
      in.read(reinterpret_cast<char*>(&im), sizeof(double));
      m(r, c) = Complex(re, im);
    }
  return m;
}

json space_to_json(const GroundSpaceInfo& info) {
  return {{"degeneracy", info.degeneracy},
          {"energy", info.energy},
          {"gap_to_next", info.gap_to_next}};
}

}  // namespace

json model_spec_to_json(const ModelSpec& spec) {
  json j;
  j["family"] = to_string(spec.family);
  j["sites"] = spec.sites;
  j["boundary"] = to_string(spec.boundary);
  j["seed"] = spec.seed;
  json params = json::object();
  for (const auto& [k, v] : spec.parameters) params[k] = v;
  j["params"] = params;
  return j;
}

ModelSpec model_spec_from_json(const json& j) {
  ModelSpec spec;
  spec.family = model_family_from_string(j.at("family").get<std::string>());
  spec.sites = j.at("sites").get<int>();
  if (j.contains("boundary")) {
    std::string b = j.at("boundary").get<std::string>();
    if (b != "open" && b != "periodic") throw ConfigError("boundary must be open|periodic");
    spec.boundary = b == "open" ? Boundary::Open : Boundary::Periodic;
    spec.boundary_set = true;
  } else {
    spec.boundary =
        spec.family == ModelFamily::Heisenberg1D ? Boundary::Periodic : Boundary::Open;
  }
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("params"))
    for (const auto& [k, v] : j.at("params").items())
      spec.parameters[k] = v.get<double>();
  return spec;
}

void save_operator(const HamiltonianOperator& h, const ModelSpec* spec,
                   const std::string& prefix) {
  if (!h.resolved()) throw Error("resolve the operator before saving");
  PayloadWriter payload(prefix + ".bin");
  json header;
  header["format"] = "eigencond-operator";
  header["version"] = 1;
  header["sites"] = h.sites();
  header["dimension"] = h.dimension();
  header["e0"] = h.shift();
  header["model"] = h.label();
  if (spec) header["model_spec"] = model_spec_to_json(*spec);
  header["ground"] = space_to_json(h.ground_space());
  header["anti_ground"] = space_to_json(h.anti_ground_space());
  json arrays = json::object();
  if (h.has_spectrum()) arrays["spectrum"] = payload.write_real(h.spectrum());
  if (h.ground_space().has_basis())
    arrays["ground_basis"] = payload.write_complex(h.ground_space().basis);
  if (h.anti_ground_space().has_basis())
    arrays["anti_basis"] = payload.write_complex(h.anti_ground_space().basis);
  header["arrays"] = arrays;

  std::ofstream jf(prefix + ".json");
  if (!jf) throw Error("cannot open header file: " + prefix + ".json");
  jf << header.dump(2) << "\n";
}

LoadedOperator load_operator(const std::string& prefix) {
  std::ifstream jf(prefix + ".json");
  if (!jf) throw Error("cannot open header file: " + prefix + ".json");
  json header = json::parse(jf);
  std::ifstream bin(prefix + ".bin", std::ios::binary);
  if (!bin) throw Error("cannot open payload file: " + prefix + ".bin");

  const json& arrays = header.at("arrays");
  if (!arrays.contains("spectrum"))
    throw Error("operator file has no spectrum payload");
  Eigen::VectorXd spectrum = read_real(bin, arrays.at("spectrum"));

  LoadedOperator out{HamiltonianOperator::from_spectrum(
                         header.at("sites").get<int>(),
                         spectrum.array() - header["e0"].get<double>()),
                     Eigen::MatrixXcd(), Eigen::MatrixXcd(), header};
  out.op.resolve(ResolveMode::Full);
  out.op.set_label(header.value("model", ""));
  if (arrays.contains("ground_basis")) out.ground_basis = read_complex(bin, arrays.at("ground_basis"));
  if (arrays.contains("anti_basis")) out.anti_basis = read_complex(bin, arrays.at("anti_basis"));
  return out;
}

}  // namespace eigencond
