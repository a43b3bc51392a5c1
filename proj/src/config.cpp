#include "eigencond/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>

#include "eigencond/operator_io.hpp"
#include "eigencond/toml_lite.hpp"

namespace eigencond {

using nlohmann::json;

namespace {

void check_keys(const json& table, const std::string& name,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : table.items())
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + key + "' in [" + name + "]");
}

double num(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + " must be a number");
  return v.get<double>();
}

ModelSpec parse_model(const json& table) {
  static const std::set<std::string> allowed = {"family",   "sites", "boundary", "seed",
                                                "h_x",      "h_z",   "J",        "Lx",
                                                "Ly",       "exact_degeneracy_only"};
  check_keys(table, "model", allowed);
  if (!table.contains("family")) throw ConfigError("missing required field 'family' in [model]");
  if (!table.contains("sites")) throw ConfigError("missing required field 'sites' in [model]");

  json j;
  j["family"] = table.at("family");
  j["sites"] = table.at("sites");
  if (table.contains("boundary")) j["boundary"] = table.at("boundary");
  if (table.contains("seed")) j["seed"] = table.at("seed");
  json params = json::object();
  for (const char* key : {"h_x", "h_z", "J", "Lx", "Ly"})
    if (table.contains(key)) params[key] = num(table.at(key), std::string("model.") + key);
  j["params"] = params;
  ModelSpec spec = model_spec_from_json(j);
  if (table.contains("exact_degeneracy_only"))
    spec.exact_degeneracy_only = table.at("exact_degeneracy_only").get<bool>();

  if ((spec.family == ModelFamily::Tfim1D || spec.family == ModelFamily::Tfim2D) &&
      !spec.has_parameter("h_x"))
    throw ConfigError("missing required field 'h_x' in [model] for a TFIM family");
  if (spec.sites < 1) throw ConfigError("model.sites must be positive");
  return spec;
}

SamplerRunConfig parse_sampler(const json& table) {
  static const std::set<std::string> allowed = {
      "n_live",     "path_length", "step_theta",  "ns_moves", "max_iterations",
      "target_energy", "chains",   "bin_width",   "both_tails", "dump_states",
      "retry_cap"};
  check_keys(table, "sampler", allowed);
  SamplerRunConfig cfg;
  if (table.contains("n_live")) cfg.gmc.n_live = table.at("n_live").get<int>();
  if (table.contains("path_length")) cfg.gmc.path_length = num(table.at("path_length"), "sampler.path_length");
  if (table.contains("step_theta")) cfg.gmc.step_theta = num(table.at("step_theta"), "sampler.step_theta");
  if (table.contains("ns_moves")) cfg.gmc.ns_moves = table.at("ns_moves").get<int>();
  if (table.contains("max_iterations")) cfg.gmc.max_iterations = table.at("max_iterations").get<long>();
  if (table.contains("target_energy")) cfg.gmc.target_energy = num(table.at("target_energy"), "sampler.target_energy");
  if (table.contains("retry_cap")) cfg.gmc.retry_cap = table.at("retry_cap").get<int>();
  if (table.contains("chains")) cfg.chains = table.at("chains").get<int>();
  if (table.contains("bin_width")) cfg.bin_width = num(table.at("bin_width"), "sampler.bin_width");
  if (table.contains("both_tails")) cfg.both_tails = table.at("both_tails").get<bool>();
  if (table.contains("dump_states")) cfg.dump_states = table.at("dump_states").get<bool>();
  try {
    cfg.gmc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[sampler]: ") + e.what());
  }
  if (cfg.chains < 1) throw ConfigError("sampler.chains must be positive");
  if (!(cfg.bin_width > 0)) throw ConfigError("sampler.bin_width must be positive");
  return cfg;
}

EnsembleRunConfig parse_ensemble(const json& table) {
  static const std::set<std::string> allowed = {"mode", "sizes", "beta_points",
                                                "ensemble_draws"};
  check_keys(table, "ensemble", allowed);
  EnsembleRunConfig cfg;
  if (table.contains("mode")) cfg.mode = table.at("mode").get<std::string>();
  static const std::set<std::string> modes = {"curve", "collapse", "near-degeneracy",
                                              "goe-typical"};
  if (!modes.count(cfg.mode)) throw ConfigError("unknown ensemble.mode: " + cfg.mode);
  if (table.contains("sizes"))
    for (const auto& s : table.at("sizes")) cfg.sizes.push_back(s.get<int>());
  if (table.contains("beta_points")) cfg.beta_points = table.at("beta_points").get<int>();
  if (table.contains("ensemble_draws")) cfg.ensemble_draws = table.at("ensemble_draws").get<int>();
  if (cfg.beta_points < 2) throw ConfigError("ensemble.beta_points must be >= 2");
  return cfg;
}

CriticalRunConfig parse_critical(const json& table) {
  static const std::set<std::string> allowed = {"method", "sizes",      "probes",
                                                "solver_tol", "seeds",  "target_relative_stderr"};
  check_keys(table, "critical", allowed);
  CriticalRunConfig cfg;
  if (table.contains("method")) cfg.method = table.at("method").get<std::string>();
  static const std::set<std::string> methods = {"auto", "exact", "stochastic", "free-fermion",
                                                "moment"};
  if (!methods.count(cfg.method)) throw ConfigError("unknown critical.method: " + cfg.method);
  if (table.contains("sizes"))
    for (const auto& s : table.at("sizes")) cfg.sizes.push_back(s.get<int>());
  if (table.contains("probes")) cfg.probes = table.at("probes").get<int>();
  if (table.contains("solver_tol")) cfg.solver_tol = num(table.at("solver_tol"), "critical.solver_tol");
  if (table.contains("seeds")) cfg.seeds = table.at("seeds").get<int>();
  if (table.contains("target_relative_stderr"))
    cfg.target_relative_stderr = num(table.at("target_relative_stderr"), "critical.target_relative_stderr");
  return cfg;
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  static const std::set<std::string> tables = {"model", "sampler", "ensemble", "critical",
                                               "run"};
  check_keys(doc, "config", tables);
  if (!doc.contains("model")) throw ConfigError("missing required table [model]");
  RunConfig cfg;
  cfg.model = parse_model(doc.at("model"));
  if (doc.contains("sampler")) cfg.sampler = parse_sampler(doc.at("sampler"));
  if (doc.contains("ensemble")) cfg.ensemble = parse_ensemble(doc.at("ensemble"));
  if (doc.contains("critical")) cfg.critical = parse_critical(doc.at("critical"));
  if (doc.contains("run")) {
    static const std::set<std::string> allowed = {"seed", "threads"};
    check_keys(doc.at("run"), "run", allowed);
    if (doc.at("run").contains("seed")) cfg.seed = doc.at("run").at("seed").get<std::uint64_t>();
    if (doc.at("run").contains("threads")) cfg.threads = doc.at("run").at("threads").get<int>();
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_run_config(json::parse(in, nullptr, true, true));
  }
  return parse_run_config(parse_toml_file(path));
}

nlohmann::json RunConfig::raw() const {
  json j;
  j["model"] = model_spec_to_json(model);
  j["run"] = {{"seed", seed}, {"threads", threads}};
  j["sampler"] = {{"n_live", sampler.gmc.n_live},
                  {"path_length", sampler.gmc.path_length},
                  {"step_theta", sampler.gmc.step_theta},
                  {"ns_moves", sampler.gmc.ns_moves},
                  {"max_iterations", sampler.gmc.max_iterations},
                  {"chains", sampler.chains},
                  {"bin_width", sampler.bin_width},
                  {"both_tails", sampler.both_tails},
                  {"dump_states", sampler.dump_states}};
  if (sampler.gmc.target_energy) j["sampler"]["target_energy"] = *sampler.gmc.target_energy;
  j["ensemble"] = {{"mode", ensemble.mode},
                   {"sizes", ensemble.sizes},
                   {"beta_points", ensemble.beta_points},
                   {"ensemble_draws", ensemble.ensemble_draws}};
  j["critical"] = {{"method", critical.method},
                   {"sizes", critical.sizes},
                   {"probes", critical.probes},
                   {"solver_tol", critical.solver_tol},
                   {"seeds", critical.seeds},
                   {"target_relative_stderr", critical.target_relative_stderr}};
  return j;
}

}  // namespace eigencond
