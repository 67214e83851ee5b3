#include "fpxl/config.hpp"

#include <cstdlib>
#include <fstream>

#include "fpxl/errors.hpp"

namespace fpxl {

using nlohmann::json;

namespace {

ExponentSpec exponent_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("preset"))
    throw ConfigError("config field '" + where + "' must be an object with a 'preset' key");
  ExponentSpec spec;
  spec.preset = j.at("preset").get<std::string>();
  spec.params.clear();
  for (const auto& [key, value] : j.items()) {
    if (key == "preset") continue;
    if (!value.is_number())
      throw ConfigError("config field '" + where + "." + key + "' must be a number");
    spec.params[key] = value.get<double>();
  }
  return spec;
}

json exponent_to_json(const ExponentSpec& spec) {
  json j{{"preset", spec.preset}};
  for (const auto& [key, value] : spec.params) j[key] = value;
  return j;
}

template <typename T>
void read_if(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config field '" + where + key + "': " + e.what());
  }
}

}  // namespace

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  RunConfig cfg;

  if (j.contains("domain")) {
    const json& d = j.at("domain");
    read_if(d, "dim", cfg.domain.dim, "domain.");
    if (d.contains("extents")) {
      const auto e = d.at("extents").get<std::vector<double>>();
      if (e.empty() || e.size() > 2)
        throw ConfigError("domain.extents must hold 1 or 2 lengths");
      for (std::size_t k = 0; k < e.size(); ++k) cfg.domain.extents[k] = e[k];
      if (static_cast<int>(e.size()) != cfg.domain.dim)
        throw ConfigError("domain.extents length must equal domain.dim");
    }
  }
  read_if(j, "h", cfg.h, "");
  read_if(j, "s", cfg.s, "");
  if (j.contains("exponents")) {
    const json& e = j.at("exponents");
    if (e.contains("p")) cfg.p = exponent_from_json(e.at("p"), "exponents.p");
    if (e.contains("r")) cfg.r = exponent_from_json(e.at("r"), "exponents.r");
  }
  read_if(j, "lambda", cfg.lambda, "");
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    SweepSpec spec;
    read_if(s, "from", spec.from, "sweep.");
    read_if(s, "to", spec.to, "sweep.");
    read_if(s, "count", spec.count, "sweep.");
    if (spec.count < 2) throw ConfigError("sweep.count must be >= 2");
    cfg.sweep = spec;
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    std::string strategy = strategy_name(cfg.solver.strategy);
    read_if(s, "strategy", strategy, "solver.");
    cfg.solver.strategy = parse_strategy(strategy);
    read_if(s, "maxIter", cfg.solver.maxIter, "solver.");
    read_if(s, "tol", cfg.solver.tol, "solver.");
    read_if(s, "damping", cfg.solver.damping, "solver.");
    read_if(s, "continuationSteps", cfg.solver.continuationSteps, "solver.");
    read_if(s, "seedFunction", cfg.solver.seedFunction, "solver.");
    read_if(s, "innerTolFactor", cfg.solver.innerTolFactor, "solver.");
    read_if(s, "innerMaxIter", cfg.solver.innerMaxIter, "solver.");
  }
  if (j.contains("degree")) {
    const json& d = j.at("degree");
    read_if(d, "map", cfg.degree.map, "degree.");
    read_if(d, "dim", cfg.degree.dim, "degree.");
    read_if(d, "boundaryResolution", cfg.degree.boundaryResolution, "degree.");
    auto read_pair = [&](const char* key, std::array<double, 2>& out) {
      if (!d.contains(key)) return;
      const auto v = d.at(key).get<std::vector<double>>();
      for (std::size_t k = 0; k < std::min<std::size_t>(v.size(), 2); ++k) out[k] = v[k];
    };
    read_pair("lo", cfg.degree.lo);
    read_pair("hi", cfg.degree.hi);
    read_pair("target", cfg.degree.target);
    if (d.contains("params"))
      for (const auto& [key, value] : d.at("params").items())
        cfg.degree.params[key] = value.get<double>();
  }
  read_if(j, "function", cfg.function, "");
  read_if(j, "verifySamples", cfg.verifySamples, "");
  read_if(j, "seed", cfg.seed, "");
  read_if(j, "threads", cfg.threads, "");
  read_if(j, "out", cfg.out, "");
  cfg.solver.seed = cfg.seed;
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["domain"] = {{"dim", cfg.domain.dim}};
  std::vector<double> extents(static_cast<std::size_t>(cfg.domain.dim));
  for (std::size_t k = 0; k < extents.size(); ++k) extents[k] = cfg.domain.extents[k];
  j["domain"]["extents"] = extents;
  j["h"] = cfg.h;
  j["s"] = cfg.s;
  j["exponents"] = {{"p", exponent_to_json(cfg.p)}, {"r", exponent_to_json(cfg.r)}};
  j["lambda"] = cfg.lambda;
  if (cfg.sweep)
    j["sweep"] = {{"from", cfg.sweep->from}, {"to", cfg.sweep->to}, {"count", cfg.sweep->count}};
  j["solver"] = {{"strategy", strategy_name(cfg.solver.strategy)},
                 {"maxIter", cfg.solver.maxIter},
                 {"tol", cfg.solver.tol},
                 {"damping", cfg.solver.damping},
                 {"continuationSteps", cfg.solver.continuationSteps},
                 {"seedFunction", cfg.solver.seedFunction},
                 {"innerTolFactor", cfg.solver.innerTolFactor},
                 {"innerMaxIter", cfg.solver.innerMaxIter}};
  json dp = json::object();
  for (const auto& [key, value] : cfg.degree.params) dp[key] = value;
  j["degree"] = {{"map", cfg.degree.map},
                 {"dim", cfg.degree.dim},
                 {"lo", std::vector<double>{cfg.degree.lo.begin(), cfg.degree.lo.end()}},
                 {"hi", std::vector<double>{cfg.degree.hi.begin(), cfg.degree.hi.end()}},
                 {"target", std::vector<double>{cfg.degree.target.begin(), cfg.degree.target.end()}},
                 {"boundaryResolution", cfg.degree.boundaryResolution},
                 {"params", dp}};
  j["function"] = cfg.function;
  j["verifySamples"] = cfg.verifySamples;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["out"] = cfg.out;
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  // manifests wrap the config; accept either form
  if (j.is_object() && j.contains("config")) return config_from_json(j.at("config"));
  return config_from_json(j);
}

void apply_env_overrides(RunConfig& cfg) {
  if (const char* v = std::getenv("FPXL_SEED")) {
    cfg.seed = std::strtoull(v, nullptr, 10);
    cfg.solver.seed = cfg.seed;
  }
  if (const char* v = std::getenv("FPXL_THREADS")) cfg.threads = std::atoi(v);
  if (const char* v = std::getenv("FPXL_OUT")) cfg.out = v;
  if (const char* v = std::getenv("FPXL_STRATEGY")) cfg.solver.strategy = parse_strategy(v);
}

ProblemData build_problem(const RunConfig& cfg) {
  return ProblemData::make(cfg.domain, cfg.h, cfg.s, make_two_point(cfg.p, cfg.domain),
                           make_one_point(cfg.r, cfg.domain), cfg.lambda);
}

}  // namespace fpxl
