#include "mwlab/lab/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mwlab::lab {

using nlohmann::json;

namespace {

void reject_unknown(const json& object, const std::set<std::string>& known, const std::string& where) {
  if (!object.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& item : object.items())
    if (!known.count(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
}

template <class T>
T read(const json& object, const std::string& key, const std::string& where) {
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

std::array<double, 2> read_pair(const json& object, const std::string& key, const std::string& where) {
  const auto values = read<std::vector<double>>(object, key, where);
  if (values.size() != 2) throw ConfigError(where + "." + key + ": expected two numbers");
  return {values[0], values[1]};
}

WeightSpec weight_from(const json& j, WeightSpec spec, const std::string& where) {
  reject_unknown(j, {"kind", "amplitude", "angle_amplitude", "modes", "alpha", "center", "sigma", "path"}, where);
  if (j.contains("kind")) spec.kind = read<std::string>(j, "kind", where);
  if (j.contains("amplitude")) spec.amplitude = read<double>(j, "amplitude", where);
  if (j.contains("angle_amplitude")) spec.angle_amplitude = read<double>(j, "angle_amplitude", where);
  if (j.contains("modes")) spec.modes = read<int>(j, "modes", where);
  if (j.contains("alpha")) spec.alpha = read<std::vector<double>>(j, "alpha", where);
  if (j.contains("center")) spec.center = read_pair(j, "center", where);
  if (j.contains("sigma")) spec.sigma = read<double>(j, "sigma", where);
  if (j.contains("path")) spec.path = read<std::string>(j, "path", where);
  return spec;
}

SymbolSpec symbol_from(const json& j, SymbolSpec spec, const std::string& where) {
  reject_unknown(j, {"kind", "amplitude", "modes", "complex", "low", "high", "center", "path"}, where);
  if (j.contains("kind")) spec.kind = read<std::string>(j, "kind", where);
  if (j.contains("amplitude")) spec.amplitude = read<double>(j, "amplitude", where);
  if (j.contains("modes")) spec.modes = read<int>(j, "modes", where);
  if (j.contains("complex")) spec.complex = read<bool>(j, "complex", where);
  if (j.contains("low")) spec.low = read<double>(j, "low", where);
  if (j.contains("high")) spec.high = read<double>(j, "high", where);
  if (j.contains("center")) spec.center = read_pair(j, "center", where);
  if (j.contains("path")) spec.path = read<std::string>(j, "path", where);
  return spec;
}

json weight_json(const WeightSpec& s) {
  return {{"kind", s.kind},   {"amplitude", s.amplitude}, {"angle_amplitude", s.angle_amplitude},
          {"modes", s.modes}, {"alpha", s.alpha},         {"center", {s.center[0], s.center[1]}},
          {"sigma", s.sigma}, {"path", s.path}};
}

json symbol_json(const SymbolSpec& s) {
  return {{"kind", s.kind}, {"amplitude", s.amplitude}, {"modes", s.modes},
          {"complex", s.complex}, {"low", s.low}, {"high", s.high},
          {"center", {s.center[0], s.center[1]}}, {"path", s.path}};
}

ExperimentConfig overlay(ExperimentConfig c, const json& j, const std::string& w = "config") {
  static const std::set<std::string> known{"suite",     "dimension", "depths",      "n",         "p",
                                           "u",         "v",         "b",           "seed",      "instances",
                                           "norm",      "exponents", "rescale",     "bump",      "ap_cap",
                                           "drift_limit", "max_cells", "csv",       "json"};
  reject_unknown(j, known, w);
  if (j.contains("suite")) c.suite = read<std::string>(j, "suite", w);
  if (j.contains("dimension")) c.dimension = read<int>(j, "dimension", w);
  if (j.contains("depths")) c.depths = read<std::vector<int>>(j, "depths", w);
  if (j.contains("n")) c.n = read<int>(j, "n", w);
  if (j.contains("p")) c.p = read<double>(j, "p", w);
  if (j.contains("u")) c.u = weight_from(j.at("u"), c.u, w + ".u");
  if (j.contains("v")) c.v = weight_from(j.at("v"), c.v, w + ".v");
  if (j.contains("b")) c.b = symbol_from(j.at("b"), c.b, w + ".b");
  if (j.contains("seed")) c.seed = read<std::uint64_t>(j, "seed", w);
  if (j.contains("instances")) c.instances = read<int>(j, "instances", w);
  if (j.contains("norm")) {
    const json& nj = j.at("norm");
    reject_unknown(nj, {"restarts", "max_iterations", "ascent_iterations", "tolerance"}, w + ".norm");
    if (nj.contains("restarts")) c.norm.restarts = read<int>(nj, "restarts", w + ".norm");
    if (nj.contains("max_iterations")) c.norm.max_iterations = read<int>(nj, "max_iterations", w + ".norm");
    if (nj.contains("ascent_iterations"))
      c.norm.ascent_iterations = read<int>(nj, "ascent_iterations", w + ".norm");
    if (nj.contains("tolerance")) c.norm.tolerance = read<double>(nj, "tolerance", w + ".norm");
  }
  if (j.contains("exponents")) c.exponents = read<std::vector<double>>(j, "exponents", w);
  if (j.contains("rescale")) c.rescale = read<std::vector<double>>(j, "rescale", w);
  if (j.contains("bump")) c.bump = read<std::vector<double>>(j, "bump", w);
  if (j.contains("ap_cap")) c.ap_cap = read<double>(j, "ap_cap", w);
  if (j.contains("drift_limit")) c.drift_limit = read<double>(j, "drift_limit", w);
  if (j.contains("max_cells")) c.max_cells = read<int>(j, "max_cells", w);
  if (j.contains("csv")) c.csv = read<std::string>(j, "csv", w);
  if (j.contains("json")) c.json = read<std::string>(j, "json", w);
  return c;
}

json parse(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(where + ": malformed JSON (" + e.what() + ")");
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "decay",     "sparse_lem", "bloom_ub", "bloom_lb",
                                              "riesz",      "int_ub",    "ave_prop",   "ave_lem",  "strong_jn",
                                              "embed",      "orlicz",    "bloom_quant"};
  return names;
}

ExperimentConfig default_config(const std::string& suite) {
  bool known = false;
  for (const auto& s : suite_names()) known = known || s == suite;
  if (!known) throw ConfigError("unknown suite '" + suite + "'");
  ExperimentConfig c;
  c.suite = suite;
  c.u.kind = "rotated";
  c.u.amplitude = 0.8;
  c.u.angle_amplitude = 1.5;
  c.v = c.u;
  c.b.kind = "smooth";
  c.b.amplitude = 1.0;
  if (suite == "identities") {
    c.depths = {4};
  } else if (suite == "decay") {
    c.depths = {5};
    c.u.amplitude = 1.5;
    c.u.angle_amplitude = 2.0;
    c.v = c.u;
  } else if (suite == "bloom_ub" || suite == "bloom_lb") {
    c.n = 1;
    c.depths = {3, 4, 5};
  } else if (suite == "int_ub") {
    c.exponents = {2.0, 3.0, 1.5};
    c.rescale = {1.0, 2.0, 4.0, 8.0};
  } else if (suite == "ave_prop") {
    c.depths = {4};
  } else if (suite == "ave_lem") {
    c.depths = {4, 5};
  } else if (suite == "orlicz") {
    c.instances = 10;
    c.bump = {0.25, 0.5, 1.0, 2.0};
  } else if (suite == "bloom_quant") {
    c.v.kind = "identity";
  }
  return c;
}

ExperimentConfig apply_json(const ExperimentConfig& base, const std::string& text) {
  ExperimentConfig out = overlay(base, parse(text, "config"));
  validate(out);
  return out;
}

std::vector<ExperimentConfig> load_config_file(const std::string& path, const std::string& suite_hint) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const json j = parse(buffer.str(), path);
  if (!j.is_object()) throw ConfigError(path + ": expected a JSON object");
  std::vector<ExperimentConfig> out;
  auto one = [&](const json& entry) {
    if (!entry.is_object()) throw ConfigError(path + ": each config must be a JSON object");
    std::string suite = suite_hint;
    if (entry.contains("suite")) {
      suite = read<std::string>(entry, "suite", path);
      if (!suite_hint.empty() && suite_hint != "all" && suite != suite_hint)
        throw ConfigError(path + ": config is for suite '" + suite + "', not '" + suite_hint + "'");
    }
    if (suite.empty() || suite == "all") throw ConfigError(path + ": config names no suite");
    ExperimentConfig c = overlay(default_config(suite), entry, path);
    validate(c);
    out.push_back(std::move(c));
  };
  if (j.contains("suites")) {
    if (j.size() != 1 || !j.at("suites").is_array()) throw ConfigError(path + ": 'suites' must be the only key, an array");
    for (const json& entry : j.at("suites")) one(entry);
  } else {
    one(j);
  }
  return out;
}

std::string to_json(const ExperimentConfig& c) {
  const json j = {{"suite", c.suite},
                  {"dimension", c.dimension},
                  {"depths", c.depths},
                  {"n", c.n},
                  {"p", c.p},
                  {"u", weight_json(c.u)},
                  {"v", weight_json(c.v)},
                  {"b", symbol_json(c.b)},
                  {"seed", c.seed},
                  {"instances", c.instances},
                  {"norm",
                   {{"restarts", c.norm.restarts},
                    {"max_iterations", c.norm.max_iterations},
                    {"ascent_iterations", c.norm.ascent_iterations},
                    {"tolerance", c.norm.tolerance}}},
                  {"exponents", c.exponents},
                  {"rescale", c.rescale},
                  {"bump", c.bump},
                  {"ap_cap", c.ap_cap},
                  {"drift_limit", c.drift_limit},
                  {"max_cells", c.max_cells},
                  {"csv", c.csv},
                  {"json", c.json}};
  return j.dump();
}

void validate(const ExperimentConfig& c) {
  default_config(c.suite);
  if (c.dimension != 1 && c.dimension != 2) throw ConfigError("dimension must be 1 or 2");
  if (c.depths.empty()) throw ConfigError("depths must not be empty");
  for (int L : c.depths) {
    if (L < 0 || L > 12) throw ConfigError("depth out of range [0, 12]");
    const GridSpec grid{c.dimension, L};
    if (grid.cell_count() > c.max_cells)
      throw ConfigError("grid of " + std::to_string(grid.cell_count()) + " cells exceeds max_cells");
  }
  if (c.n < 1 || 2 * c.n > kMaxMatrixSize) throw ConfigError("n must lie in [1, 4]");
  if (!(c.p > 1.0) || !std::isfinite(c.p)) throw ConfigError("p must lie in (1, inf)");
  if (c.instances < 0) throw ConfigError("instances must be nonnegative");
  if (c.norm.restarts < 1 || c.norm.max_iterations < 1 || c.norm.ascent_iterations < 1 || !(c.norm.tolerance > 0.0))
    throw ConfigError("norm settings must be positive");
  for (double q : c.exponents)
    if (!(q > 1.0)) throw ConfigError("exponents must exceed 1");
  for (double r : c.rescale)
    if (!(r > 0.0)) throw ConfigError("rescale factors must be positive");
  for (double e : c.bump)
    if (!(e > 0.0)) throw ConfigError("bump parameters must be positive");
  if (!(c.ap_cap > 1.0)) throw ConfigError("ap_cap must exceed 1");
  if (!(c.drift_limit > 1.0)) throw ConfigError("drift_limit must exceed 1");
}

std::string report_stem(const ExperimentConfig& c) { return c.suite + "-d" + std::to_string(c.dimension); }

}  // namespace mwlab::lab
