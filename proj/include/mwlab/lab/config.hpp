#pragma once

// Experiment configuration: JSON, lower_snake_case keys, every key optional,
// unknown keys rejected.

#include "mwlab/generators.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mwlab::lab {

struct NormSettings {
  int restarts = 32;
  int max_iterations = 400;
  int ascent_iterations = 5000;
  double tolerance = 1e-10;
};

struct ExperimentConfig {
  std::string suite = "identities";
  int dimension = 1;
  std::vector<int> depths{4, 5};
  int n = 2;  // weight and symbol size
  double p = 2.0;
  WeightSpec u;
  WeightSpec v;
  SymbolSpec b;
  std::uint64_t seed = 1;
  int instances = 20;
  NormSettings norm;
  std::vector<double> exponents;    // int_ub: the exponents swept
  std::vector<double> rescale;      // int_ub: B -> r B sweep
  std::vector<double> bump;         // orlicz: bump parameters eta
  double ap_cap = 8.0;              // embed: [U]_{A_p} ceiling
  double drift_limit = 2.0;
  int max_cells = 4096;             // resource cap per grid
  std::string csv;
  std::string json;
};

/// Suite names known to run_suite, in `verify all` order.
const std::vector<std::string>& suite_names();

/// Desk-scale defaults of one suite.
ExperimentConfig default_config(const std::string& suite);

/// Overlays the keys of a JSON object text on a base configuration.
/// Throws ConfigError on malformed JSON, unknown keys or bad values.
ExperimentConfig apply_json(const ExperimentConfig& base, const std::string& text);

/// Reads a config file. A file holding {"suites": [ ... ]} yields one config
/// per entry (each overlaid on its suite's defaults); otherwise one config.
std::vector<ExperimentConfig> load_config_file(const std::string& path, const std::string& suite_hint = "");

/// Canonical JSON text of a configuration (sorted keys).
std::string to_json(const ExperimentConfig& config);

/// Range checks; throws ConfigError.
void validate(const ExperimentConfig& config);

/// "<suite>-d<dimension>": the stem of report file names.
std::string report_stem(const ExperimentConfig& config);

}  // namespace mwlab::lab
