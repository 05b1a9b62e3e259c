#pragma once

// Verification suites, one per result under test.

#include "mwlab/lab/config.hpp"
#include "mwlab/lab/report.hpp"

#include <string>
#include <utility>
#include <vector>

namespace mwlab::lab {

/// Generates the suite's seeded instances, evaluates both sides of every
/// relation, records exact checks and fitted constants, sets the verdict.
/// Throws ConfigError for an unknown suite or a grid above max_cells.
ExperimentReport run_suite(const ExperimentConfig& config);

/// The configurations `verify all` runs on defaults (some suites run on
/// several grids).
std::vector<ExperimentConfig> default_plan();

/// Result label -> suites exercising it.
const std::vector<std::pair<std::string, std::vector<std::string>>>& coverage_registry();

}  // namespace mwlab::lab
