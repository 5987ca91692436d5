#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "confocal/report.hpp"

namespace confocal {

/// Experiment run request: name, flat key-value parameters, seed, tolerance
/// override. Unknown parameter keys are rejected.
struct ExperimentConfig {
    std::string experiment;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 20240901;
    double tol = 0.0; // 0 = experiment default
    bool timing = false;
    bool want_svg = false;
};

struct ExperimentOutput {
    ExperimentReport report;
    std::optional<std::string> svg;
};

/// Names of the available experiments.
const std::vector<std::string>& experiment_names();

/// Parses a flat key = value config file (# comments); throws ConfigError.
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Runs the named experiment; ConfigError for bad input; individual
/// experiment failures are reported in the result with pass = false.
ExperimentOutput run(const ExperimentConfig& cfg);

} // namespace confocal
