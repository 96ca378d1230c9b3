#pragma once

#include <string>

#include <json.hpp>

namespace klab {

// Aggregates a run directory into summary.json and a plot-ready
// plot.csv (epsilon, mass, cohomological_mass, sup_u, inf_T).
// Throws ConfigError when the manifest is missing.
nlohmann::json make_report(const std::string& dir);

}  // namespace klab
