#pragma once

#include <string>

#include <json.hpp>

namespace disperse {

/// Dispatches one named verification experiment from a JSON config and
/// returns the report (config echo, result scalars, pass flag, timing).
/// Throws ArgumentError for bad configs and NumericalError family for
/// failed computations; the CLI maps those to exit codes 2 and 3.
nlohmann::json run_experiment(const nlohmann::json& config);

/// Runs the config once per value of `axis`, optionally in parallel
/// (capped by the DISPERSE_UC_THREADS environment variable). Returns
/// {"rows": [report...], "csv": "...", "summary": {...}}. Rows that error
/// carry an "error" field instead of results.
nlohmann::json run_sweep(const nlohmann::json& config, const std::string& axis,
                         const std::vector<nlohmann::json>& values);

} // namespace disperse
