#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psub/io.hpp"

namespace psub::cli {

struct VerbOutput {
    json result;
    /// When non-empty, printed one JSON document per line instead of `result`.
    std::vector<json> lines;
    /// When set, printed verbatim instead of `result` (CSV tables).
    std::optional<std::string> text;
};

/// Operations addressable by name, e.g. "lr exact", "ss deal", "distinguish".
const std::vector<std::string>& operations();

/// Runs one verb with JSON arguments (file-valued arguments may be inline objects).
VerbOutput run_verb(const std::string& operation, const json& args);

/// Exit status for an exception thrown by run_verb: 2 validation, 3 guard, 1 otherwise.
int exit_code(const std::exception& e);
json error_object(const std::exception& e);

/// FNV-1a over the canonical dump, ignoring "out".
std::string config_hash(const json& config);

struct ExperimentSummary {
    std::string out;
    std::string hash;
    std::size_t points = 0;
    std::size_t computed = 0;
    std::size_t skipped = 0;
};

/// Cartesian product of the grid, last key fastest, in sorted key order.
std::vector<json> grid_points(const json& grid);

ExperimentSummary run_experiment(const json& config, const std::optional<std::string>& out_override = std::nullopt);

/// CSV with header x,y[,stderr] sorted by x, from records whose metric is y.
std::string emit_table(const std::string& results, const std::string& x, const std::string& y);

}  // namespace psub::cli
