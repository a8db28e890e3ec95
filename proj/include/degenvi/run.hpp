#pragma once

#include "degenvi/config.hpp"

#include <map>
#include <string>

namespace degenvi {

/// Everything a run produces. `report` is deterministic for a given
/// config and seed; timings live in `timing` only.
struct RunArtifacts {
    nlohmann::json report;
    nlohmann::json timing;
    std::string fields_csv;                    ///< empty when no nodal field applies
    std::map<std::string, std::string> extra;  ///< further CSV files by name
    bool pass = true;
};

inline constexpr const char* kFieldsHeader = "x,y,u,psi,gap,active";

/// Executes the configured command in memory.
RunArtifacts execute(const RunConfig& config);

/// Writes report.json, timing.json, fields.csv and extra CSVs to dir.
void write_artifacts(const RunArtifacts& artifacts, const std::string& dir);

/// execute() plus write_artifacts(); 0 when every check passes, 2 on a
/// failed check, 1 on error (message on stderr).
int run(const RunConfig& config);

}  // namespace degenvi
