#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fsi/config.hpp"
#include "fsi/diagnostics.hpp"

namespace fsi {

struct RunResult {
    bool ok = false;
    std::string failure_kind;    // validation | subiteration-divergence |
                                 // subiteration-non-convergence | linear-solver | non-finite
    std::string failure_detail;  // human-readable message (subproblem tag, residuals)
    int failed_step = -1;
    std::vector<std::string> validation;  // every violated constraint
    double epsilon_used = 0.0;
    std::vector<DiagnosticsRecord> records;
    std::optional<RelativeErrors> final_errors;  // mms scenarios only
};

/// Runs one configured simulation and writes diagnostics.csv, snapshots, the
/// effective config echo, and (on mms scenarios) errors.csv into the output
/// directory. Failures produce error.json and a nonzero-status result; a
/// validation failure writes nothing.
RunResult run(const RunConfig& config);

struct LevelResult {
    int level = 0;
    int n = 0;
    double dx = 0.0;
    double dt = 0.0;
    double epsilon = 0.0;
    RelativeErrors errors;
};

struct RatesResult {
    bool ok = false;
    std::string failure;  // first failed level's description
    std::vector<LevelResult> levels;
    std::vector<double> rate_v, rate_b, rate_phi;  // between consecutive levels
};

/// Refinement sweep {dt, dx} = 0.2 / 2^i with epsilon = 4 dx, writing
/// errors.csv and rates.csv. A failing level aborts the sweep; the completed
/// part of the table is preserved.
RatesResult mms_rates(int case_id, int level_lo, int level_hi, const RunConfig& base);

}  // namespace fsi
