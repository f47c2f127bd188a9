#pragma once

// Subcommand drivers. run() is a pure function of the configuration (apart
// from reading a samples file for `hypothesis`); execute() adds the
// timestamp, writes the outputs and prints a one-line summary.

#include <iosfwd>
#include <optional>
#include <string>

#include "pscend/config.hpp"
#include "pscend/reports.hpp"

namespace pscend {

inline constexpr int kExitOk = 0;        // success, or the checked property holds
inline constexpr int kExitUsage = 1;     // bad configuration or an operation error
inline constexpr int kExitNegative = 2;  // verdict negative, inconclusive or violated

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "PSCEND_OUTPUT_DIR";

struct RunOutcome {
    Report report;
    int exit_code = kExitOk;
    std::string summary;
};

RunOutcome run(const RunConfig& config);

struct OutputPaths {
    std::optional<std::string> report;
    std::optional<std::string> csv;
};

/// Explicit paths win; otherwise, when `output_dir` is set, files are named
/// <command>-seed<seed>.json / .csv inside it. The CSV default applies only
/// when the report has curve data.
OutputPaths resolve_outputs(const RunConfig& config, const Report& report,
                            const std::optional<std::string>& output_dir);

/// Runs, writes outputs (the report goes to `out` when no report path
/// resolves) and returns the exit code. Errors are reported on `err` with the
/// command name and mapped to kExitUsage.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace pscend
