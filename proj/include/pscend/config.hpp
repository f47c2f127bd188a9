#pragma once

// Run configuration shared by the config file and the command-line flags.
//
// File format: one `key = value` per line; `#` starts a comment; blank lines
// are ignored. Keys are the RunConfig field names below, and each has a flag
// `--key` of the same name. Lists (phi_samples) are whitespace- or
// comma-separated.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pscend/band_families.hpp"

namespace pscend {

enum class Command { verify, certify, sweep, band, catalog, hypothesis };

std::string to_string(Command command);
Command command_from_string(const std::string& name);

using RawConfig = std::map<std::string, std::string>;

struct RunConfig {
    Command command = Command::catalog;

    // Warped-bundle cases.
    int n = 4;                    // total dimension
    double coeff = 0.5;           // a_0 (n = 4) or epsilon (n >= 5)
    std::optional<double> omega_sup;  // synthetic base with |Omega| = omega_sup everywhere
    std::string entry;            // catalog entry name
    double t_max = 100.0;         // [0, t_max] grid for certify (verify default: 20)
    int grid_points = 1001;
    int samples = 50;             // random oracle samples for verify
    double step = 1e-4;           // finite-difference step, chart units (verify default: 1e-3)
    int coeff_points = 200;       // sweep resolution over (0, 2 * threshold)

    // Bands.
    int genus = 1;
    double fiber_area = 1.0;      // area of (V, g_V)
    PhiSpec phi;
    double half_width = 1.0;      // T
    double L = 1.0;               // potential width
    double eps2 = 0.0;
    int models = 0;               // > 0 runs the randomized sweep instead of one model
    bool doubling = false;

    // Area-growth hypothesis.
    std::string samples_path;     // CSV of r,A pairs
    std::optional<double> area_coeff;  // synthesize A(r) = area_coeff * r^2
    int area_points = 20;

    std::uint64_t seed = 1;
    std::string output;           // report path
    std::string csv;              // plot data path
    bool force = false;           // allow overwriting existing outputs
};

/// Keys accepted in config files and as flags.
const std::vector<std::string>& config_keys();

/// Parses `key = value` text. Throws ConfigError on malformed lines or
/// unknown keys.
RawConfig parse_config_text(const std::string& text);
RawConfig read_config_file(const std::string& path);

/// Typed, validated configuration. Throws ConfigError naming the field.
RunConfig build_config(const RawConfig& raw);

nlohmann::json to_json(const RunConfig& config);

}  // namespace pscend
