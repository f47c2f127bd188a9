#pragma once

// Report objects, their JSON form, and plot-data CSV emission.
//
// A report file is one JSON object. Everything except the "header" member is
// a pure function of (config, seed); "header" holds the wall-clock timestamp
// and is excluded from determinism comparisons. The layout is documented in
// docs/report.schema.json and checked by validate_report().

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace pscend {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolName = "pscend";
inline constexpr const char* kToolVersion = "0.1.0";

/// Curve samples, one row per sample, columns named in `columns`.
struct PlotData {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    bool empty() const { return columns.empty() || rows.empty(); }
};

struct Report {
    int schema_version = kSchemaVersion;
    std::string tool_version = kToolVersion;
    std::uint64_t seed = 0;
    nlohmann::json config = nlohmann::json::object();
    nlohmann::json results = nlohmann::json::object();
    PlotData plot;
    std::string timestamp;  // mutable header, not part of the deterministic body
};

/// Full report, including the header.
nlohmann::json to_json(const Report& report);
/// Report without the header; byte-identical for identical config and seed.
nlohmann::json deterministic_body(const Report& report);
/// Inverse of to_json. Throws DomainError if the object does not validate.
Report report_from_json(const nlohmann::json& j);

/// Problems found against the published layout; empty means valid.
std::vector<std::string> validate_report(const nlohmann::json& j);

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

/// Writes `text` to `path`, creating parent directories. Throws IoError if
/// the file exists and `force` is false, or if it cannot be written.
void write_text_file(const std::string& path, const std::string& text, bool force);

void write_report(const Report& report, const std::string& path, bool force);

/// CSV text: header row, then one row per sample, 17 significant digits.
/// Throws DomainError on an empty curve set or a non-finite value.
std::string plot_csv(const PlotData& plot);

void emit_plot_data(const Report& report, const std::string& path, bool force);

/// %.17g, which round-trips every finite double.
std::string format_double(double v);

}  // namespace pscend
