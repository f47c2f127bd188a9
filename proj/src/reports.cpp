#include "pscend/reports.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pscend/errors.hpp"

namespace pscend {

namespace {

const char* const kCommands[] = {"verify", "certify", "sweep", "band", "catalog", "hypothesis"};
const char* const kStatuses[] = {"holds", "violated", "inconclusive", "info"};

void check_finite(const nlohmann::json& j, const std::string& where, std::vector<std::string>& errors) {
    if (j.is_number_float() && !std::isfinite(j.get<double>())) {
        errors.push_back(where + ": non-finite number");
    } else if (j.is_object()) {
        for (const auto& [k, v] : j.items()) check_finite(v, where + "." + k, errors);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) check_finite(j[i], where + "[" + std::to_string(i) + "]", errors);
    }
}

template <std::size_t N>
bool one_of(const std::string& s, const char* const (&options)[N]) {
    for (const char* o : options) {
        if (s == o) return true;
    }
    return false;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json deterministic_body(const Report& report) {
    nlohmann::json j;
    j["schema_version"] = report.schema_version;
    j["tool"] = {{"name", kToolName}, {"version", report.tool_version}};
    j["seed"] = report.seed;
    j["config"] = report.config;
    j["results"] = report.results;
    if (report.plot.empty()) {
        j["plot"] = nullptr;
    } else {
        j["plot"] = {{"columns", report.plot.columns}, {"rows", report.plot.rows}};
    }
    return j;
}

nlohmann::json to_json(const Report& report) {
    nlohmann::json j = deterministic_body(report);
    j["header"] = {{"timestamp", report.timestamp}};
    return j;
}

std::vector<std::string> validate_report(const nlohmann::json& j) {
    std::vector<std::string> errors;
    if (!j.is_object()) return {"report is not an object"};
    for (const auto& [k, v] : j.items()) {
        if (k != "schema_version" && k != "tool" && k != "seed" && k != "config" && k != "results" &&
            k != "plot" && k != "header") {
            errors.push_back("unknown member '" + k + "'");
        }
    }
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
        j["schema_version"].get<int>() < 1 || j["schema_version"].get<int>() > kSchemaVersion) {
        errors.push_back("schema_version must be an integer in [1, " + std::to_string(kSchemaVersion) + "]");
    }
    if (!j.contains("tool") || !j["tool"].is_object() || !j["tool"].contains("name") ||
        !j["tool"]["name"].is_string() || !j["tool"].contains("version") || !j["tool"]["version"].is_string()) {
        errors.push_back("tool must be an object with string name and version");
    }
    if (!j.contains("seed") || !j["seed"].is_number_unsigned()) errors.push_back("seed must be a nonnegative integer");
    if (!j.contains("config") || !j["config"].is_object() || !j["config"].contains("command") ||
        !j["config"]["command"].is_string() || !one_of(j["config"]["command"].get<std::string>(), kCommands)) {
        errors.push_back("config must be an object with a known command");
    }
    if (!j.contains("results") || !j["results"].is_object() || !j["results"].contains("status") ||
        !j["results"]["status"].is_string() || !one_of(j["results"]["status"].get<std::string>(), kStatuses)) {
        errors.push_back("results must be an object with status holds|violated|inconclusive|info");
    }
    if (!j.contains("plot")) {
        errors.push_back("plot is required (null when there is no curve data)");
    } else if (!j["plot"].is_null()) {
        const auto& p = j["plot"];
        if (!p.is_object() || !p.contains("columns") || !p.contains("rows") || !p["columns"].is_array() ||
            !p["rows"].is_array() || p["columns"].empty() || p["rows"].empty()) {
            errors.push_back("plot must have nonempty columns and rows");
        } else {
            for (const auto& c : p["columns"]) {
                if (!c.is_string()) errors.push_back("plot column names must be strings");
            }
            for (const auto& r : p["rows"]) {
                if (!r.is_array() || r.size() != p["columns"].size()) {
                    errors.push_back("plot rows must match the column count");
                    break;
                }
                for (const auto& v : r) {
                    if (!v.is_number()) errors.push_back("plot values must be numbers");
                }
            }
        }
    }
    if (j.contains("header")) {
        if (!j["header"].is_object() || !j["header"].contains("timestamp") || !j["header"]["timestamp"].is_string()) {
            errors.push_back("header must be an object with a string timestamp");
        }
    }
    check_finite(j, "report", errors);
    return errors;
}

Report report_from_json(const nlohmann::json& j) {
    const auto errors = validate_report(j);
    if (!errors.empty()) throw DomainError("invalid report: " + errors.front());
    Report r;
    r.schema_version = j["schema_version"].get<int>();
    r.tool_version = j["tool"]["version"].get<std::string>();
    r.seed = j["seed"].get<std::uint64_t>();
    r.config = j["config"];
    r.results = j["results"];
    if (!j["plot"].is_null()) {
        r.plot.columns = j["plot"]["columns"].get<std::vector<std::string>>();
        r.plot.rows = j["plot"]["rows"].get<std::vector<std::vector<double>>>();
    }
    if (j.contains("header")) r.timestamp = j["header"]["timestamp"].get<std::string>();
    return r;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text, bool force) {
    namespace fs = std::filesystem;
    const fs::path p(path);
    std::error_code ec;
    if (fs::exists(p, ec) && !force) {
        throw IoError("refusing to overwrite existing file '" + path + "' (use --force)");
    }
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + p.parent_path().string() + "': " + ec.message());
    }
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

void write_report(const Report& report, const std::string& path, bool force) {
    const nlohmann::json j = to_json(report);
    const auto errors = validate_report(j);
    if (!errors.empty()) throw DomainError("refusing to write an invalid report: " + errors.front());
    write_text_file(path, j.dump(2) + "\n", force);
}

std::string plot_csv(const PlotData& plot) {
    if (plot.empty()) throw DomainError("no curve data to emit");
    std::ostringstream os;
    for (std::size_t c = 0; c < plot.columns.size(); ++c) os << (c ? "," : "") << plot.columns[c];
    os << "\n";
    for (const auto& row : plot.rows) {
        if (row.size() != plot.columns.size()) throw DomainError("plot row does not match the column count");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!std::isfinite(row[c])) throw DomainError("non-finite value in plot data");
            os << (c ? "," : "") << format_double(row[c]);
        }
        os << "\n";
    }
    return os.str();
}

void emit_plot_data(const Report& report, const std::string& path, bool force) {
    write_text_file(path, plot_csv(report.plot), force);
}

}  // namespace pscend
