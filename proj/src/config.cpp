#include "pscend/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pscend/errors.hpp"

namespace pscend {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ConfigError(key, "expected a finite number, got '" + text + "'");
    }
    return value;
}

long long parse_integer(const std::string& key, const std::string& text) {
    long long value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected an integer, got '" + text + "'");
    return value;
}

int parse_int(const std::string& key, const std::string& text) {
    const long long v = parse_integer(key, text);
    if (v < -1000000000LL || v > 1000000000LL) throw ConfigError(key, "integer out of range");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(key, "expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream is(normalized);
    std::vector<double> out;
    std::string token;
    while (is >> token) out.push_back(parse_double(key, token));
    return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(key, what);
}

}  // namespace

std::string to_string(Command command) {
    switch (command) {
        case Command::verify: return "verify";
        case Command::certify: return "certify";
        case Command::sweep: return "sweep";
        case Command::band: return "band";
        case Command::catalog: return "catalog";
        case Command::hypothesis: return "hypothesis";
    }
    return "catalog";
}

Command command_from_string(const std::string& name) {
    for (Command c : {Command::verify, Command::certify, Command::sweep, Command::band, Command::catalog,
                      Command::hypothesis}) {
        if (to_string(c) == name) return c;
    }
    throw ConfigError("command", "unknown command '" + name + "'");
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "command",   "n",          "coeff",        "omega_sup",  "entry",      "t_max",
        "grid_points", "samples",  "step",         "coeff_points", "genus",    "fiber_area",
        "phi",       "phi_amp",    "phi_rate",     "phi_power",  "phi_samples", "half_width",
        "L",         "eps2",       "models",       "doubling",   "samples_path", "area_coeff",
        "area_points", "seed",     "output",       "csv",        "force"};
    return keys;
}

RawConfig parse_config_text(const std::string& text) {
    RawConfig raw;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    const auto& keys = config_keys();
    while (std::getline(is, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError(key, "unknown configuration key");
        }
        raw[key] = value;
    }
    return raw;
}

RawConfig read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

RunConfig build_config(const RawConfig& raw) {
    const auto& keys = config_keys();
    for (const auto& [key, value] : raw) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError(key, "unknown configuration key");
        }
    }
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        const auto it = raw.find(key);
        if (it == raw.end()) return std::nullopt;
        return it->second;
    };

    RunConfig c;
    if (auto v = get("command")) c.command = command_from_string(*v);
    // verify samples far out in t, where R is small next to the metric
    // entries; a wider oracle step keeps roundoff below the 1e-5 tolerance.
    if (c.command == Command::verify) {
        c.t_max = 20.0;
        c.step = 1e-3;
    }

    if (auto v = get("n")) c.n = parse_int("n", *v);
    if (auto v = get("coeff")) c.coeff = parse_double("coeff", *v);
    if (auto v = get("omega_sup")) c.omega_sup = parse_double("omega_sup", *v);
    if (auto v = get("entry")) c.entry = *v;
    if (auto v = get("t_max")) c.t_max = parse_double("t_max", *v);
    if (auto v = get("grid_points")) c.grid_points = parse_int("grid_points", *v);
    if (auto v = get("samples")) c.samples = parse_int("samples", *v);
    if (auto v = get("step")) c.step = parse_double("step", *v);
    if (auto v = get("coeff_points")) c.coeff_points = parse_int("coeff_points", *v);
    if (auto v = get("genus")) c.genus = parse_int("genus", *v);
    if (auto v = get("fiber_area")) c.fiber_area = parse_double("fiber_area", *v);
    if (auto v = get("phi")) c.phi.family = *v;
    if (auto v = get("phi_amp")) c.phi.amp = parse_double("phi_amp", *v);
    if (auto v = get("phi_rate")) c.phi.rate = parse_double("phi_rate", *v);
    if (auto v = get("phi_power")) c.phi.power = parse_double("phi_power", *v);
    if (auto v = get("phi_samples")) c.phi.samples = parse_list("phi_samples", *v);
    if (auto v = get("half_width")) c.half_width = parse_double("half_width", *v);
    if (auto v = get("L")) c.L = parse_double("L", *v);
    if (auto v = get("eps2")) c.eps2 = parse_double("eps2", *v);
    if (auto v = get("models")) c.models = parse_int("models", *v);
    if (auto v = get("doubling")) c.doubling = parse_bool("doubling", *v);
    if (auto v = get("samples_path")) c.samples_path = *v;
    if (auto v = get("area_coeff")) c.area_coeff = parse_double("area_coeff", *v);
    if (auto v = get("area_points")) c.area_points = parse_int("area_points", *v);
    if (auto v = get("seed")) {
        const char* begin = v->data();
        const char* end = begin + v->size();
        const auto [ptr, ec] = std::from_chars(begin, end, c.seed);
        if (ec != std::errc() || ptr != end) throw ConfigError("seed", "expected an unsigned 64-bit integer");
    }
    if (auto v = get("output")) c.output = *v;
    if (auto v = get("csv")) c.csv = *v;
    if (auto v = get("force")) c.force = parse_bool("force", *v);

    require(c.n >= 2, "n", "total dimension must be at least 2");
    require(c.coeff > 0.0, "coeff", "must be positive");
    if (c.omega_sup) require(*c.omega_sup >= 0.0, "omega_sup", "must be nonnegative");
    require(c.t_max > 0.0, "t_max", "must be positive");
    require(c.grid_points >= 2, "grid_points", "need at least 2 grid points");
    require(c.samples >= 1, "samples", "need at least 1 sample");
    require(c.step > 0.0 && c.step < 0.1, "step", "must be in (0, 0.1)");
    require(c.coeff_points >= 2, "coeff_points", "need at least 2 points");
    require(c.genus >= 1, "genus", "fiber genus must be at least 1");
    require(c.fiber_area > 0.0, "fiber_area", "must be positive");
    require(std::find(phi_families().begin(), phi_families().end(), c.phi.family) != phi_families().end(),
            "phi", "unknown family '" + c.phi.family + "'");
    if (c.phi.family != "spline") require(c.phi.amp > 0.0, "phi_amp", "must be positive");
    if (c.phi.family == "spline") require(c.phi.samples.size() >= 4, "phi_samples", "need at least 4 values");
    require(c.half_width > 0.0, "half_width", "must be positive");
    require(c.L > 0.0, "L", "must be positive");
    if (c.command == Command::band && c.models == 0) {
        require(c.L <= c.half_width, "L", "must not exceed half_width");
    }
    require(c.eps2 >= 0.0, "eps2", "must be nonnegative");
    require(c.models >= 0, "models", "must be nonnegative");
    require(c.area_points >= 3, "area_points", "need at least 3 points");
    if (c.command == Command::hypothesis) {
        require(!c.samples_path.empty() || c.area_coeff.has_value(), "samples_path",
                "hypothesis needs samples_path or area_coeff");
        if (c.area_coeff) require(*c.area_coeff >= 0.0, "area_coeff", "must be nonnegative");
    }
    return c;
}

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
    j["command"] = to_string(c.command);
    j["seed"] = c.seed;
    switch (c.command) {
        case Command::verify:
            j["entry"] = c.entry;
            j["coeff"] = c.coeff;
            j["t_max"] = c.t_max;
            j["samples"] = c.samples;
            j["step"] = c.step;
            break;
        case Command::certify:
        case Command::sweep:
            j["n"] = c.n;
            j["coeff"] = c.coeff;
            j["entry"] = c.entry;
            j["omega_sup"] = c.omega_sup ? nlohmann::json(*c.omega_sup) : nlohmann::json(nullptr);
            j["t_max"] = c.t_max;
            j["grid_points"] = c.grid_points;
            if (c.command == Command::sweep) j["coeff_points"] = c.coeff_points;
            break;
        case Command::band:
            j["models"] = c.models;
            if (c.models == 0) {
                j["genus"] = c.genus;
                j["fiber_area"] = c.fiber_area;
                j["phi"] = {{"family", c.phi.family},
                            {"amp", c.phi.amp},
                            {"rate", c.phi.rate},
                            {"power", c.phi.power},
                            {"samples", c.phi.samples}};
                j["half_width"] = c.half_width;
                j["L"] = c.L;
            }
            j["eps2"] = c.eps2;
            j["doubling"] = c.doubling;
            break;
        case Command::catalog:
            break;
        case Command::hypothesis:
            j["samples_path"] = c.samples_path;
            j["area_coeff"] = c.area_coeff ? nlohmann::json(*c.area_coeff) : nlohmann::json(nullptr);
            j["area_points"] = c.area_points;
            break;
    }
    return j;
}

}  // namespace pscend
