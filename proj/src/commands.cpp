#include "pscend/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "pscend/bundle_metric.hpp"
#include "pscend/errors.hpp"
#include "pscend/geometry_catalog.hpp"
#include "pscend/mu_bubble.hpp"
#include "pscend/sampling.hpp"

namespace pscend {

namespace {

using nlohmann::json;

constexpr double kAgreementTolerance = 1e-5;

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string status_for(bool holds) { return holds ? "holds" : "violated"; }

int exit_for(const std::string& status) {
    return status == "holds" || status == "info" ? kExitOk : kExitNegative;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

json certificate_json(const PositivityCertificate& c) {
    json params = json::object();
    for (const auto& [k, v] : c.params) params[k] = v;
    return {{"case", to_string(c.case_label)},
            {"params", params},
            {"verdict", to_string(c.verdict)},
            {"fails_at", opt(c.fails_at)},
            {"bound_negative_at", opt(c.bound_negative_at)},
            {"min_lower_bound", c.min_lower_bound},
            {"min_lower_bound_t", c.min_lower_bound_t},
            {"grid", c.grid_spec},
            {"tail_argument", c.tail_argument}};
}

struct ChosenBase {
    std::string name;
    BaseGeometry base;
};

// omega_sup given: a synthetic base with R_h = 0 and |Omega| = omega_sup.
// Otherwise a catalog entry, defaulting to Heisenberg for n = 4 and to the
// flat product bundle elsewhere.
ChosenBase choose_base(const RunConfig& c) {
    if (c.omega_sup || (c.entry.empty() && c.n != 4)) {
        const double w = c.omega_sup.value_or(0.0);
        ChosenBase out;
        out.name = "synthetic";
        out.base.base_dim = c.n - 2;
        out.base.scalar_h = [](std::span<const double>) { return 0.0; };
        out.base.omega_norm = [w](std::span<const double>) { return w; };
        out.base.omega_sup = w;
        out.base.sample_points = {Point(static_cast<std::size_t>(c.n - 2), 0.0)};
        return out;
    }
    const CatalogEntry e = entry_by_name(c.entry.empty() ? "heisenberg" : c.entry);
    if (e.total_dim() != c.n) {
        throw ConfigError("entry", "'" + e.name + "' has total dimension " + std::to_string(e.total_dim()) +
                                       ", not n = " + std::to_string(c.n));
    }
    return {e.name, e.base};
}

double min_closed_form(int n, const WarpProfile& profile, const BaseGeometry& base, double t) {
    double worst = std::numeric_limits<double>::infinity();
    for (const Point& p : base.sample_points) {
        worst = std::min(worst, scalar_closed_form(profile, n, t, base.scalar_h(p), base.omega_norm(p)));
    }
    return worst;
}

RunOutcome run_verify(const RunConfig& c) {
    const CatalogEntry entry = entry_by_name(c.entry.empty() ? "hopf" : c.entry);
    const int n = entry.total_dim();
    const WarpProfile profile = case_profile(n, c.coeff);
    const ChartMetric chart = entry.total_chart(profile);

    std::mt19937_64 rng(c.seed);
    RunOutcome out;
    out.report.plot.columns = {"t", "closed_form", "oracle", "rel_error", "estimated_error"};
    double max_rel = 0.0;
    double max_est = 0.0;
    for (int i = 0; i < c.samples; ++i) {
        const double t = c.t_max * uniform01(rng);
        const double fiber = 2.0 * std::numbers::pi * uniform01(rng);
        const Point p = entry.random_base_point(rng);
        Point x = {t, fiber};
        x.insert(x.end(), p.begin(), p.end());
        const CurvatureReport oracle = scalar_curvature(chart, x, c.step);
        const double closed = scalar_closed_form(profile, n, t, entry.base.scalar_h(p), entry.base.omega_norm(p));
        const double scale = std::max({std::abs(closed), std::abs(oracle.scalar), 1e-300});
        const double rel = std::abs(closed - oracle.scalar) / scale;
        max_rel = std::max(max_rel, rel);
        max_est = std::max(max_est, oracle.estimated_error);
        out.report.plot.rows.push_back({t, closed, oracle.scalar, rel, oracle.estimated_error});
    }
    const bool ok = max_rel <= kAgreementTolerance;
    out.report.results = {{"status", status_for(ok)},
                          {"entry", entry.name},
                          {"n", n},
                          {"case", to_string(profile.label())},
                          {"samples", c.samples},
                          {"max_rel_error", max_rel},
                          {"max_estimated_error", max_est},
                          {"tolerance", kAgreementTolerance}};
    out.summary = "verify " + entry.name + " (" + to_string(profile.label()) + "): max relative error " +
                  fmt(max_rel) + (ok ? " <= 1e-5" : " > 1e-5");
    return out;
}

RunOutcome run_certify(const RunConfig& c) {
    const ChosenBase chosen = choose_base(c);
    const PositivityCertificate cert = certify(c.n, c.coeff, chosen.base, c.t_max, c.grid_points);
    const WarpProfile profile = case_profile(c.n, c.coeff);

    RunOutcome out;
    out.report.plot.columns = {"t", "min_R", "lower_bound"};
    for (int k = 0; k < c.grid_points; ++k) {
        const double t = c.t_max * k / (c.grid_points - 1);
        const double r = min_closed_form(c.n, profile, chosen.base, t);
        const double lb = c.n <= 3 ? r : case_lower_bound(c.n, c.coeff, chosen.base.omega_sup, t);
        out.report.plot.rows.push_back({t, r, lb});
    }
    std::string status = "inconclusive";
    if (cert.verdict == Verdict::positive) status = "holds";
    if (cert.verdict == Verdict::fails_at) status = "violated";
    out.report.results = {{"status", status}, {"base", chosen.name}, {"certificate", certificate_json(cert)}};
    if (c.n >= 4) out.report.results["threshold"] = opt(threshold(c.n, chosen.base.omega_sup));
    out.summary = "certify n=" + std::to_string(c.n) + " coeff=" + fmt(c.coeff) + " on " + chosen.name + ": " +
                  to_string(cert.verdict);
    return out;
}

RunOutcome run_sweep(const RunConfig& c) {
    if (c.n < 4) throw ConfigError("n", "sweep needs n >= 4 (n = 2, 3 have no free coefficient)");
    const ChosenBase chosen = choose_base(c);
    const std::optional<double> tau = threshold(c.n, chosen.base.omega_sup);
    if (!tau) throw ConfigError("omega_sup", "sweep needs a base with nonzero curvature form");

    RunOutcome out;
    out.report.plot.columns = {"coeff", "lower_bound_t0", "min_lower_bound", "positive"};
    bool consistent = true;
    std::optional<double> last_positive, first_negative;
    for (int i = 0; i < c.coeff_points; ++i) {
        const double coeff = 2.0 * *tau * (i + 1) / (c.coeff_points + 1);
        const PositivityCertificate cert = certify(c.n, coeff, chosen.base, c.t_max, c.grid_points);
        const bool positive = cert.verdict == Verdict::positive;
        if (positive) last_positive = coeff;
        if (!positive && !first_negative) first_negative = coeff;
        // A grid point that lands on the threshold itself may go either way.
        const bool on_threshold = std::abs(coeff - *tau) <= 1e-9 * *tau;
        consistent = consistent && (on_threshold || positive == (coeff < *tau));
        out.report.plot.rows.push_back({coeff, case_lower_bound(c.n, coeff, chosen.base.omega_sup, 0.0),
                                        cert.min_lower_bound, positive ? 1.0 : 0.0});
    }
    out.report.results = {{"status", status_for(consistent)},
                          {"base", chosen.name},
                          {"threshold", *tau},
                          {"last_positive", opt(last_positive)},
                          {"first_not_positive", opt(first_negative)},
                          {"grid_cell", 2.0 * *tau / (c.coeff_points + 1)}};
    out.summary = "sweep n=" + std::to_string(c.n) + ": threshold " + fmt(*tau) +
                  (consistent ? ", verdicts flip at the threshold" : ", verdicts inconsistent with the threshold");
    return out;
}

json audit_json(const AuditResult& a) {
    return {{"outcome", to_string(a.outcome)}, {"r0", a.r0},         {"A0", a.A0},
            {"width", a.width},                {"bound", opt(a.bound)}, {"reason", a.reason}};
}

RunOutcome run_band_single(const RunConfig& c) {
    const BandModel model(c.half_width, make_phi(c.phi, c.half_width), c.genus, c.fiber_area, describe(c.phi));
    const PotentialParams p{c.L, c.eps2, 3};
    const MuBubbleSolution sol = minimize(model, p);
    const AuditResult audit = band_width_audit(model, c.doubling);
    const double gb = 8.0 * std::numbers::pi * (1.0 - c.genus);

    RunOutcome out;
    out.report.plot.columns = {"s", "functional", "band_scalar", "potential"};
    const int points = 201;
    for (int i = 0; i < points; ++i) {
        const double s = -c.L + 2.0 * c.L * (i + 1) / (points + 1);
        out.report.plot.rows.push_back({s, functional(model, s, p), band_scalar(model, s), potential(s, p)});
    }
    const bool ok = audit.outcome != AuditOutcome::violated;
    out.report.results = {
        {"status", status_for(ok)},
        {"model", model.description()},
        {"solution",
         {{"level", sol.level},
          {"area", sol.area},
          {"mean_curvature", sol.mean_curvature},
          {"potential_at_level", sol.potential_at_level},
          {"criticality_residual", std::abs(sol.mean_curvature - sol.potential_at_level)},
          {"second_derivative", sol.second_derivative},
          {"total_curvature", sol.total_curvature},
          {"gauss_bonnet_error", std::abs(sol.total_curvature - gb)}}},
        {"stability_margin", stability_report(model, sol, p)},
        {"audit", audit_json(audit)}};
    out.summary = "band " + model.description() + ": mu-bubble at s=" + fmt(sol.level) + ", width audit " +
                  to_string(audit.outcome);
    return out;
}

RunOutcome run_band_sweep(const RunConfig& c) {
    std::mt19937_64 rng(c.seed);
    RunOutcome out;
    out.report.plot.columns = {"index", "family", "amp", "rate", "power", "genus", "fiber_area",
                               "half_width", "r0", "A0", "width", "bound", "outcome"};
    const auto& families = phi_families();
    int holds = 0, violated = 0, not_applicable = 0;
    for (int i = 0; i < c.models; ++i) {
        const RandomBand band = random_band(rng);
        const AuditResult a = band_width_audit(band.model(), c.doubling);
        const double family =
            static_cast<double>(std::find(families.begin(), families.end(), band.phi.family) - families.begin());
        double code = 2.0;
        if (a.outcome == AuditOutcome::holds) ++holds, code = 0.0;
        if (a.outcome == AuditOutcome::violated) ++violated, code = 1.0;
        if (a.outcome == AuditOutcome::not_applicable) ++not_applicable;
        out.report.plot.rows.push_back({static_cast<double>(i), family, band.phi.amp, band.phi.rate,
                                        band.phi.power, static_cast<double>(band.genus), band.fiber_area,
                                        band.half_width, a.r0, a.A0, a.width, a.bound.value_or(0.0), code});
    }
    out.report.results = {
        {"status", status_for(violated == 0)},
        {"models", c.models},
        {"holds", holds},
        {"violated", violated},
        {"not_applicable", not_applicable},
        {"outcome_codes", "0 = holds, 1 = violated, 2 = not applicable"},
        {"family_codes", families},
        {"distribution",
         "family uniform over constant|exp|cosh|cos|power; amp log-uniform [0.5, 2]; rate log-uniform "
         "[0.1, 2]; power uniform [-1, 1]; genus uniform {1, 2, 3}; fiber area log-uniform [0.5, 20]; "
         "half-width uniform [0.1, 3], shrunk for cos and power to keep phi positive"}};
    out.summary = "band sweep: " + std::to_string(c.models) + " models, " + std::to_string(holds) + " hold, " +
                  std::to_string(violated) + " violated, " + std::to_string(not_applicable) + " not applicable";
    return out;
}

RunOutcome run_catalog(const RunConfig&) {
    json entries = json::array();
    for (const CatalogEntry& e : standard_catalog()) {
        json item = {{"name", e.name},
                     {"base_dim", e.base_dim()},
                     {"total_dim", e.total_dim()},
                     {"connection", e.connection_desc},
                     {"scalar_h", e.base.scalar_h(e.reference_points.front())},
                     {"omega_sup", e.base.omega_sup},
                     {"safe_base_box", {{"lower", e.safe_base_box.lower}, {"upper", e.safe_base_box.upper}}},
                     {"reference_points", e.reference_points}};
        if (e.total_dim() >= 4) item["threshold"] = opt(threshold(e.total_dim(), e.base.omega_sup));
        entries.push_back(item);
    }
    RunOutcome out;
    out.report.results = {{"status", "info"}, {"entries", entries}};
    out.summary = "catalog: " + std::to_string(entries.size()) + " entries";
    return out;
}

std::vector<std::pair<double, double>> read_area_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("samples_path", "cannot read '" + path + "'");
    std::vector<std::pair<double, double>> samples;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream is(line);
        double r = 0.0, a = 0.0;
        std::string rest;
        if (!(is >> r >> a) || (is >> rest)) {
            if (line_no == 1) continue;  // header row
            throw ConfigError("samples_path", "line " + std::to_string(line_no) + ": expected 'r,A'");
        }
        samples.emplace_back(r, a);
    }
    return samples;
}

RunOutcome run_hypothesis(const RunConfig& c) {
    std::vector<std::pair<double, double>> samples;
    std::string source;
    if (!c.samples_path.empty()) {
        samples = read_area_samples(c.samples_path);
        source = "file";
    } else {
        for (int i = 1; i <= c.area_points; ++i) samples.emplace_back(i, *c.area_coeff * i * i);
        source = "A = " + format_double(*c.area_coeff) + " r^2 at r = 1.." + std::to_string(c.area_points);
    }
    const HypothesisVerdict v = theorem1_hypothesis(samples);
    RunOutcome out;
    out.report.plot.columns = {"r", "A", "A_over_r2"};
    for (const auto& [r, a] : samples) out.report.plot.rows.push_back({r, a, a / (r * r)});
    std::string status = "inconclusive";
    if (v.status == HypothesisStatus::satisfied) status = "holds";
    if (v.status == HypothesisStatus::not_satisfied) status = "violated";
    out.report.results = {{"status", status},
                          {"hypothesis", to_string(v.status)},
                          {"source", source},
                          {"tail_ratio", v.tail_ratio},
                          {"threshold", kAreaRatioThreshold},
                          {"margin", v.margin},
                          {"tail_samples", v.tail_samples}};
    out.summary = "hypothesis: " + to_string(v.status) + " (tail min A/r^2 = " + fmt(v.tail_ratio) +
                  ", 12/pi = " + fmt(kAreaRatioThreshold) + ")";
    return out;
}

}  // namespace

RunOutcome run(const RunConfig& config) {
    RunOutcome out;
    switch (config.command) {
        case Command::verify: out = run_verify(config); break;
        case Command::certify: out = run_certify(config); break;
        case Command::sweep: out = run_sweep(config); break;
        case Command::band: out = config.models > 0 ? run_band_sweep(config) : run_band_single(config); break;
        case Command::catalog: out = run_catalog(config); break;
        case Command::hypothesis: out = run_hypothesis(config); break;
    }
    out.report.seed = config.seed;
    out.report.config = to_json(config);
    out.exit_code = exit_for(out.report.results.at("status").get<std::string>());
    return out;
}

OutputPaths resolve_outputs(const RunConfig& config, const Report& report,
                            const std::optional<std::string>& output_dir) {
    OutputPaths paths;
    const std::string stem = to_string(config.command) + "-seed" + std::to_string(config.seed);
    if (!config.output.empty()) {
        paths.report = config.output;
    } else if (output_dir) {
        paths.report = *output_dir + "/" + stem + ".json";
    }
    if (!config.csv.empty()) {
        paths.csv = config.csv;
    } else if (output_dir && !report.plot.empty()) {
        paths.csv = *output_dir + "/" + stem + ".csv";
    }
    return paths;
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const std::string name = to_string(config.command);
    try {
        RunOutcome result = run(config);
        result.report.timestamp = utc_timestamp();
        std::optional<std::string> dir;
        if (const char* env = std::getenv(kOutputDirEnv); env && *env) dir = env;
        const OutputPaths paths = resolve_outputs(config, result.report, dir);
        // Check both targets before writing either, so a refusal leaves nothing half-done.
        for (const auto& p : {paths.report, paths.csv}) {
            std::error_code ec;
            if (p && !config.force && std::filesystem::exists(*p, ec)) {
                throw IoError("refusing to overwrite existing file '" + *p + "' (use --force)");
            }
        }
        if (paths.csv) emit_plot_data(result.report, *paths.csv, config.force);
        if (paths.report) {
            write_report(result.report, *paths.report, config.force);
            out << result.summary << "\n";
        } else {
            out << to_json(result.report).dump(2) << "\n";
            err << result.summary << "\n";
        }
        return result.exit_code;
    } catch (const ConfigError& e) {
        err << name << ": invalid " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << name << ": " << e.what() << "\n";
    }
    return kExitUsage;
}

}  // namespace pscend
