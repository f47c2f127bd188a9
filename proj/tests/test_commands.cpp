#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pscend/commands.hpp"
#include "pscend/errors.hpp"

using namespace pscend;
namespace fs = std::filesystem;

namespace {

RunConfig cfg(RawConfig raw) { return build_config(raw); }

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::path(PSCEND_TEST_TMP) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("certify below threshold on Heisenberg is positive") {
    const RunOutcome out = run(cfg({{"command", "certify"}, {"n", "4"}, {"coeff", "0.6"}, {"entry", "heisenberg"}}));
    CHECK(out.exit_code == kExitOk);
    CHECK(out.report.results["certificate"]["verdict"] == "positive");
    CHECK(out.report.results["threshold"].get<double>() == doctest::Approx(2 * std::sqrt(3.0) / 5));
    CHECK(out.report.plot.columns == std::vector<std::string>{"t", "min_R", "lower_bound"});
    CHECK(out.report.plot.rows.size() == 1001);
    CHECK(validate_report(to_json(out.report)).empty());

    const RunOutcome above = run(cfg({{"command", "certify"}, {"coeff", "0.8"}, {"entry", "heisenberg"}}));
    CHECK(above.exit_code == kExitNegative);
    CHECK(above.report.results["status"] == "violated");
}

TEST_CASE("certify n = 2 emits a positive, decreasing curve") {
    const RunOutcome out = run(cfg({{"command", "certify"}, {"n", "2"}}));
    CHECK(out.exit_code == kExitOk);
    const auto& rows = out.report.plot.rows;
    REQUIRE(rows.size() == 1001);
    CHECK(rows.front()[1] == doctest::Approx(0.25));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][1] > 0.0);
        CHECK(rows[i][1] < rows[i - 1][1]);
    }
}

TEST_CASE("verify on Hopf meets the agreement tolerance") {
    const RunOutcome out = run(cfg({{"command", "verify"}, {"entry", "hopf"}}));
    CHECK(out.exit_code == kExitOk);
    CHECK(out.report.results["max_rel_error"].get<double>() <= 1e-5);
    CHECK(out.report.results["case"] == "n4");
    CHECK(out.report.plot.rows.size() == 50);
}

TEST_CASE("threshold sweep changes sign within one grid cell of the threshold") {
    const RunOutcome out =
        run(cfg({{"command", "sweep"}, {"n", "4"}, {"entry", "heisenberg"}, {"coeff_points", "100"}}));
    CHECK(out.exit_code == kExitOk);
    const double tau = out.report.results["threshold"];
    const double cell = out.report.results["grid_cell"];
    const double last = out.report.results["last_positive"];
    const double first = out.report.results["first_not_positive"];
    CHECK(last < tau);
    CHECK(first > tau);
    CHECK(first - last <= cell * (1 + 1e-12));
    // The t = 0 bound column changes sign at the same place.
    for (const auto& row : out.report.plot.rows) CHECK((row[1] > 0) == (row[0] < tau));
}

TEST_CASE("band sweep is reproducible for a fixed seed") {
    const RunConfig c = cfg({{"command", "band"}, {"models", "1000"}, {"seed", "2024"}});
    const RunOutcome a = run(c);
    const RunOutcome b = run(c);
    CHECK(plot_csv(a.report.plot) == plot_csv(b.report.plot));
    CHECK(deterministic_body(a.report).dump() == deterministic_body(b.report).dump());
    CHECK(a.report.results["violated"] == 0);
    CHECK(a.report.plot.rows.size() == 1000);
    const RunOutcome other = run(cfg({{"command", "band"}, {"models", "1000"}, {"seed", "2025"}}));
    CHECK(plot_csv(other.report.plot) != plot_csv(a.report.plot));
}

TEST_CASE("single band run reports the mu-bubble and the audit") {
    const RunOutcome out = run(cfg({{"command", "band"}, {"phi", "cos"}, {"phi_rate", "1"}, {"half_width", "0.5"}, {"L", "0.5"},
                                    {"genus", "1"}, {"fiber_area", "2"}}));
    CHECK(out.exit_code == kExitOk);
    const auto& sol = out.report.results["solution"];
    CHECK(sol["criticality_residual"].get<double>() <= 1e-6);
    CHECK(sol["gauss_bonnet_error"].get<double>() <= 1e-10);
    CHECK(out.report.results["audit"]["outcome"] == "holds");
}

TEST_CASE("hypothesis from synthesized and file samples") {
    CHECK(run(cfg({{"command", "hypothesis"}, {"area_coeff", "3.5"}})).exit_code == kExitOk);
    CHECK(run(cfg({{"command", "hypothesis"}, {"area_coeff", "3.8197186342054881"}})).exit_code == kExitNegative);

    const fs::path dir = fresh_dir("hypothesis");
    {
        std::ofstream f(dir / "samples.csv");
        f << "r,A\n";
        for (int r = 1; r <= 8; ++r) f << r << "," << 2.0 * r * r << "\n";
    }
    const RunOutcome out = run(cfg({{"command", "hypothesis"}, {"samples_path", (dir / "samples.csv").string()}}));
    CHECK(out.exit_code == kExitOk);
    CHECK(out.report.results["tail_ratio"].get<double>() == doctest::Approx(2.0));

    {
        std::ofstream f(dir / "bad.csv");
        f << "r,A\n1,2\nnot a number\n";
    }
    CHECK_THROWS_AS(run(cfg({{"command", "hypothesis"}, {"samples_path", (dir / "bad.csv").string()}})), ConfigError);
}

TEST_CASE("catalog lists every entry") {
    const RunOutcome out = run(cfg({{"command", "catalog"}}));
    CHECK(out.exit_code == kExitOk);
    CHECK(out.report.results["entries"].size() == 8);
    CHECK(out.report.plot.empty());
}

TEST_CASE("an entry of the wrong dimension is a usage error naming the field") {
    try {
        run(cfg({{"command", "certify"}, {"n", "5"}, {"entry", "heisenberg"}}));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "entry");
    }
    std::ostringstream out, err;
    CHECK(execute(cfg({{"command", "certify"}, {"n", "5"}, {"entry", "heisenberg"}}), out, err) == kExitUsage);
    CHECK(err.str().find("entry") != std::string::npos);
}

TEST_CASE("execute writes to the output directory and refuses to overwrite") {
    const fs::path dir = fresh_dir("execute");
    ::setenv(kOutputDirEnv, dir.string().c_str(), 1);
    const RunConfig c = cfg({{"command", "certify"}, {"n", "3"}, {"grid_points", "11"}, {"seed", "5"}});
    std::ostringstream out, err;
    CHECK(execute(c, out, err) == kExitOk);
    CHECK(fs::exists(dir / "certify-seed5.json"));
    CHECK(fs::exists(dir / "certify-seed5.csv"));
    std::ifstream csv(dir / "certify-seed5.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,min_R,lower_bound");

    std::ostringstream out2, err2;
    CHECK(execute(c, out2, err2) == kExitUsage);
    CHECK(err2.str().find("--force") != std::string::npos);

    RunConfig forced = c;
    forced.force = true;
    std::ostringstream out3, err3;
    CHECK(execute(forced, out3, err3) == kExitOk);
    ::unsetenv(kOutputDirEnv);

    // Without a directory the report goes to stdout.
    std::ostringstream out4, err4;
    CHECK(execute(cfg({{"command", "catalog"}}), out4, err4) == kExitOk);
    CHECK(validate_report(nlohmann::json::parse(out4.str())).empty());

    // An explicit CSV path with no curve data is an error.
    RunConfig catalog_csv = cfg({{"command", "catalog"}, {"csv", (dir / "catalog.csv").string()}});
    std::ostringstream out5, err5;
    CHECK(execute(catalog_csv, out5, err5) == kExitUsage);
    CHECK_FALSE(fs::exists(dir / "catalog.csv"));
}

TEST_CASE("resolve_outputs prefers explicit paths") {
    RunConfig c = cfg({{"command", "band"}, {"output", "r.json"}});
    Report r;
    r.plot.columns = {"s"};
    r.plot.rows = {{0.0}};
    const OutputPaths p = resolve_outputs(c, r, std::string("/out"));
    CHECK(*p.report == "r.json");
    CHECK(*p.csv == "/out/band-seed1.csv");
    const OutputPaths none = resolve_outputs(c, Report{}, std::nullopt);
    CHECK_FALSE(none.csv.has_value());
}
