// pscend: command-line front end. Every config key is also a --key flag;
// flags override values read from --config.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "pscend/commands.hpp"
#include "pscend/config.hpp"
#include "pscend/errors.hpp"

namespace {

const std::map<std::string, std::string> kHelp = {
    {"verify", "compare the closed-form scalar curvature with the finite-difference oracle"},
    {"certify", "certify positive scalar curvature for a warped circle bundle"},
    {"sweep", "sweep the free coefficient across (0, 2 x threshold)"},
    {"band", "mu-bubble and band-width audit for one band, or a randomized sweep (--models)"},
    {"catalog", "list the built-in bundle geometries"},
    {"hypothesis", "check the quadratic area-growth hypothesis on (r, A) samples"},
};

bool is_flag(const std::string& key) { return key == "force" || key == "doubling"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Positive scalar curvature verification engine"};
    app.set_version_flag("--version", std::string(pscend::kToolVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::map<std::string, std::string> flag_values;
    std::map<std::string, bool> flag_switches;
    for (const auto& [name, help] : kHelp) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "key = value configuration file");
        for (const std::string& key : pscend::config_keys()) {
            if (key == "command") continue;
            if (is_flag(key)) {
                sub->add_flag("--" + key, flag_switches[key]);
            } else {
                sub->add_option("--" + key, flag_values[key]);
            }
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : pscend::kExitUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    pscend::RunConfig config;
    try {
        pscend::RawConfig raw;
        if (!config_path.empty()) raw = pscend::read_config_file(config_path);
        raw["command"] = command;
        for (const auto& [key, value] : flag_values) {
            if (app.get_subcommands().front()->count("--" + key) > 0) raw[key] = value;
        }
        for (const auto& [key, on] : flag_switches) {
            if (on) raw[key] = "true";
        }
        config = pscend::build_config(raw);
    } catch (const pscend::ConfigError& e) {
        std::cerr << command << ": invalid " << e.what() << "\n";
        return pscend::kExitUsage;
    }
    return pscend::execute(config, std::cout, std::cerr);
}
