#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "paracont/errors.hpp"
#include "paracont/registry.hpp"
#include "paracont/run_config.hpp"

namespace {

void list_models() {
    for (const auto& e : paracont::ModelRegistry::builtin().entries()) {
        std::cout << e.name << ": " << e.summary << '\n';
        const auto& names = e.defaults.names();
        const auto& values = e.defaults.values();
        for (std::size_t i = 0; i < names.size(); ++i) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", values[i]);
            std::cout << "  " << names[i] << " = " << buf
                      << (names[i] == e.run.bifurcation_param ? "  (default continuation parameter)" : "") << '\n';
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"paracont: parametric continuation of steady states"};
    app.set_version_flag("--version", std::string("paracont ") + PARACONT_VERSION);
    app.require_subcommand(1);

    auto* trace = app.add_subcommand("trace", "trace one branch described by a JSON config");
    std::string config_path, csv, svg, profiles, corrector;
    trace->add_option("config", config_path, "run config (JSON)")->required();
    trace->add_option("--csv", csv, "diagram CSV path (overrides output.csv)");
    trace->add_option("--svg", svg, "SVG plot path (overrides output.svg)");
    trace->add_option("--profiles", profiles, "directory for per-point axial profiles");
    trace->add_option("--corrector", corrector, "Newton corrector after each step")
        ->check(CLI::IsMember({"on", "off"}));

    app.add_subcommand("models", "list registered models and their parameters");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("models")) {
        list_models();
        return 0;
    }

    paracont::RunConfig cfg;
    try {
        cfg = paracont::parse_config(config_path);
    } catch (const paracont::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    if (!csv.empty()) cfg.output.csv = csv;
    if (!svg.empty()) cfg.output.svg = svg;
    if (!profiles.empty()) cfg.output.profiles = profiles;
    if (!corrector.empty()) cfg.continuation.corrector = corrector == "on";
    return paracont::run_trace(cfg, std::cout, std::cerr);
}
