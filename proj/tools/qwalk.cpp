// qwalk: command-line front end for the disordered quantum-walk simulator.
//
// Exit codes: 0 success, 1 usage error, 2 config validation error,
// 3 runtime failure.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qwalk/runner.hpp"

namespace {

int default_workers() {
    if (const char* env = std::getenv("QWALK_WORKERS")) {
        try {
            const int w = std::stoi(env);
            if (w >= 1) return w;
        } catch (const std::exception&) {
        }
        std::cerr << "qwalk: ignoring invalid QWALK_WORKERS='" << env << "'\n";
    }
    return 1;
}

void add_overrides(CLI::App* cmd, qwalk::Overrides& o, std::optional<int>& steps,
                   std::optional<int>& realizations, std::optional<std::uint64_t>& seed,
                   std::vector<double>& theta, std::vector<double>& strength) {
    cmd->add_option("--steps", steps, "Number of walk steps T");
    cmd->add_option("--realizations", realizations, "Disorder realizations per ensemble");
    cmd->add_option("--seed", seed, "Master seed");
    cmd->add_option("--workers", o.workers, "Worker threads (default: QWALK_WORKERS or 1)");
    cmd->add_option("--theta", theta,
                    "Coin angle(s) in radians; sweep presets use the list as their grid");
    cmd->add_option("--strength", strength,
                    "Disorder strength(s) in [0,1]; sweep presets use the list as their grid");
    cmd->add_flag("--svg", o.svg, "Also write SVG line charts");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Disordered discrete-time quantum walk simulator"};
    app.require_subcommand(1);

    qwalk::Overrides overrides;
    overrides.workers = default_workers();
    std::optional<int> steps;
    std::optional<int> realizations;
    std::optional<std::uint64_t> seed;
    std::vector<double> theta;
    std::vector<double> strength;
    std::string out = "out";

    std::string preset;
    auto* run = app.add_subcommand("run", "Run a figure preset");
    run->add_option("preset", preset, "Preset name (see list-presets)")->required();
    run->add_option("--out", out, "Output directory");
    add_overrides(run, overrides, steps, realizations, seed, theta, strength);

    std::string config_path;
    auto* config = app.add_subcommand("config", "Run an experiment described by a JSON config");
    config->add_option("file", config_path, "Config file")->required();
    config->add_option("--out", out, "Output directory");
    add_overrides(config, overrides, steps, realizations, seed, theta, strength);

    std::string manifest_path;
    auto* replay = app.add_subcommand("replay", "Re-run the experiment recorded in a manifest");
    replay->add_option("manifest", manifest_path, "manifest.json of an earlier run")->required();
    replay->add_option("--out", out, "Output directory");

    auto* list = app.add_subcommand("list-presets", "List the available presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    overrides.steps = steps;
    overrides.realizations = realizations;
    overrides.seed = seed;
    if (!theta.empty()) overrides.theta = theta;
    if (!strength.empty()) overrides.strength = strength;

    try {
        qwalk::RunManifest manifest;
        if (*list) {
            for (const auto& p : qwalk::presets()) {
                std::cout << p.name << "\t" << p.description << "\n";
            }
            return 0;
        }
        if (*run) manifest = qwalk::run_preset(preset, out, overrides);
        if (*config) manifest = qwalk::run_config(config_path, out, overrides);
        if (*replay) manifest = qwalk::replay(manifest_path, out);
        for (const auto& f : manifest.files) std::cout << (manifest.output_dir / f).string() << "\n";
        std::cout << (manifest.output_dir / "manifest.json").string() << "\n";
        return 0;
    } catch (const qwalk::UsageError& e) {
        std::cerr << "qwalk: " << e.what() << "\n";
        return 1;
    } catch (const qwalk::ValidationError& e) {
        std::cerr << "qwalk: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "qwalk: " << e.what() << "\n";
        return 3;
    }
}
