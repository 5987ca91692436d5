// Command-line front door: run named experiments, emit JSON/CSV reports and
// optional SVG figures.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "confocal/errors.hpp"
#include "confocal/experiments.hpp"

namespace {

int run_experiment(const std::string& name, const std::string& config_path,
                   const std::vector<std::string>& sets, const std::string& out_path,
                   const std::string& svg_path, bool csv, std::uint64_t seed, double tol,
                   bool timing) {
    confocal::ExperimentConfig cfg;
    cfg.experiment = name;
    cfg.seed = seed;
    cfg.tol = tol;
    cfg.timing = timing;
    cfg.want_svg = !svg_path.empty();
    if (!config_path.empty()) cfg.params = confocal::parse_config_file(config_path);
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw confocal::ConfigError("--set expects key=value, got: " + kv);
        cfg.params[kv.substr(0, eq)] = kv.substr(eq + 1); // flags win over the file
    }

    const confocal::ExperimentOutput out = confocal::run(cfg);
    const std::string json = out.report.to_json().dump();
    if (out_path.empty()) {
        std::cout << json << "\n";
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw confocal::ConfigError("cannot write " + out_path);
        f << json << "\n";
        if (csv) {
            const std::string csv_path = out_path + ".csv";
            std::ofstream c(csv_path, std::ios::binary);
            c << out.report.to_csv();
        }
    }
    if (!svg_path.empty()) {
        if (!out.svg) throw confocal::EmptySceneError("experiment produced no figure");
        std::ofstream f(svg_path, std::ios::binary);
        if (!f) throw confocal::ConfigError("cannot write " + svg_path);
        f << *out.svg;
    }
    return out.report.pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"confocal: numerical experiments on confocal quadrics, threads and billiards"};
    app.require_subcommand(1);

    std::string config_path, out_path, svg_path;
    std::vector<std::string> sets;
    bool csv = false, timing = false;
    std::uint64_t seed = 20240901;
    double tol = 0.0;

    for (const auto& name : confocal::experiment_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", config_path, "flat key = value config file");
        sub->add_option("--set", sets, "override key=value (repeatable; flags win)");
        sub->add_option("--out", out_path, "write the JSON report here (default stdout)");
        sub->add_option("--svg", svg_path, "write an SVG figure here");
        sub->add_flag("--csv", csv, "write <out>.csv alongside the JSON report");
        sub->add_option("--seed", seed, "RNG seed (SplitMix64)");
        sub->add_option("--tol", tol, "override the experiment tolerance");
        sub->add_flag("--timing", timing, "record wall time (breaks byte determinism)");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        if (tol < 0 || (tol == 0 && app.get_subcommands().front()->count("--tol")))
            throw confocal::ConfigError("tolerance must be positive");
        return run_experiment(name, config_path, sets, out_path, svg_path, csv, seed, tol,
                              timing);
    } catch (const confocal::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
